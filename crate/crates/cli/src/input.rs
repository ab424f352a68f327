use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use masseykit::doldkan::BoundedChainComplex;
use masseykit::massey::{cohomology_generators, Dga, DgaBackend, DifferentialBackend, Element, GradedBackend, SimplicialBackend};
use masseykit::simplicial::SimplicialComplex;
use masseykit::Rat;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Problems with the invocation or its inputs; these exit with code 2.
#[derive(Debug)]
pub struct InputError(pub anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(InputError(e.into()))
}

pub fn corpus_dir() -> PathBuf {
    std::env::var_os("MASSEYKIT_CORPUS").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("corpus"))
}

/// A JSON input read from disk, with its digest for provenance.
pub struct Loaded {
    pub path: PathBuf,
    pub sha256: String,
    pub value: Value,
}

/// Reads `name`, falling back to the corpus directory for relative paths
/// that do not exist.
pub fn load(name: &Path) -> Result<Loaded> {
    let path = if name.exists() || name.is_absolute() { name.to_path_buf() } else { corpus_dir().join(name) };
    let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display())).map_err(input_error)?;
    let value = serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display())).map_err(input_error)?;
    Ok(Loaded { path, sha256: hex::encode(Sha256::digest(&bytes)), value })
}

pub fn simplicial_complex(l: &Loaded) -> Result<Arc<SimplicialComplex>> {
    Ok(SimplicialComplex::from_json(&l.value).with_context(|| l.path.display().to_string()).map_err(input_error)?.into_arc())
}

pub fn chain_complex(l: &Loaded) -> Result<BoundedChainComplex> {
    BoundedChainComplex::from_json(&l.value).with_context(|| l.path.display().to_string()).map_err(input_error)
}

pub fn dga(l: &Loaded) -> Result<Dga> {
    Dga::from_json(&l.value).with_context(|| l.path.display().to_string()).map_err(input_error)
}

/// A backend together with enough context to parse class names.
pub enum Backend {
    Simplicial(SimplicialBackend),
    Differential(Box<DifferentialBackend>),
    Dga(DgaBackend),
}

impl Backend {
    pub fn as_graded(&self) -> &dyn GradedBackend {
        match self {
            Backend::Simplicial(b) => b,
            Backend::Differential(b) => &**b,
            Backend::Dga(b) => b,
        }
    }

    /// Parses a class: `@file.json` (an element), `0` or `0@d` (zero), or a
    /// sum of terms `c*name` where `c` is an optional rational, possibly
    /// in parentheses. Names are generator products `x.z` for a DGA, and
    /// `g<i>` or `g<i>@<d>` for the `i`-th cohomology generator of degree
    /// `d` (default 1) otherwise.
    pub fn class(&self, token: &str) -> Result<Element> {
        if let Some(file) = token.strip_prefix('@') {
            let l = load(Path::new(file))?;
            return Element::from_json(&l.value).map_err(input_error);
        }
        let b = self.as_graded();
        if let Some(d) = token.strip_prefix('0') {
            if d.is_empty() || d.starts_with('@') {
                let degree = if d.is_empty() { 1 } else { parse_usize(&d[1..])? };
                return Element::zero(b, 0, degree).map_err(input_error);
            }
        }
        let mut total: Option<Element> = None;
        for term in token.split('+').map(str::trim) {
            let (coef, name) = match term.split_once('*') {
                Some((c, n)) => {
                    let c = c.trim();
                    let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                    (c.parse::<Rat>().map_err(|e| input_error(anyhow!("coefficient '{c}': {e}")))?, n.trim())
                }
                None => match term.strip_prefix('-') {
                    Some(n) => (Rat::from_integer((-1).into()), n),
                    None => (Rat::from_integer(1.into()), term),
                },
            };
            let x = self.named(name)?.scale(&coef);
            total = Some(match total {
                None => x,
                Some(t) => t.add(&x).map_err(|e| input_error(anyhow!("in '{token}': {e}")))?,
            });
        }
        total.ok_or_else(|| input_error(anyhow!("empty class")))
    }

    fn named(&self, name: &str) -> Result<Element> {
        match self {
            Backend::Dga(b) => {
                let dga = b.dga();
                let factors: Vec<&str> = name.split('.').collect();
                let mut degree = 0;
                for f in &factors {
                    degree += dga.generator_degree(f).ok_or_else(|| input_error(anyhow!("unknown generator '{f}'")))?;
                }
                dga.element(degree, &[(1, &factors)]).map_err(input_error)
            }
            _ => {
                let rest = name.strip_prefix('g').ok_or_else(|| input_error(anyhow!("class '{name}' should look like g0, g1@2, 0 or @file.json")))?;
                let (index, degree) = match rest.split_once('@') {
                    Some((i, d)) => (parse_usize(i)?, parse_usize(d)?),
                    None => (parse_usize(rest)?, 1),
                };
                let gens = cohomology_generators(self.as_graded(), 0, degree).map_err(input_error)?;
                gens.get(index).cloned().ok_or_else(|| input_error(anyhow!("degree {degree} has {} generators, no g{index}", gens.len())))
            }
        }
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|e| input_error(anyhow!("'{s}': {e}")))
}

pub fn backend(kind: &str, complex: Option<&Loaded>, dga_file: Option<&Loaded>) -> Result<Backend> {
    let need_complex = || complex.ok_or_else(|| input_error(anyhow!("--backend {kind} needs --complex"))).and_then(simplicial_complex);
    Ok(match kind {
        "singular" => Backend::Simplicial(SimplicialBackend::singular(&need_complex()?)),
        "derham" => Backend::Simplicial(SimplicialBackend::de_rham(&need_complex()?)),
        "differential" => Backend::Differential(Box::new(DifferentialBackend::new(&need_complex()?).map_err(input_error)?)),
        "dga" => {
            let l = dga_file.ok_or_else(|| input_error(anyhow!("--backend dga needs --dga")))?;
            Backend::Dga(DgaBackend::new(dga(l)?))
        }
        other => bail!(InputError(anyhow!("unknown backend '{other}'"))),
    })
}
