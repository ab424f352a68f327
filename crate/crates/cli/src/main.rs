mod input;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};
use masseykit::deligne::{build_deligne, deligne_cohomology, integrate_i, DeligneCochain};
use masseykit::doldkan::{counit_check, dk, homotopy_groups, BoundedChainComplex};
use masseykit::massey::{class_report, find_defining_system, massey_product, SearchOptions};
use masseykit::simplicial::cohomology;
use rand::SeedableRng;
use serde_json::{json, Value};

use input::{input_error, load, InputError, Loaded};

#[derive(Parser)]
#[command(name = "masseykit", version, about = "Exact differential cohomology and Massey products on simplicial models")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Singular,
    Derham,
    Differential,
    Dga,
}

impl BackendArg {
    fn name(self) -> &'static str {
        match self {
            BackendArg::Singular => "singular",
            BackendArg::Derham => "derham",
            BackendArg::Differential => "differential",
            BackendArg::Dga => "dga",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Hexagon,
    Slide,
    Naturality,
    Forget,
    TwistedMc,
    Doldkan,
}

#[derive(Subcommand)]
enum Command {
    /// Integral cohomology of a simplicial complex.
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
        /// Only this degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Differential cohomology at a level.
    Diffcohomology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        level: usize,
        /// Total degree (defaults to the level).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Product of two classes.
    Cup {
        #[arg(long, value_enum)]
        backend: BackendArg,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        dga: Option<PathBuf>,
        #[arg(long, num_args = 2, required = true)]
        classes: Vec<String>,
    },
    /// Massey product of two or more classes.
    Massey {
        #[arg(long, value_enum)]
        backend: BackendArg,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        dga: Option<PathBuf>,
        #[arg(long, num_args = 2.., required = true)]
        classes: Vec<String>,
        /// Bound on retried defining systems when the greedy pass is obstructed.
        #[arg(long, default_value_t = 0)]
        max_enum: usize,
    },
    /// Dold-Kan truncation of a chain complex, its Moore complex and homotopy groups.
    Dk {
        /// Chain complex JSON; a random complex is used when absent.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Truncation level (defaults to the top degree plus two).
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include every face and degeneracy matrix.
        #[arg(long)]
        full: bool,
    },
    /// Property suite over a complex or the corpus.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Obstructed,
    Failed,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Obstructed => "obstructed",
            Status::Failed => "failed",
        }
    }
}

/// Result of one command before provenance is attached.
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
}

impl Outcome {
    pub fn ok(payload: Value) -> Self {
        Outcome { status: Status::Ok, payload }
    }
}

/// Provenance shared by all reports: digests of inputs and the options.
#[derive(Default)]
pub struct Provenance {
    inputs: Vec<Value>,
}

impl Provenance {
    pub fn load(&mut self, path: &Path) -> Result<Loaded> {
        let l = load(path)?;
        self.inputs.push(json!({ "path": path.display().to_string(), "sha256": l.sha256 }));
        Ok(l)
    }
}

fn run(command: &Command, prov: &mut Provenance) -> Result<(Outcome, Value)> {
    match command {
        Command::Cohomology { complex, degree } => {
            let k = input::simplicial_complex(&prov.load(complex)?)?;
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![*d],
                None => (0..=k.dimension().max(0) as usize).collect(),
            };
            let groups: Vec<Value> = degrees
                .iter()
                .map(|&n| cohomology(&k, n).map(|h| json!({ "degree": n, "group": h.to_json() })))
                .collect::<masseykit::Result<_>>()
                .map_err(input_error)?;
            Ok((Outcome::ok(json!({ "cohomology": groups })), json!({ "degree": degree })))
        }
        Command::Diffcohomology { complex, level, degree } => {
            let k = input::simplicial_complex(&prov.load(complex)?)?;
            let degree = degree.unwrap_or(*level);
            let c = build_deligne(&k, *level).map_err(input_error)?;
            let h = deligne_cohomology(&c, degree)?;
            let integral = if degree >= 1 { Some(cohomology(&k, degree)?) } else { None };
            // Lattice generators of the cocycles with the integral class of
            // their integration image.
            let mut generators = Vec::new();
            for z in h.cocycles.lattice_basis() {
                let x = DeligneCochain::from_vector(&c, degree, z)?;
                let image = match (&integral, degree == *level) {
                    (Some(hz), true) => {
                        let ints = integrate_i(&x)?.to_int_vector().ok_or_else(|| anyhow!("integration image is not integral"))?;
                        json!(hz.class_coordinates(&ints)?.iter().map(ToString::to_string).collect::<Vec<_>>())
                    }
                    _ => Value::Null,
                };
                generators.push(json!({ "cochain": x.to_json(), "integration_class": image }));
            }
            let payload = json!({
                "level": level,
                "degree": degree,
                "group": h.group,
                "display": h.group.to_string(),
                "integral_cohomology": integral.as_ref().map(|g| g.to_json()),
                "lattice_generators": generators,
            });
            Ok((Outcome::ok(payload), json!({ "level": level, "degree": degree })))
        }
        Command::Cup { backend, complex, dga, classes } => {
            let b = load_backend(prov, *backend, complex.as_deref(), dga.as_deref())?;
            let (x, y) = (b.class(&classes[0])?, b.class(&classes[1])?);
            let g = b.as_graded();
            let xy = g.cup(&x, &y).map_err(input_error)?;
            let class = if g.is_closed(&xy)? { Some(class_report(g, &xy)?) } else { None };
            let payload = json!({ "product": xy.to_json(), "class": class });
            Ok((Outcome::ok(payload), json!({ "backend": backend.name(), "classes": classes })))
        }
        Command::Massey { backend, complex, dga, classes, max_enum } => {
            let b = load_backend(prov, *backend, complex.as_deref(), dga.as_deref())?;
            let elements = classes.iter().map(|c| b.class(c)).collect::<Result<Vec<_>>>()?;
            let g = b.as_graded();
            let options = json!({ "backend": backend.name(), "classes": classes, "max_enum": max_enum });
            let found = find_defining_system(g, &elements, &SearchOptions { max_enum: *max_enum }).map_err(input_error)?;
            let outcome = match found {
                None => {
                    let mut reproduce = vec!["masseykit".to_string(), "massey".into(), "--backend".into(), backend.name().into()];
                    if let Some(c) = complex {
                        reproduce.extend(["--complex".into(), c.display().to_string()]);
                    }
                    if let Some(d) = dga {
                        reproduce.extend(["--dga".into(), d.display().to_string()]);
                    }
                    reproduce.push("--classes".into());
                    reproduce.extend(classes.iter().cloned());
                    reproduce.extend(["--max-enum".into(), max_enum.to_string()]);
                    Outcome {
                        status: Status::Obstructed,
                        payload: json!({
                            "witness": {
                                "reason": "some band equation of the defining system has no solution",
                                "classes": elements.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                                "reproduce": reproduce.join(" "),
                            }
                        }),
                    }
                }
                Some(ds) => Outcome::ok(massey_product(g, &ds)?.to_json()),
            };
            Ok((outcome, options))
        }
        Command::Dk { complex, level, seed, full } => {
            let c = match complex {
                Some(p) => input::chain_complex(&prov.load(p)?)?,
                None => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                    BoundedChainComplex::random(&mut rng, 2, 5)
                }
            };
            let n = level.unwrap_or(c.top + 2);
            let s = dk(&c, n)?;
            let pi = homotopy_groups(&s)?;
            let counit = counit_check(&s)?;
            let moore = masseykit::doldkan::moore_normalize(&s)?;
            let payload = json!({
                "complex": c.to_json(),
                "level_ranks": (0..=n).map(|k| s.generators(k)).collect::<Vec<_>>(),
                "moore": moore.to_json(),
                "homotopy_groups": pi.iter().map(|g| json!({ "group": g, "display": g.to_string() })).collect::<Vec<_>>(),
                "homology": (0..n).map(|k| c.homology(k).map(|g| g.to_string())).collect::<masseykit::Result<Vec<_>>>()?,
                "counit_isomorphism": counit.holds(),
                "truncation": if *full { s.to_json() } else { Value::Null },
            });
            let status = if counit.holds() && (0..n).all(|k| c.homology(k).ok().as_ref() == pi.get(k)) { Status::Ok } else { Status::Failed };
            Ok((Outcome { status, payload }, json!({ "level": n, "seed": seed, "full": full })))
        }
        Command::Check { suite, complex, level, seed } => {
            let loaded = complex.as_deref().map(|p| prov.load(p)).transpose()?;
            let options = json!({ "suite": suite_name(*suite), "level": level, "seed": seed });
            let ctx = suites::Context { complex: loaded.as_ref(), complex_arg: complex.as_ref().map(|p| p.display().to_string()), level: *level, seed: *seed };
            let outcome = match suite {
                Suite::Hexagon => suites::hexagon(&ctx)?,
                Suite::Slide => suites::slide(&ctx)?,
                Suite::Naturality => suites::naturality(&ctx)?,
                Suite::Forget => suites::forget(&ctx)?,
                Suite::TwistedMc => suites::twisted_mc(&ctx)?,
                Suite::Doldkan => suites::doldkan(&ctx)?,
            };
            Ok((outcome, options))
        }
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Hexagon => "hexagon",
        Suite::Slide => "slide",
        Suite::Naturality => "naturality",
        Suite::Forget => "forget",
        Suite::TwistedMc => "twisted-mc",
        Suite::Doldkan => "doldkan",
    }
}

fn load_backend(prov: &mut Provenance, kind: BackendArg, complex: Option<&Path>, dga: Option<&Path>) -> Result<input::Backend> {
    let complex = complex.map(|p| prov.load(p)).transpose()?;
    let dga = dga.map(|p| prov.load(p)).transpose()?;
    input::backend(kind.name(), complex.as_ref(), dga.as_ref())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Cohomology { .. } => "cohomology",
        Command::Diffcohomology { .. } => "diffcohomology",
        Command::Cup { .. } => "cup",
        Command::Massey { .. } => "massey",
        Command::Dk { .. } => "dk",
        Command::Check { .. } => "check",
    }
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = dir.join(format!(".{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("report")));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut prov = Provenance::default();
    let (status, payload, options, code) = match run(&cli.command, &mut prov) {
        Ok((outcome, options)) => {
            let code = if outcome.status == Status::Ok { 0 } else { 1 };
            (outcome.status, outcome.payload, options, code)
        }
        Err(e) => {
            let input = e.downcast_ref::<InputError>().is_some() || e.downcast_ref::<masseykit::Error>().is_some_and(is_input_error);
            eprintln!("error: {e:#}");
            (Status::Failed, json!({ "error": format!("{e:#}") }), Value::Null, if input { 2 } else { 1 })
        }
    };
    let report = json!({
        "status": status.name(),
        "payload": payload,
        "provenance": {
            "tool": "masseykit",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command_name(&cli.command),
            "options": options,
            "inputs": prov.inputs,
        },
    });
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomically(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn is_input_error(e: &masseykit::Error) -> bool {
    use masseykit::Error::*;
    matches!(e, Parse(_) | DimensionMismatch(_) | InvalidComplex(_) | NotAComplex(_) | CompositionNonzero | NotACocycle(_) | GradingMismatch(_) | UnknownName(_) | MapInvalid(_) | ComplexMismatch)
}
