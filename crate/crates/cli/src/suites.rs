//! Property suites behind `masseykit check`.

use std::sync::Arc;

use anyhow::{anyhow, Result};
use masseykit::deligne::{hexagon_check, integrate_i};
use masseykit::doldkan::{counit_check, dk, homotopy_groups, BoundedChainComplex};
use masseykit::massey::{
    check_naturality, check_slide, cohomology_basis, cohomology_generators, find_defining_system, forget_i, forget_system, perturb_homotopies, twisted_corner_prediction, twisted_mc_defect, Dga,
    DgaBackend, DifferentialBackend, Element, GradedBackend, SearchOptions, SimplicialBackend,
};
use masseykit::simplicial::{Coefficients, GradedCochain, SimplicialComplex, SimplicialMap};
use masseykit::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{self, input_error, Loaded};
use crate::{Outcome, Status};

/// Arguments shared by the suites, kept to rebuild a reproducing command.
pub struct Context<'a> {
    pub complex: Option<&'a Loaded>,
    pub complex_arg: Option<String>,
    pub level: Option<usize>,
    pub seed: u64,
}

impl Context<'_> {
    fn reproduce(&self, suite: &str) -> String {
        let mut cmd = format!("masseykit check {suite}");
        if let Some(c) = &self.complex_arg {
            cmd += &format!(" --complex {c}");
        }
        if let Some(n) = self.level {
            cmd += &format!(" --level {n}");
        }
        cmd + &format!(" --seed {}", self.seed)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The given complex, or the named corpus complexes.
    fn complexes(&self, defaults: &[&str]) -> Result<Vec<(String, Arc<SimplicialComplex>)>> {
        match self.complex {
            Some(l) => Ok(vec![(l.path.display().to_string(), input::simplicial_complex(l)?)]),
            None => defaults
                .iter()
                .map(|name| {
                    let l = input::load(format!("{name}.json").as_ref())?;
                    Ok((name.to_string(), input::simplicial_complex(&l)?))
                })
                .collect(),
        }
    }

    /// Assembles the outcome: ok when no failures, else failed with a witness.
    fn finish(&self, suite: &str, checks: usize, failures: Vec<Value>, details: Value) -> Outcome {
        let status = if failures.is_empty() { Status::Ok } else { Status::Failed };
        let mut payload = json!({ "suite": suite, "checks": checks, "failures": failures.len(), "details": details });
        if status == Status::Failed {
            payload["witness"] = json!({ "failures": failures, "reproduce": self.reproduce(suite) });
        }
        Outcome { status, payload }
    }
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// A random degree 1 class: rational multiples of divisible generators
/// and integer multiples of lattice generators.
fn random_class(b: &dyn GradedBackend, rng: &mut ChaCha8Rng) -> Result<Element> {
    let (span, lattice) = cohomology_basis(b, 0, 1)?;
    let mut x = Element::zero(b, 0, 1)?;
    for g in span {
        x = x.add(&Element::new(0, 1, g).scale(&rat(rng.gen_range(-3..=3), rng.gen_range(1..=4))))?;
    }
    for g in lattice {
        x = x.add(&Element::new(0, 1, g).scale(&rat(rng.gen_range(-2..=2), 1)))?;
    }
    Ok(x)
}

pub fn hexagon(ctx: &Context) -> Result<Outcome> {
    let levels: Vec<usize> = match ctx.level {
        Some(n) => vec![n],
        None => (1..=3).collect(),
    };
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut details = Vec::new();
    for (name, k) in ctx.complexes(&["pt", "s1", "s2", "t2", "rp2"])? {
        for &n in &levels {
            let report = hexagon_check(&k, n).map_err(input_error)?;
            for j in &report.junctions {
                checks += 1;
                if !j.exact {
                    failures.push(json!({ "complex": name, "level": n, "junction": j }));
                }
            }
            details.push(json!({ "complex": name, "level": n, "report": report.to_json() }));
        }
    }
    Ok(ctx.finish("hexagon", checks, failures, Value::Array(details)))
}

pub fn slide(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let (backend, label): (Box<dyn GradedBackend>, String) = match ctx.complex {
        Some(l) => (Box::new(SimplicialBackend::singular(&input::simplicial_complex(l)?)), l.path.display().to_string()),
        None => (Box::new(DgaBackend::new(Dga::heisenberg())), "heisenberg".into()),
    };
    let b = &*backend;
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut systems = 0;
    for _ in 0..20 {
        let classes = match ctx.complex {
            Some(_) => vec![random_class(b, &mut rng)?, Element::zero(b, 0, 1)?, random_class(b, &mut rng)?],
            None => {
                let dga = Dga::heisenberg();
                ["x", "x", "y"].iter().map(|n| Ok(dga.element(1, &[(1, &[*n])])?.scale(&rat(rng.gen_range(-3..=3), 1)))).collect::<Result<_>>()?
            }
        };
        let Some(ds) = find_defining_system(b, &classes, &SearchOptions { max_enum: 10 })? else { continue };
        systems += 1;
        for i in 1..=3 {
            for m in [-1, 0, 2, 3] {
                checks += 1;
                let v = check_slide(b, &ds, i, m)?;
                if !v.holds() {
                    failures.push(json!({ "classes": classes.iter().map(Element::to_json).collect::<Vec<_>>(), "slot": i, "m": m, "verdict": v.to_json() }));
                }
            }
        }
    }
    Ok(ctx.finish("slide", checks, failures, json!({ "backend": label, "systems": systems })))
}

/// Order-preserving maps into `k`: the identity and every vertex inclusion
/// of a point, plus the collapse of `k` to a point.
fn maps_into(k: &Arc<SimplicialComplex>) -> Result<Vec<SimplicialMap>> {
    let pt = SimplicialComplex::point().into_arc();
    let mut maps = vec![SimplicialMap::identity(k)];
    for v in 0..k.vertex_count() {
        maps.push(SimplicialMap::constant(&pt, k, v)?);
    }
    maps.push(SimplicialMap::new(k, &pt, vec![0; k.vertex_count()])?);
    Ok(maps)
}

pub fn naturality(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (name, k) in ctx.complexes(&["s1", "t2"])? {
        for f in maps_into(&k)? {
            for b in [SimplicialBackend::singular(f.target()), SimplicialBackend::de_rham(f.target())] {
                let classes = [random_class(&b, &mut rng)?, Element::zero(&b, 0, 1)?, random_class(&b, &mut rng)?];
                let Some(ds) = find_defining_system(&b, &classes, &SearchOptions { max_enum: 10 })? else { continue };
                checks += 1;
                let v = check_naturality(&b, &f, &ds)?;
                if !v.holds() {
                    failures.push(json!({ "complex": name, "vertex_map": f.vertex_map(), "backend": b.describe(), "verdict": v.to_json() }));
                }
            }
        }
    }
    Ok(ctx.finish("naturality", checks, failures, Value::Null))
}

pub fn forget(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let mut checks = 0;
    let mut obstructed = 0;
    let mut failures = Vec::new();
    for (name, k) in ctx.complexes(&["s1", "t2"])? {
        let b = DifferentialBackend::new(&k).map_err(input_error)?;
        for _ in 0..10 {
            let classes = [random_class(&b, &mut rng)?, Element::zero(&b, 0, 1)?, random_class(&b, &mut rng)?];
            let Some(ds) = find_defining_system(&b, &classes, &SearchOptions::default())? else {
                obstructed += 1;
                continue;
            };
            checks += 1;
            let v = forget_i(&b, &ds)?;
            if !v.holds() {
                failures.push(json!({ "complex": name, "system": ds.to_json(), "verdict": v.to_json() }));
            }
        }
    }
    Ok(ctx.finish("forget", checks, failures, json!({ "obstructed_draws": obstructed })))
}

/// Refines a singular system by perturbing its homotopies with closed
/// forms and compares the curvature of the corner with the twisted
/// product of periods and perturbations.
pub fn twisted_mc(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng();
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut stated_sign = 0;
    for (name, k) in ctx.complexes(&["t2"])? {
        let b = DifferentialBackend::new(&k).map_err(input_error)?;
        let g = cohomology_generators(&b, 0, 1)?;
        if g.len() < 2 {
            return Err(input_error(anyhow!("{name} needs two independent degree 1 classes")));
        }
        let (x, y) = (g[g.len() - 2].clone(), g[g.len() - 1].clone());
        let ds = find_defining_system(&b, &[x.clone(), Element::zero(&b, 0, 1)?, y.clone()], &SearchOptions::default())?.ok_or_else(|| anyhow!("no defining system on {name}"))?;
        let period = |e: &Element| -> Result<GradedCochain> { Ok(integrate_i(&b.cochain(e)?)?.with_coefficients(Coefficients::Rat)?) };
        let (a1, a3) = (period(ds.class(1))?, period(ds.class(3))?);
        let n = k.count(0);
        let mut random_function = || GradedCochain::from_vector(&k, 0, Coefficients::Rat, &(0..n).map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=5))).collect::<Vec<_>>());
        for _ in 0..5 {
            let eta13 = period(&x)?.add(&random_function().coboundary())?;
            let eta24 = period(&y)?.add(&random_function().coboundary())?;
            let refined = perturb_homotopies(&b, &ds, &[((1, 2), eta13.clone()), ((2, 3), eta24.clone())])?;
            let report = twisted_mc_defect(&b, &refined, &forget_system(&b, &refined)?)?;
            let twisted = twisted_corner_prediction(&b, &refined, &eta13, &eta24)?;
            if report.corner_form == a1.cup(&eta24)?.sub(&eta13.cup(&a3)?)? {
                stated_sign += 1;
            }
            checks += 1;
            if report.is_zero() || !report.in_forms_ideal || report.corner_form != twisted {
                failures.push(json!({ "complex": name, "report": report.to_json(), "prediction": twisted.to_json() }));
            }
        }
    }
    Ok(ctx.finish("twisted-mc", checks, failures, json!({ "untwisted_difference_sign_holds": stated_sign })))
}

pub fn doldkan(ctx: &Context) -> Result<Outcome> {
    let complexes: Vec<BoundedChainComplex> = match ctx.complex {
        Some(l) => vec![input::chain_complex(l)?],
        None => {
            let mut rng = ctx.rng();
            (0..10).map(|i| BoundedChainComplex::random(&mut rng, 1 + i % 3, 4)).collect()
        }
    };
    let mut checks = 0;
    let mut failures = Vec::new();
    for (i, c) in complexes.iter().enumerate() {
        let n = ctx.level.unwrap_or(c.top + 2);
        let s = dk(c, n)?;
        checks += 1;
        if let Err(e) = s.verify_identities() {
            failures.push(json!({ "complex": i, "identities": e.to_string() }));
        }
        let counit = counit_check(&s)?;
        checks += 1;
        if !counit.holds() {
            failures.push(json!({ "complex": i, "counit_failures": counit.failures, "chain_map": counit.chain_map }));
        }
        let pi = homotopy_groups(&s)?;
        for (k, g) in pi.iter().enumerate() {
            checks += 1;
            let h = c.homology(k)?;
            if *g != h {
                failures.push(json!({ "complex": c.to_json(), "degree": k, "homotopy": g.to_string(), "homology": h.to_string() }));
            }
        }
    }
    Ok(ctx.finish("doldkan", checks, failures, json!({ "complexes": complexes.len() })))
}
