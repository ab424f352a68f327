use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::backend::{BackendKind, DifferentialBackend, Element, GradedBackend, SimplicialBackend};
use super::connection::{is_formal_connection, mc_curvature, FormalConnectionMatrix};
use super::product::{massey_product, triple_indeterminacy};
use super::search::{find_defining_system, SearchOptions};
use crate::deligne::{de_rham_image, include_a};
use crate::deligne::maps::integer_row;
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain, SimplicialMap};
use crate::Rat;

/// Outcome of [`check_slide`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlideVerdict {
    /// The scaled matrix satisfies the Maurer–Cartan equation.
    pub formal: bool,
    /// Its corner is exactly `m` times the original corner.
    pub corner_scaled: bool,
    /// The two classes agree in cohomology.
    pub class_scaled: bool,
}

impl SlideVerdict {
    pub fn holds(&self) -> bool {
        self.formal && self.corner_scaled && self.class_scaled
    }

    pub fn to_json(&self) -> Value {
        json!({ "formal": self.formal, "corner_scaled": self.corner_scaled, "class_scaled": self.class_scaled, "holds": self.holds() })
    }
}

/// Scales every entry `a_(s,t)` with `s <= i <= t` by `m`: the resulting
/// defining system for `(…, m a_i, …)` has `m` times the corner.
pub fn slide_system(ds: &FormalConnectionMatrix, i: usize, m: i64) -> Result<FormalConnectionMatrix> {
    if i == 0 || i > ds.l {
        return Err(Error::DimensionMismatch(format!("no class {i} in an {}-fold product", ds.l)));
    }
    let k = Rat::from_integer(m.into());
    let mut out = ds.clone();
    for (&(s, t), x) in out.entries.iter_mut() {
        if s <= i && i <= t {
            *x = x.scale(&k);
        }
    }
    Ok(out)
}

pub fn check_slide(backend: &dyn GradedBackend, ds: &FormalConnectionMatrix, i: usize, m: i64) -> Result<SlideVerdict> {
    if !is_formal_connection(backend, ds)?.formal {
        return Err(Error::NotAConnection("slide needs a defining system".into()));
    }
    let scaled = slide_system(ds, i, m)?;
    let formal = is_formal_connection(backend, &scaled)?.formal;
    let expected = ds.corner(backend)?.scale(&Rat::from_integer(m.into()));
    let corner = scaled.corner(backend)?;
    let corner_scaled = corner == expected;
    let class_scaled = backend.is_exact(&corner.sub(&expected)?)?;
    Ok(SlideVerdict { formal, corner_scaled, class_scaled })
}

/// Outcome of [`check_naturality`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalityVerdict {
    /// The pulled-back matrix is a defining system on the source.
    pub formal: bool,
    /// `f*` of the corner equals the corner of the pulled-back system.
    pub corner_commutes: bool,
    /// Both sides have the same class.
    pub class_commutes: bool,
}

impl NaturalityVerdict {
    pub fn holds(&self) -> bool {
        self.formal && self.corner_commutes && self.class_commutes
    }

    pub fn to_json(&self) -> Value {
        json!({ "formal": self.formal, "corner_commutes": self.corner_commutes, "class_commutes": self.class_commutes, "holds": self.holds() })
    }
}

/// Pulls a simplicial defining system back along `f`, which must preserve
/// vertex order.
pub fn check_naturality(backend: &dyn GradedBackend, f: &SimplicialMap, ds: &FormalConnectionMatrix) -> Result<NaturalityVerdict> {
    let source = match backend.kind() {
        BackendKind::Singular => SimplicialBackend::singular(f.source()),
        BackendKind::DeRham => SimplicialBackend::de_rham(f.source()),
        other => return Err(Error::BackendUnsupported(other.name().into())),
    };
    let target = backend.complex().ok_or_else(|| Error::BackendUnsupported(backend.kind().name().into()))?;
    if **target != **f.target() {
        return Err(Error::ComplexMismatch);
    }
    if !f.is_order_preserving() {
        return Err(Error::MapInvalid("naturality of the cup product needs an order-preserving map".into()));
    }
    let target_backend = match backend.kind() {
        BackendKind::Singular => SimplicialBackend::singular(target),
        _ => SimplicialBackend::de_rham(target),
    };
    let pull = |x: &Element| -> Result<Element> { Ok(source.element(x.weight, &f.pullback(&target_backend.cochain(x))?)) };
    let pulled = ds.map_entries(ds.kind, ds.epsilon, |_, _, x| pull(x))?;
    let formal = is_formal_connection(&source, &pulled)?.formal;
    let lhs = pull(&ds.corner(backend)?)?;
    let rhs = pulled.corner(&source)?;
    let corner_commutes = lhs == rhs;
    let class_commutes = source.is_exact(&lhs.sub(&rhs)?)?;
    Ok(NaturalityVerdict { formal, corner_commutes, class_commutes })
}

/// Outcome of [`forget_i`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetVerdict {
    /// `I` applied entrywise is a singular defining system.
    pub formal: bool,
    /// `I` of the corner is the corner of the image system.
    pub corner_commutes: bool,
    /// For triple products: `I(corner)` lies in the coset of the product
    /// computed from a freshly searched singular defining system.
    pub in_product: Option<bool>,
    /// `I(corner)` is a torsion class.
    pub torsion: bool,
}

impl ForgetVerdict {
    pub fn holds(&self) -> bool {
        self.formal && self.corner_commutes && self.in_product != Some(false) && self.torsion
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formal": self.formal,
            "corner_commutes": self.corner_commutes,
            "in_product": self.in_product,
            "torsion": self.torsion,
            "holds": self.holds(),
        })
    }
}

/// Integer row of a Deligne element, as a singular element of weight 0.
pub fn forget_element(backend: &DifferentialBackend, x: &Element) -> Result<Element> {
    let row = integer_row(&backend.cochain(x)?);
    Ok(Element::new(0, x.degree, row.to_vector()))
}

/// Applies `I` entrywise to a differential defining system.
pub fn forget_system(backend: &DifferentialBackend, ds: &FormalConnectionMatrix) -> Result<FormalConnectionMatrix> {
    ds.map_entries(BackendKind::Singular, 0, |_, _, x| forget_element(backend, x))
}

pub fn forget_i(backend: &DifferentialBackend, ds: &FormalConnectionMatrix) -> Result<ForgetVerdict> {
    if ds.kind != BackendKind::Differential || !is_formal_connection(backend, ds)?.formal {
        return Err(Error::NotAConnection("forgetting needs a differential defining system".into()));
    }
    let k = backend.base().complex().clone();
    let singular = SimplicialBackend::singular(&k);
    let image = forget_system(backend, ds)?;
    let formal = is_formal_connection(&singular, &image)?.formal;
    let corner = forget_element(backend, &ds.corner(backend)?)?;
    let corner_commutes = corner == image.corner(&singular)?;
    let in_product = if ds.l == 3 && ds.corner_mask.len() == 1 {
        let classes: Vec<Element> = (1..=3).map(|i| image.class(i).clone()).collect();
        match find_defining_system(&singular, &classes, &SearchOptions::default())? {
            Some(fresh) => {
                let other = massey_product(&singular, &fresh)?.representative;
                let a2 = &classes[1];
                let ind = triple_indeterminacy(&singular, &classes[0], (a2.weight, a2.degree), &classes[2])?;
                Some(ind.contains(&corner.sub(&other)?))
            }
            // The image system itself witnesses a defining system, so the
            // greedy search should not be obstructed; report that as failure.
            None => Some(false),
        }
    } else {
        None
    };
    let rational = SimplicialBackend::de_rham(&k);
    let torsion = rational.is_exact(&corner)?;
    Ok(ForgetVerdict { formal, corner_commutes, in_product, torsion })
}

/// Defect of a differential refinement of a singular defining system.
#[derive(Clone, Debug)]
pub struct DefectReport {
    /// `μ(Â)` off the corner mask, keyed by `(s, t)`; only nonzero entries.
    pub defect: BTreeMap<(usize, usize), Element>,
    /// Every defect entry has zero integer row.
    pub in_forms_ideal: bool,
    /// De Rham image of the corner `Σ ā_(1,i) ∪ a_(i+1,l)` of `Â`.
    pub corner_form: GradedCochain,
    /// When the defect vanishes: whether the corner has zero de Rham image.
    pub flat: Option<bool>,
}

impl DefectReport {
    pub fn is_zero(&self) -> bool {
        self.defect.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let defect: Vec<Value> = self.defect.iter().map(|(&(s, t), x)| json!({ "s": s, "t": t, "cochain": x.to_json() })).collect();
        json!({
            "defect": defect,
            "in_forms_ideal": self.in_forms_ideal,
            "corner_form": self.corner_form.to_json(),
            "flat": self.flat,
        })
    }
}

/// `B = μ(Â)` off the mask for a differential matrix `Â` whose integer rows
/// are the singular defining system `A`.
pub fn twisted_mc_defect(backend: &DifferentialBackend, refined: &FormalConnectionMatrix, singular: &FormalConnectionMatrix) -> Result<DefectReport> {
    let k = backend.base().complex().clone();
    let sing = SimplicialBackend::singular(&k);
    if !is_formal_connection(&sing, singular)?.formal {
        return Err(Error::NotAConnection("the singular matrix is not a defining system".into()));
    }
    if refined.l != singular.l || refined.corner_mask != singular.corner_mask {
        return Err(Error::NotARefinement("shapes differ".into()));
    }
    for (&(s, t), x) in &refined.entries {
        if refined.is_masked(s, t) {
            continue;
        }
        let target = singular.entry(s, t).ok_or_else(|| Error::NotARefinement(format!("no singular entry a_({s},{t})")))?;
        let image = forget_element(backend, x)?;
        if image.coords != target.coords {
            return Err(Error::NotARefinement(format!("I(â_({s},{t})) differs from a_({s},{t})")));
        }
    }
    let mu = mc_curvature(backend, refined)?;
    let mut defect = BTreeMap::new();
    let mut in_forms_ideal = true;
    for ((s, t), x) in mu {
        if refined.is_masked(s, t) || x.is_zero() {
            continue;
        }
        if !forget_element(backend, &x)?.is_zero() {
            in_forms_ideal = false;
        }
        defect.insert((s, t), x);
    }
    let corner = backend.cochain(&refined.corner(backend)?)?;
    let corner_form = de_rham_image(&corner);
    let flat = defect.is_empty().then(|| corner_form.is_zero());
    Ok(DefectReport { defect, in_forms_ideal, corner_form, flat })
}

/// Adds to each listed homotopy slot of a differential defining system a
/// solution `ψ` of `Dψ = a(η)` for the given closed rational cochain `η`.
/// The result refines its own integer rows, which need not form a
/// defining system.
pub fn perturb_homotopies(backend: &DifferentialBackend, ds: &FormalConnectionMatrix, perturbations: &[((usize, usize), GradedCochain)]) -> Result<FormalConnectionMatrix> {
    let mut out = ds.clone();
    for ((s, t), eta) in perturbations {
        let (w, _) = ds.grading(*s, *t)?;
        let level = backend.level(w)?;
        let target = backend.element(&include_a(&level, eta)?);
        let psi = backend
            .solve(&target)?
            .ok_or_else(|| Error::NotACocycle(format!("a(η) is not exact in slot ({s},{t})")))?;
        let e = out.entry(*s, *t).ok_or_else(|| Error::GradingMismatch(format!("no slot ({s},{t})")))?.add(&psi)?;
        out.set(*s, *t, e)?;
    }
    Ok(out)
}

fn twisted(c: &GradedCochain) -> GradedCochain {
    if c.degree() % 2 == 1 {
        c.clone()
    } else {
        c.neg()
    }
}

/// `ā₁ ∪ η₂₄ + η̄₁₃ ∪ a₃` with `a_i` the integer rows of the outer classes of
/// a triple defining system, as rational cochains.
pub fn twisted_corner_prediction(backend: &DifferentialBackend, ds: &FormalConnectionMatrix, eta13: &GradedCochain, eta24: &GradedCochain) -> Result<GradedCochain> {
    if ds.l != 3 {
        return Err(Error::GradingMismatch("prediction is for triple products".into()));
    }
    let row = |i: usize| -> Result<GradedCochain> { integer_row(&backend.cochain(ds.class(i))?).with_coefficients(Coefficients::Rat) };
    twisted(&row(1)?).cup(eta24)?.add(&twisted(eta13).cup(&row(3)?)?)
}

#[cfg(test)]
mod tests {
    use super::super::backend::{Dga, DgaBackend};
    use super::*;
    use crate::simplicial::standard;

    fn heisenberg_system() -> (DgaBackend, FormalConnectionMatrix) {
        let dga = Dga::heisenberg();
        let b = DgaBackend::new(dga.clone());
        let x = dga.element(1, &[(1, &["x"])]).unwrap();
        let y = dga.element(1, &[(1, &["y"])]).unwrap();
        let ds = find_defining_system(&b, &[x.clone(), x, y], &SearchOptions::default()).unwrap().unwrap();
        (b, ds)
    }

    #[test]
    fn slide_scales_the_corner() {
        let (b, ds) = heisenberg_system();
        for m in [-1, 0, 1, 2, 3] {
            for i in 1..=3 {
                assert!(check_slide(&b, &ds, i, m).unwrap().holds(), "i = {i}, m = {m}");
            }
        }
    }

    #[test]
    fn naturality_rejects_abstract_backends() {
        let (b, ds) = heisenberg_system();
        let k = standard::circle().into_arc();
        let f = SimplicialMap::identity(&k);
        assert!(matches!(check_naturality(&b, &f, &ds), Err(Error::BackendUnsupported(_))));
    }

    #[test]
    fn naturality_under_identity_and_constant_maps() {
        let k = standard::torus().into_arc();
        let s = SimplicialBackend::singular(&k);
        let gens = super::super::cohomology::cohomology_generators(&s, 0, 1).unwrap();
        let zero = Element::zero(&s, 0, 1).unwrap();
        let ds = find_defining_system(&s, &[gens[0].clone(), zero, gens[1].clone()], &SearchOptions::default()).unwrap().unwrap();
        assert!(check_naturality(&s, &SimplicialMap::identity(&k), &ds).unwrap().holds());
        let p = crate::simplicial::SimplicialComplex::point().into_arc();
        let c = SimplicialMap::constant(&p, &k, 0).unwrap();
        assert!(check_naturality(&s, &c, &ds).unwrap().holds());
    }
}
