use serde_json::{json, Value};

use super::backend::{BackendKind, DifferentialBackend, Element, GradedBackend};
use super::cohomology::{class_report, cohomology_basis, ClassReport};
use super::connection::{is_formal_connection, FormalConnectionMatrix};
use crate::abelian::{Matrix, MixedGroup, MixedSubgroup};
use crate::deligne::{curvature_r, flat_lift};
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain};
use crate::Rat;

/// Subgroup `H ∪ a₃ + a₁ ∪ H` of a triple product's target, as cocycles.
#[derive(Clone, Debug)]
pub struct Indeterminacy {
    /// Products with cohomology generators together with all coboundaries.
    pub subgroup: MixedSubgroup,
    /// The same subgroup modulo coboundaries.
    pub group: MixedGroup,
    /// Products spanning it modulo coboundaries.
    pub generators: Vec<Element>,
}

impl Indeterminacy {
    pub fn contains(&self, x: &Element) -> bool {
        self.subgroup.contains(&x.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "display": self.group.to_string(),
            "generators": self.generators.iter().map(Element::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Indeterminacy of `⟨a₁, a₂, a₃⟩` where `a₂` has the given weight and
/// degree: the classes `u ∪ a₃` and `ā₁ ∪ v` for `u`, `v` ranging over
/// cohomology of the homotopy slots' gradings.
pub fn triple_indeterminacy(backend: &dyn GradedBackend, a1: &Element, middle: (usize, usize), a3: &Element) -> Result<Indeterminacy> {
    let (w2, m2) = middle;
    let eps = backend.epsilon();
    let target_w = a1.weight + w2 + a3.weight + 2 * eps;
    let target_d = (a1.degree + m2 + a3.degree)
        .checked_sub(1)
        .ok_or_else(|| Error::GradingMismatch("triple product of degree-zero classes".into()))?;
    for (i, c) in [a1, a3].into_iter().enumerate() {
        if !backend.is_closed(c)? {
            return Err(Error::NotACocycle(format!("outer class {} is not closed", 2 * i + 1)));
        }
    }
    let boundaries = backend.boundaries(target_w, target_d)?;
    let mut span = Vec::new();
    let mut lattice = Vec::new();
    let mut generators = Vec::new();
    let mut push = |x: Element, divisible: bool| {
        if x.is_zero() {
            return;
        }
        if divisible {
            span.push(x.coords.clone());
        } else {
            lattice.push(x.coords.clone());
        }
        generators.push(x);
    };
    if let Some(d12) = (a1.degree + m2).checked_sub(1) {
        let w12 = a1.weight + w2 + eps;
        let (s, l) = cohomology_basis(backend, w12, d12)?;
        for (g, divisible) in s.into_iter().map(|g| (g, true)).chain(l.into_iter().map(|g| (g, false))) {
            push(backend.cup(&Element::new(w12, d12, g), a3)?, divisible);
        }
    }
    if let Some(d23) = (m2 + a3.degree).checked_sub(1) {
        let w23 = w2 + a3.weight + eps;
        let (s, l) = cohomology_basis(backend, w23, d23)?;
        let a1t = a1.twist();
        for (g, divisible) in s.into_iter().map(|g| (g, true)).chain(l.into_iter().map(|g| (g, false))) {
            push(backend.cup(&a1t, &Element::new(w23, d23, g))?, divisible);
        }
    }
    let dim = backend.dim(target_w, target_d)?;
    let subgroup = MixedSubgroup::new(dim, span, lattice).sum(&boundaries);
    let group = subgroup.quotient(&boundaries)?;
    Ok(Indeterminacy { subgroup, group, generators })
}

/// Flatness of a closed Deligne cochain: zero curvature, and membership of
/// its class in the image of the flat inclusion `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flatness {
    pub curvature_zero: bool,
    pub in_flat_image: bool,
}

impl Flatness {
    pub fn flat(&self) -> bool {
        self.curvature_zero && self.in_flat_image
    }
}

/// Classes `j(u)` for rational lifts `u` with integral coboundary, plus
/// coboundaries, in degree `degree` of the given weight.
pub fn flat_image(backend: &DifferentialBackend, weight: usize, degree: usize) -> Result<MixedSubgroup> {
    let boundaries = (*backend.boundaries(weight, degree)?).clone();
    if degree == 0 || degree > weight + 1 {
        return Ok(boundaries);
    }
    let c = backend.level(weight)?;
    let k = c.complex().clone();
    let p = degree - 1;
    let n = k.count(p);
    let mut columns = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![Rat::from_integer(0.into()); n];
        e[i] = Rat::from_integer(1.into());
        let lift = GradedCochain::from_vector(&k, p, Coefficients::Rat, &e);
        columns.push(flat_lift(&c, &lift)?.coords().to_vec());
    }
    let j = Matrix::from_columns(c.dim(degree), &columns);
    let delta = k.coboundary_matrix(p).map(|x| Rat::from_integer(x.clone()));
    let lifts = MixedSubgroup::standard(&vec![false; n]).preimage(&delta, &MixedSubgroup::standard(&vec![true; delta.rows()]));
    Ok(lifts.image(&j).sum(&boundaries))
}

pub fn flatness(backend: &DifferentialBackend, x: &Element) -> Result<Flatness> {
    let cochain = backend.cochain(x)?;
    let curvature_zero = curvature_r(&cochain)?.is_zero();
    let in_flat_image = flat_image(backend, x.weight, x.degree)?.contains(&x.coords);
    Ok(Flatness { curvature_zero, in_flat_image })
}

/// A Massey product computed from one defining system.
#[derive(Clone, Debug)]
pub struct MasseyResult {
    /// `Σ ā_(1,i) ∪ a_(i+1,l)`; `μ(A)` has its negative in the corner.
    pub representative: Element,
    pub class: ClassReport,
    /// Present for triple products with the standard corner; longer products
    /// have indeterminacy depending on the defining system.
    pub indeterminacy: Option<Indeterminacy>,
    /// Whether the product contains zero: decided for triple products, and
    /// for longer ones only when this representative is exact.
    pub contains_zero: Option<bool>,
    /// Curvature and flat-image verdict, differential backend only.
    pub flatness: Option<Flatness>,
    pub defining_system: FormalConnectionMatrix,
}

impl MasseyResult {
    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.representative.weight,
            "degree": self.representative.degree,
            "representative": self.representative.to_json(),
            "class": self.class,
            "indeterminacy": match &self.indeterminacy {
                Some(i) => i.to_json(),
                None => json!("defining-system-dependent"),
            },
            "contains_zero": self.contains_zero,
            "flat": self.flatness.as_ref().map(Flatness::flat),
            "defining_system": self.defining_system.to_json(),
        })
    }
}

/// Massey product of a defining system: the corner cocycle, its class and,
/// for `l = 3`, the indeterminacy.
pub fn massey_product(backend: &dyn GradedBackend, ds: &FormalConnectionMatrix) -> Result<MasseyResult> {
    if ds.kind != backend.kind() {
        return Err(Error::GradingMismatch(format!("defining system is for the {} backend", ds.kind.name())));
    }
    let report = is_formal_connection(backend, ds)?;
    if !report.formal {
        return Err(Error::NotAConnection(format!("Maurer–Cartan equation fails in slots {:?}", report.violations)));
    }
    let representative = ds.corner(backend)?;
    if !backend.is_closed(&representative)? {
        return Err(Error::NotACocycle("corner of the defining system".into()));
    }
    let class = class_report(backend, &representative)?;
    let standard_mask = ds.corner_mask.len() == 1 && ds.is_masked(1, ds.l);
    let indeterminacy = if ds.l == 3 && standard_mask {
        let a2 = ds.class(2);
        Some(triple_indeterminacy(backend, ds.class(1), (a2.weight, a2.degree), ds.class(3))?)
    } else {
        None
    };
    let contains_zero = match &indeterminacy {
        Some(i) => Some(i.contains(&representative)),
        None if class.trivial => Some(true),
        None => None,
    };
    let flatness = match (backend.kind(), backend.as_differential()) {
        (BackendKind::Differential, Some(b)) => Some(flatness(b, &representative)?),
        _ => None,
    };
    Ok(MasseyResult { representative, class, indeterminacy, contains_zero, flatness, defining_system: ds.clone() })
}
