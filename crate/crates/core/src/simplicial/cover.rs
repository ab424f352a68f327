use std::sync::Arc;

use num_traits::Zero;

use super::cochain::GradedCochain;
use super::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Cover of a complex by the open stars of its vertices.
///
/// The stars of `v0..vp` meet exactly when `{v0..vp}` is a simplex, so the
/// nerve is the base complex itself. Each intersection is modelled by the
/// closed star of that simplex, a cone on any of its vertices.
#[derive(Clone, Debug)]
pub struct StarCover {
    base: Arc<SimplicialComplex>,
    nerve: Arc<SimplicialComplex>,
    stars: Vec<Vec<Arc<SimplicialComplex>>>,
}

impl StarCover {
    pub fn new(base: &Arc<SimplicialComplex>) -> Result<Self> {
        if !base.is_valid() {
            return Err(Error::InvalidComplex("complex fails validation".into()));
        }
        let dim = (base.dimension() + 1) as usize;
        let stars = (0..dim)
            .map(|p| base.simplices(p).iter().map(|s| base.closed_star(s).into_arc()).collect())
            .collect();
        Ok(StarCover { base: base.clone(), nerve: base.clone(), stars })
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    pub fn nerve(&self) -> &Arc<SimplicialComplex> {
        &self.nerve
    }

    /// Simplices in the open star of vertex `v`.
    pub fn open_star(&self, v: usize) -> Vec<Simplex> {
        self.base.all_simplices().into_iter().filter(|s| s.contains(&v)).collect()
    }

    /// Model of the intersection of the stars of the vertices of nerve
    /// simplex `index` in dimension `p`.
    pub fn star(&self, p: usize, index: usize) -> &Arc<SimplicialComplex> {
        &self.stars[p][index]
    }

    pub fn star_of(&self, opens: &[usize]) -> Option<&Arc<SimplicialComplex>> {
        let p = opens.len().checked_sub(1)?;
        self.nerve.index_of(opens).map(|i| self.star(p, i))
    }
}

/// Builds the star cover of `k`.
pub fn star_cover(k: &Arc<SimplicialComplex>) -> Result<StarCover> {
    StarCover::new(k)
}

/// Cone operator with apex `apex`: `η(σ) = ± c(apex ⋆ σ)`, the sign being
/// that of sorting `apex` into place, and `η(σ) = 0` when `apex ∈ σ`.
pub fn cone_operator(c: &GradedCochain, apex: usize) -> GradedCochain {
    let k = c.complex();
    let degree = c.degree();
    assert!(degree >= 1, "cone operator lowers degree");
    let mut out = Vec::new();
    for s in k.simplices(degree - 1) {
        if s.contains(&apex) {
            continue;
        }
        let pos = s.partition_point(|&v| v < apex);
        let mut joined = s.clone();
        joined.insert(pos, apex);
        let x = c.get(&joined);
        if !x.is_zero() {
            out.push((s.clone(), if pos % 2 == 0 { x } else { -x }));
        }
    }
    GradedCochain::from_values(k, degree - 1, c.coefficients(), out).expect("faces of the complex")
}

/// Contracts a closed cochain on the intersection of the stars of `opens`
/// through the cone on `apex`: returns `η` with `δη = c`.
pub fn cone_contraction(cover: &StarCover, opens: &[usize], c: &GradedCochain, apex: usize) -> Result<GradedCochain> {
    let star = cover
        .star_of(opens)
        .ok_or_else(|| Error::InvalidComplex(format!("{opens:?} is not a simplex of the nerve")))?;
    if !Arc::ptr_eq(star, c.complex()) && **star != **c.complex() {
        return Err(Error::ComplexMismatch);
    }
    if c.degree() == 0 {
        return Err(Error::DimensionMismatch("cone contraction needs degree at least 1".into()));
    }
    let is_cone = star.all_simplices().iter().all(|s| {
        let mut t = s.clone();
        if let Err(pos) = t.binary_search(&apex) {
            t.insert(pos, apex);
        }
        star.contains(&t)
    });
    if !is_cone {
        return Err(Error::NotACone(apex));
    }
    if !c.coboundary().is_zero() {
        return Err(Error::NotClosed("cochain on the star intersection".into()));
    }
    let eta = cone_operator(c, apex);
    debug_assert!(eta.coboundary() == c.with_coefficients(eta.coefficients()).unwrap());
    Ok(eta)
}
