use std::sync::Arc;

use num_traits::{One, Zero};

use super::complex::{DeligneCochain, DeligneComplex};
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain};
use crate::{Int, Rat};

/// Curvature: the global closed form glued from `δ` of the top slot on each
/// vertex star, times `(-1)^n` at level `n` so that its class matches the
/// integer row. Zero (of the same degree) unless the total degree equals the
/// level.
pub fn curvature_r(x: &DeligneCochain) -> Result<GradedCochain> {
    if !x.is_closed() {
        return Err(Error::NotClosed("curvature needs a D-closed cochain".into()));
    }
    Ok(curvature_unchecked(x))
}

pub(crate) fn curvature_unchecked(x: &DeligneCochain) -> GradedCochain {
    let c = x.complex();
    let k = c.complex();
    let n = c.level();
    if x.degree() != n {
        return GradedCochain::zero(k, x.degree(), Coefficients::Rat);
    }
    let local: Vec<GradedCochain> = (0..k.count(0)).map(|v| x.form(0, n, v).coboundary()).collect();
    let values = k.simplices(n).iter().map(|s| {
        let v = k.index_of(&s[..1]).expect("vertex");
        (s.clone(), local[v].get(s))
    });
    let glued = GradedCochain::from_values(k, n, Coefficients::Rat, values).expect("simplices of the base");
    glued.scale(&level_sign(n))
}

/// `(-1)^n`, the orientation sign shared by `R` and `a`.
pub(crate) fn level_sign(n: usize) -> Rat {
    if n % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// Integration: the integer cochain in the `(deg, 0)` slot.
pub fn integrate_i(x: &DeligneCochain) -> Result<GradedCochain> {
    if !x.is_closed() {
        return Err(Error::NotClosed("integration needs a D-closed cochain".into()));
    }
    Ok(integer_row(x))
}

pub(crate) fn integer_row(x: &DeligneCochain) -> GradedCochain {
    let k = x.complex().complex();
    let p = x.degree();
    let v: Vec<Int> = (0..k.count(p)).map(|s| x.integer(p, s)).collect();
    GradedCochain::from_int_vector(k, p, &v)
}

/// Topologically trivial class of a global `(n-1)`-cochain, placed (times
/// `(-1)^n`) in the top slot over every vertex star of the level-`n` complex.
pub fn include_a(complex: &Arc<DeligneComplex>, omega: &GradedCochain) -> Result<DeligneCochain> {
    let n = complex.level();
    let k = complex.complex();
    if omega.degree() + 1 != n {
        return Err(Error::GradingMismatch(format!("a takes {}-cochains at level {n}", n - 1)));
    }
    if **omega.complex() != **k {
        return Err(Error::ComplexMismatch);
    }
    let omega = omega.with_coefficients(Coefficients::Rat)?.scale(&level_sign(n));
    let mut x = DeligneCochain::zero(complex, n);
    for v in 0..k.count(0) {
        let star = complex.base().cover().star(0, v);
        x.add_form(0, n, v, &omega.restrict(star))?;
    }
    Ok(x)
}

/// Flat class of a `Q/Z` cocycle `u` of degree `deg`, in total degree
/// `deg + 1` of the given level: the `[0, 1)` lift as constants in slot 1
/// plus its integer coboundary in the integer row.
pub fn include_flat_j(complex: &Arc<DeligneComplex>, u: &GradedCochain) -> Result<DeligneCochain> {
    let k = complex.complex();
    if **u.complex() != **k {
        return Err(Error::ComplexMismatch);
    }
    let lift = u.with_coefficients(Coefficients::RatModInt)?.with_coefficients(Coefficients::Rat)?;
    let du = lift.coboundary();
    if !du.values().all(|(_, x)| x.is_integer()) {
        return Err(Error::NotClosedModZ);
    }
    flat_lift(complex, &lift)
}

/// `j` on an arbitrary rational lift (linear in the lift).
pub fn flat_lift(complex: &Arc<DeligneComplex>, lift: &GradedCochain) -> Result<DeligneCochain> {
    let p = lift.degree();
    let deg = p + 1;
    if complex.level() < 1 || deg > complex.level() {
        return Err(Error::GradingMismatch(format!("flat classes of degree {deg} need level at least {deg}")));
    }
    let k = complex.complex();
    let mut x = DeligneCochain::zero(complex, deg);
    let cover = complex.base().cover();
    for (s, v) in lift.values() {
        let i = k.index_of(s).expect("simplex of the base");
        let star = cover.star(p, i);
        x.add_form(p, 1, i, &GradedCochain::constant(star, Coefficients::Rat, v.clone()))?;
    }
    let du = lift.coboundary();
    for (s, v) in du.values() {
        if !v.is_integer() {
            return Err(Error::NotClosedModZ);
        }
        let i = k.index_of(s).expect("simplex of the base");
        x.add_integer(p + 1, i, &v.to_integer())?;
    }
    debug_assert!(x.is_closed());
    Ok(x)
}

/// Global `(k-1)`-cochain assembled from the form slots of a degree-`k`
/// cochain: `Ψ(x)(σ) = Σ_p (-1)^(p q) x_(p,q)[σ_0..σ_p](σ_p..)`, with `q = k - p`
/// the slot. It intertwines `δ` with the untruncated form part of `D`.
pub fn connection_form(x: &DeligneCochain) -> GradedCochain {
    let c = x.complex();
    let k = c.complex();
    let deg = x.degree();
    if deg == 0 {
        return GradedCochain::zero(k, 0, Coefficients::Rat);
    }
    let values = k.simplices(deg - 1).iter().map(|sigma| {
        let mut total = Rat::zero();
        for p in 0..deg.min(sigma.len()) {
            let q = deg - p;
            if q > c.level() {
                continue;
            }
            let front = k.index_of(&sigma[..=p]).expect("face");
            let value = x.form(p, q, front).get(&sigma[p..]);
            if (p * q) % 2 == 0 {
                total += value;
            } else {
                total -= value;
            }
        }
        (sigma.clone(), total)
    });
    GradedCochain::from_values(k, deg - 1, Coefficients::Rat, values).expect("simplices of the base")
}

/// De Rham image of an arbitrary cochain: `(-1)^n (δΨ(x) + (-1)^k I(x))` at
/// level `n` and degree `k`. On cocycles it is `R` in degree `n` and zero
/// below; on other cochains it is the image of `Dx` under `Ψ`.
pub fn de_rham_image(x: &DeligneCochain) -> GradedCochain {
    let k = x.complex().complex();
    let deg = x.degree();
    let psi = if deg == 0 { GradedCochain::zero(k, 0, Coefficients::Rat) } else { connection_form(x).coboundary() };
    let int = integer_row(x).with_coefficients(Coefficients::Rat).expect("integers are rational");
    let int = if deg % 2 == 0 { int } else { int.neg() };
    psi.add(&int).expect("same degree").scale(&level_sign(x.level()))
}

#[cfg(test)]
mod tests {
    use super::super::complex::build_deligne;
    use super::*;
    use crate::simplicial::{standard, SimplicialComplex};

    fn q(a: i64, b: i64) -> Rat {
        Rat::new(a.into(), b.into())
    }

    #[test]
    fn a_has_curvature_d_omega() {
        let k = standard::torus().into_arc();
        let c = build_deligne(&k, 2).unwrap();
        let omega = GradedCochain::from_values(&k, 1, Coefficients::Rat, [(vec![0, 1], q(1, 2)), (vec![1, 3], q(-3, 1))]).unwrap();
        let x = include_a(&c, &omega).unwrap();
        assert!(x.is_closed());
        assert_eq!(curvature_r(&x).unwrap(), omega.coboundary());
        assert!(integrate_i(&x).unwrap().is_zero());
    }

    #[test]
    fn j_is_flat_and_closed() {
        let k = standard::circle().into_arc();
        let c = build_deligne(&k, 1).unwrap();
        let u = GradedCochain::from_values(&k, 0, Coefficients::RatModInt, [(vec![0], q(1, 3))]).unwrap();
        assert_eq!(include_flat_j(&c, &u).unwrap_err(), Error::NotClosedModZ);
        let u = GradedCochain::constant(&k, Coefficients::RatModInt, q(1, 3));
        let x = include_flat_j(&c, &u).unwrap();
        assert!(x.is_closed());
        assert!(curvature_r(&x).unwrap().is_zero());
        let zero = GradedCochain::zero(&k, 0, Coefficients::RatModInt);
        assert!(include_flat_j(&c, &zero).unwrap().is_zero());
    }

    #[test]
    fn de_rham_image_is_curvature_on_cocycles() {
        let k = standard::torus().into_arc();
        for n in 1..=2 {
            let c = build_deligne(&k, n).unwrap();
            let h = super::super::deligne_cohomology(&c, n).unwrap();
            for z in h.cocycles.lattice_basis().into_iter().chain(h.cocycles.span_basis().iter().cloned()) {
                let x = DeligneCochain::from_vector(&c, n, z).unwrap();
                assert_eq!(de_rham_image(&x), curvature_r(&x).unwrap());
            }
            let below = super::super::deligne_cohomology(&c, n - 1).unwrap();
            for z in below.cocycles.lattice_basis().into_iter().chain(below.cocycles.span_basis().iter().cloned()) {
                let x = DeligneCochain::from_vector(&c, n - 1, z).unwrap();
                assert!(de_rham_image(&x).is_zero());
            }
        }
    }

    #[test]
    fn de_rham_image_below_the_top_sees_the_coboundary() {
        let k = standard::torus().into_arc();
        let c = build_deligne(&k, 2).unwrap();
        let coords: Vec<Rat> = (0..c.dim(1)).map(|i| if c.layout(1).integral[i] { q(i as i64 % 3 - 1, 1) } else { q(i as i64 % 5 - 2, 3) }).collect();
        let x = DeligneCochain::from_vector(&c, 1, coords).unwrap();
        let expected = connection_form(&x.differential());
        assert_eq!(de_rham_image(&x), expected.scale(&level_sign(2)));
    }

    #[test]
    fn point_is_closed() {
        let k = SimplicialComplex::point().into_arc();
        let c = build_deligne(&k, 1).unwrap();
        let x = DeligneCochain::zero(&c, 1);
        assert!(curvature_r(&x).unwrap().is_zero());
    }
}
