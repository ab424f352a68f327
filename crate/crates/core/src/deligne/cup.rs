use std::sync::Arc;

use num_traits::Zero;

use super::complex::{DeligneCochain, DeligneComplex};
use crate::error::{Error, Result};
use crate::simplicial::{Coefficients, GradedCochain};
use crate::{Int, Rat};

/// Deligne–Beilinson product of a level-`n` and a level-`m` cochain, landing
/// in level `n + m` and total degree `deg x + deg y`.
///
/// On slots: an integer times anything is multiplication; a form slot times
/// the partner's top slot `m` is `x ∪ δy`; everything else vanishes. Čech
/// degrees combine front-face/back-face with the sign `(-1)^(p q')`.
pub fn db_cup(x: &DeligneCochain, y: &DeligneCochain) -> Result<DeligneCochain> {
    let (cx, cy) = (x.complex(), y.complex());
    if !Arc::ptr_eq(cx.base(), cy.base()) {
        return Err(Error::BaseMismatch);
    }
    let (n, m) = (cx.level(), cy.level());
    let target: Arc<DeligneComplex> = cx.base().level(n + m)?;
    let degree = x.degree() + y.degree();
    let mut out = DeligneCochain::zero(&target, degree);
    let base = cx.base();
    let k = base.complex();
    let cover = base.cover();
    let (lx, ly) = (cx.layout(x.degree()), cy.layout(y.degree()));
    for bx in &lx.blocks {
        for by in &ly.blocks {
            let (p, q, pp, qq) = (bx.p, bx.q, by.p, by.q);
            let slot = if q == 0 {
                qq
            } else if qq == m {
                q + m
            } else {
                continue;
            };
            let sign = if (p * qq) % 2 == 0 { Int::from(1) } else { Int::from(-1) };
            let sign_r = Rat::from_integer(sign.clone());
            for (r, rho) in k.simplices(p + pp).iter().enumerate() {
                let front = k.index_of(&rho[..=p]).expect("face");
                let back = k.index_of(&rho[p..]).expect("face");
                let (fo, fl) = bx.slots[front];
                let (bo, bl) = by.slots[back];
                if x.coords()[fo..fo + fl].iter().all(Zero::is_zero) || y.coords()[bo..bo + bl].iter().all(Zero::is_zero) {
                    continue;
                }
                let star = cover.star(p + pp, r);
                if q == 0 {
                    let a = x.integer(p, front) * &sign;
                    if qq == 0 {
                        out.add_integer(p + pp, r, &(a * y.integer(pp, back)))?;
                    } else {
                        let b = y.form(pp, qq, back).restrict(star);
                        out.add_form(p + pp, slot, r, &b.scale(&Rat::from_integer(a)))?;
                    }
                } else {
                    let a = x.form(p, q, front).restrict(star);
                    let db = y.form(pp, qq, back).restrict(star).coboundary();
                    let prod: GradedCochain = a.cup(&db)?;
                    debug_assert_eq!(prod.coefficients(), Coefficients::Rat);
                    out.add_form(p + pp, slot, r, &prod.scale(&sign_r))?;
                }
            }
        }
    }
    Ok(out)
}
