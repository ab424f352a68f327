use std::sync::Arc;

use super::complex::{DeligneCochain, DeligneComplex};
use crate::abelian::{MixedGroup, MixedSubgroup};
use crate::error::{Error, Result};
use crate::RatMatrix;

/// Cohomology of the total Deligne complex at one degree, kept as the pair
/// (cocycles, coboundaries) of subgroups of the coordinate space.
#[derive(Clone, Debug)]
pub struct DeligneCohomology {
    pub degree: usize,
    pub group: MixedGroup,
    pub cocycles: MixedSubgroup,
    pub boundaries: MixedSubgroup,
}

pub(crate) fn to_rat(m: &crate::IntMatrix) -> RatMatrix {
    m.map(|x| crate::Rat::from_integer(x.clone()))
}

/// Cocycles and coboundaries of `complex` in total degree `deg`.
pub fn deligne_cohomology(complex: &Arc<DeligneComplex>, deg: usize) -> Result<DeligneCohomology> {
    let here = MixedSubgroup::standard(&complex.layout(deg).integral);
    let next = MixedSubgroup::zero(complex.dim(deg + 1));
    let cocycles = here.preimage(&to_rat(&complex.differential(deg)), &next);
    let boundaries = if deg == 0 {
        MixedSubgroup::zero(complex.dim(0))
    } else {
        MixedSubgroup::standard(&complex.layout(deg - 1).integral).image(&to_rat(&complex.differential(deg - 1)))
    };
    let group = cocycles.quotient(&boundaries)?;
    Ok(DeligneCohomology { degree: deg, group, cocycles, boundaries })
}

impl DeligneCohomology {
    fn check(&self, x: &DeligneCochain) -> Result<()> {
        if x.degree() != self.degree || x.coords().len() != self.cocycles.dim() {
            return Err(Error::GradingMismatch(format!("expected a degree {} cochain", self.degree)));
        }
        if !self.cocycles.contains(x.coords()) {
            return Err(Error::NotClosed("Deligne cochain is not D-closed".into()));
        }
        Ok(())
    }

    /// Whether the class of the cocycle `x` vanishes.
    pub fn is_trivial_class(&self, x: &DeligneCochain) -> Result<bool> {
        self.check(x)?;
        Ok(self.boundaries.contains(x.coords()))
    }

    pub fn same_class(&self, x: &DeligneCochain, y: &DeligneCochain) -> Result<bool> {
        self.is_trivial_class(&x.sub(y)?)
    }
}
