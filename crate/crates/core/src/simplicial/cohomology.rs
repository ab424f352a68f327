use crate::abelian::{homology_at, AbelianGroupPresentation, Matrix};
use crate::error::Result;

use super::complex::SimplicialComplex;

/// `H^n(K; Z)` with class coordinates for integer cocycles.
pub fn cohomology(k: &SimplicialComplex, n: usize) -> Result<AbelianGroupPresentation> {
    let d_in = if n == 0 { Matrix::zeros(k.count(0), 0) } else { k.coboundary_matrix(n - 1) };
    homology_at(&d_in, &k.coboundary_matrix(n))
}
