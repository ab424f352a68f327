use serde::Serialize;

use super::backend::{Element, GradedBackend};
use crate::abelian::group::to_integers;
use crate::abelian::{homology_at, AbelianGroupPresentation, Echelon, Matrix, MixedGroup, MixedSubgroup};
use crate::error::{Error, Result};
use crate::Rat;

/// Cohomology of `C(weight)` in `degree`.
pub fn cohomology_group(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<MixedGroup> {
    backend.cocycles(weight, degree)?.quotient(&*backend.boundaries(weight, degree)?)
}

fn integral_presentation(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<AbelianGroupPresentation> {
    let d_in = if degree == 0 { Matrix::zeros(backend.dim(weight, 0)?, 0) } else { backend.differential(weight, degree - 1)? };
    homology_at(&d_in, &backend.differential(weight, degree)?)
}

fn all_integral(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<bool> {
    Ok(backend.integral(weight, degree)?.iter().all(|&b| b))
}

fn none_integral(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<bool> {
    Ok(backend.integral(weight, degree)?.iter().all(|&b| !b))
}

/// Cocycles whose classes generate the cohomology (with the divisible
/// directions represented by single vectors).
pub fn cohomology_generators(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<Vec<Element>> {
    let (span, lattice) = cohomology_basis(backend, weight, degree)?;
    Ok(span.into_iter().chain(lattice).map(|g| Element::new(weight, degree, g)).collect())
}

/// Cocycles spanning the cohomology modulo coboundaries: divisible
/// directions (to be taken with rational coefficients) and lattice
/// generators (integer coefficients).
pub fn cohomology_basis(backend: &dyn GradedBackend, weight: usize, degree: usize) -> Result<(Vec<Vec<Rat>>, Vec<Vec<Rat>>)> {
    if all_integral(backend, weight, degree)? {
        let h = integral_presentation(backend, weight, degree)?;
        let lattice = (0..h.generator_count()).map(|i| h.generator(i).into_iter().map(Rat::from_integer).collect()).collect();
        return Ok((vec![], lattice));
    }
    let z = backend.cocycles(weight, degree)?;
    let mut reached = (*backend.boundaries(weight, degree)?).clone();
    let dim = z.dim();
    let mut span = Vec::new();
    for g in z.span_basis() {
        if !reached.contains(g) {
            reached = reached.sum(&MixedSubgroup::new(dim, vec![g.clone()], vec![]));
            span.push(g.clone());
        }
    }
    let mut lattice = Vec::new();
    for g in z.lattice_basis() {
        if !reached.contains(&g) {
            reached = reached.sum(&MixedSubgroup::new(dim, vec![], vec![g.clone()]));
            lattice.push(g);
        }
    }
    Ok((span, lattice))
}

/// Class of a cocycle: triviality and, where the cohomology is finitely
/// generated or a vector space, coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub trivial: bool,
    pub group: String,
    /// Integer coordinates (torsion generators first) or rational
    /// coordinates in a fixed basis; absent for mixed groups.
    pub coordinates: Option<Vec<String>>,
}

pub fn class_report(backend: &dyn GradedBackend, x: &Element) -> Result<ClassReport> {
    if !backend.is_closed(x)? {
        return Err(Error::NotACocycle(format!("weight {} degree {} cochain is not closed", x.weight, x.degree)));
    }
    let trivial = backend.is_exact(x)?;
    let group = cohomology_group(backend, x.weight, x.degree)?.to_string();
    let coordinates = if all_integral(backend, x.weight, x.degree)? {
        let h = integral_presentation(backend, x.weight, x.degree)?;
        let ints = to_integers(&x.coords).ok_or_else(|| Error::GradingMismatch("integral cochain expected".into()))?;
        Some(h.class_coordinates(&ints)?.iter().map(ToString::to_string).collect())
    } else if none_integral(backend, x.weight, x.degree)? {
        Some(rational_coordinates(backend, x)?.iter().map(ToString::to_string).collect())
    } else {
        None
    };
    Ok(ClassReport { trivial, group, coordinates })
}

/// Coordinates of a rational class in the basis obtained by reducing a
/// cocycle basis modulo coboundaries.
fn rational_coordinates(backend: &dyn GradedBackend, x: &Element) -> Result<Vec<Rat>> {
    let dim = x.coords.len();
    let b = Echelon::new(backend.boundaries(x.weight, x.degree)?.span_basis().to_vec(), dim);
    let z = backend.cocycles(x.weight, x.degree)?;
    let reduced: Vec<Vec<Rat>> = z.span_basis().iter().map(|v| b.reduce(v)).collect();
    let h = Echelon::new(reduced, dim);
    h.coordinates(&b.reduce(&x.coords)).ok_or_else(|| Error::NotACocycle("class outside the cocycle space".into()))
}
