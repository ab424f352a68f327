//! Finitely generated abelian groups as subquotients of free modules.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::matrix::Matrix;
use super::snf::{smith_normal_form, SnfDecomposition};
use crate::error::{Error, Result};
use crate::{Int, IntMatrix, Rat};

/// Coefficient ring for linear solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Int,
    Rational,
}

/// `Z^free_rank ⊕ ⊕ Z/torsion[i]`, with generators lifted to ambient vectors.
///
/// Column `i` of `generator_lift` represents generator `i`; torsion generators
/// come first (in the order of `torsion`), free generators after.
#[derive(Clone, Debug)]
pub struct AbelianGroupPresentation {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub generator_lift: IntMatrix,
    coords: Option<CoordinateData>,
}

/// Data needed to read off class coordinates of a cocycle.
#[derive(Clone, Debug)]
struct CoordinateData {
    d_out: IntMatrix,
    /// Rows map a cocycle to its coordinates in the kernel basis.
    kernel_coords: IntMatrix,
    /// Change of basis from kernel coordinates to generator coordinates.
    basis_change: IntMatrix,
    /// Which rows of `basis_change` are generators (torsion first, then free).
    generator_rows: Vec<usize>,
}

impl AbelianGroupPresentation {
    /// A presentation without coordinate data (for reporting only).
    pub fn new(free_rank: usize, torsion: Vec<Int>, generator_lift: IntMatrix) -> Self {
        AbelianGroupPresentation { free_rank, torsion, generator_lift, coords: None }
    }

    pub fn trivial(ambient: usize) -> Self {
        Self::new(0, vec![], Matrix::zeros(ambient, 0))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of generator `i` (zero for free generators).
    pub fn order(&self, i: usize) -> Int {
        self.torsion.get(i).cloned().unwrap_or_else(Int::zero)
    }

    /// Same isomorphism type.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    pub fn generator(&self, i: usize) -> Vec<Int> {
        self.generator_lift.column(i)
    }

    /// Coordinates of the class of `cocycle`, free part as integers and
    /// torsion part reduced into `[0, order)`.
    pub fn class_coordinates(&self, cocycle: &[Int]) -> Result<Vec<Int>> {
        let data = self
            .coords
            .as_ref()
            .ok_or_else(|| Error::DimensionMismatch("presentation carries no coordinate data".into()))?;
        if cocycle.len() != data.d_out.cols() {
            return Err(Error::DimensionMismatch(format!(
                "cocycle has length {}, complex has {}",
                cocycle.len(),
                data.d_out.cols()
            )));
        }
        if data.d_out.mul_vec(cocycle).iter().any(|x| !x.is_zero()) {
            return Err(Error::NotACocycle("differential of the input is nonzero".into()));
        }
        let k = data.kernel_coords.mul_vec(cocycle);
        let all = data.basis_change.mul_vec(&k);
        Ok(data
            .generator_rows
            .iter()
            .enumerate()
            .map(|(g, &row)| {
                let order = self.order(g);
                if order.is_zero() {
                    all[row].clone()
                } else {
                    all[row].mod_floor(&order)
                }
            })
            .collect())
    }

    /// Whether two coordinate vectors name the same class.
    pub fn same_class(&self, a: &[Int], b: &[Int]) -> bool {
        a.iter().zip(b).enumerate().all(|(g, (x, y))| {
            let order = self.order(g);
            if order.is_zero() {
                x == y
            } else {
                (x - y).is_multiple_of(&order)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "free_rank": self.free_rank,
            "torsion": self.torsion.iter().map(Int::to_string).collect::<Vec<_>>(),
            "generator_lift": self.generator_lift.to_json(),
        })
    }
}

/// A basis of the integer kernel of `m` as the columns of the returned matrix,
/// together with the SNF used to find it.
pub fn integer_kernel(m: &IntMatrix) -> (IntMatrix, SnfDecomposition) {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    (snf.v.select_columns(&cols), snf)
}

/// Cohomology `ker(d_out) / im(d_in)` at the middle term.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroupPresentation> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let n = d_out.cols();
    let (kernel, snf_out) = integer_kernel(d_out);
    let r = snf_out.rank();
    // Rows r.. of v_inv send a cocycle to kernel-basis coordinates.
    let kernel_coords = {
        let v_inv = snf_out.v_inv.dense_rows();
        let rows: Vec<Vec<Int>> = v_inv.into_iter().skip(r).collect();
        if rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(rows)
        }
    };
    // Boundaries in kernel coordinates.
    let relations = kernel_coords.mul(d_in);
    let snf = smith_normal_form(&relations);
    let z = kernel.cols();
    let mut torsion = Vec::new();
    let mut generator_rows = Vec::new();
    for (i, d) in snf.diagonal.iter().enumerate() {
        if !d.is_one() {
            torsion.push(d.clone());
            generator_rows.push(i);
        }
    }
    generator_rows.extend(snf.rank()..z);
    let free_rank = z - snf.rank();
    // Generators: columns of kernel * u_inv.
    let lifts = kernel.mul(&snf.u_inv);
    let generator_lift = lifts.select_columns(&generator_rows);
    Ok(AbelianGroupPresentation {
        free_rank,
        torsion,
        generator_lift,
        coords: Some(CoordinateData { d_out: d_out.clone(), kernel_coords, basis_change: snf.u, generator_rows }),
    })
}

/// Solves `m x = b` using a precomputed SNF; free parameters are zero.
pub fn solve_with_snf(snf: &SnfDecomposition, b: &[Rat], ring: Ring) -> Option<Vec<Rat>> {
    let m = &snf.source;
    assert_eq!(b.len(), m.rows(), "right-hand side has the wrong length");
    let ub = mul_int_rat(&snf.u, b);
    let r = snf.rank();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![Rat::zero(); m.cols()];
    for i in 0..r {
        let yi = &ub[i] / Rat::from_integer(snf.diagonal[i].clone());
        if ring == Ring::Int && !yi.is_integer() {
            return None;
        }
        y[i] = yi;
    }
    Some(mul_int_rat(&snf.v, &y))
}

/// Integer matrix times rational vector.
pub fn mul_int_rat(m: &IntMatrix, x: &[Rat]) -> Vec<Rat> {
    assert_eq!(m.cols(), x.len(), "dimension mismatch in product");
    let mut out = vec![Rat::zero(); m.rows()];
    for (i, j, a) in m.entries() {
        if !x[j].is_zero() {
            out[i] += &x[j] * Rat::from_integer(a);
        }
    }
    out
}

/// Canonical solution of `m x = b` over the chosen ring, if one exists.
pub fn solve_preimage(m: &IntMatrix, b: &[Int], ring: Ring) -> Option<Vec<Rat>> {
    let b: Vec<Rat> = b.iter().cloned().map(Rat::from_integer).collect();
    solve_with_snf(&smith_normal_form(m), &b, ring)
}

/// Whether `x` lies in the span of `generators` over the chosen ring.
pub fn subgroup_membership(generators: &[Vec<Int>], x: &[Int], ring: Ring) -> Result<bool> {
    if let Some(g) = generators.iter().find(|g| g.len() != x.len()) {
        return Err(Error::DimensionMismatch(format!("generator of length {} vs vector of length {}", g.len(), x.len())));
    }
    if generators.is_empty() {
        return Ok(x.iter().all(Zero::is_zero));
    }
    let m = Matrix::from_columns(x.len(), generators);
    Ok(solve_preimage(&m, x, ring).is_some())
}

/// Class coordinates of `cocycle` in `group` (see [`AbelianGroupPresentation`]).
pub fn class_coordinates(cocycle: &[Int], group: &AbelianGroupPresentation) -> Result<Vec<Int>> {
    group.class_coordinates(cocycle)
}

/// Converts an integral rational vector to integers.
pub fn to_integers(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// `|det|` is one for a square integer matrix, checked through its SNF.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && {
        let s = smith_normal_form(m);
        s.rank() == m.rows() && s.diagonal.iter().all(|d| d.abs().is_one())
    }
}
