//! Subgroups of `Q^n` of the form `U + ZW` (a subspace plus a lattice), and
//! their subquotients `Z^a ⊕ torsion ⊕ Q^b ⊕ (Q/Z)^c`.
//!
//! Cohomology of complexes mixing integer and rational coordinates is not
//! finitely generated, so these are the groups the Deligne module works with.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::group::{integer_kernel, mul_int_rat};
use super::matrix::Matrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::{Int, Rat, RatMatrix};

/// Reduced row echelon basis of a subspace of `Q^n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(mut rows: Vec<Vec<Rat>>, dim: usize) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..dim {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = rows[r][col].recip();
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        Echelon { rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its components along the basis; zero exactly on members.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Coefficients of `v` in the basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let c: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut back = vec![Rat::zero(); v.len()];
        for (ci, row) in c.iter().zip(&self.rows) {
            for (x, y) in back.iter_mut().zip(row) {
                *x += ci * y;
            }
        }
        (back == v).then_some(c)
    }
}

/// Rational nullspace of `m` (as vectors `x` with `m x = 0`).
pub fn rational_kernel(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let e = Echelon::new(m.dense_rows(), m.cols());
    let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); m.cols()];
            x[f] = Rat::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Row Hermite basis of the lattice spanned by integer `rows`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hermite {
    pub rows: Vec<Vec<Int>>,
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn new(mut rows: Vec<Vec<Int>>, dim: usize) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let mut done: Vec<Vec<Int>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..dim {
            if rows.is_empty() {
                break;
            }
            loop {
                let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                nz.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()).then(a.cmp(&b)));
                let p = nz[0];
                let pivot = rows[p].clone();
                for &i in &nz[1..] {
                    let q = rows[i][col].div_floor(&pivot[col]);
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        if !y.is_zero() {
                            *x -= &q * y;
                        }
                    }
                }
                if nz[1..].iter().all(|&i| rows[i][col].is_zero()) {
                    let mut row = rows.remove(p);
                    if row[col].is_negative() {
                        row.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    for prev in done.iter_mut() {
                        let q = prev[col].div_floor(&row[col]);
                        if !q.is_zero() {
                            for (x, y) in prev.iter_mut().zip(&row) {
                                *x -= &q * y;
                            }
                        }
                    }
                    done.push(row);
                    pivots.push(col);
                    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
                    break;
                }
            }
        }
        Hermite { rows: done, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut v = v.to_vec();
        let mut c = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            c.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(c)
    }
}

fn lcm_of_denominators<'a>(vs: impl IntoIterator<Item = &'a Vec<Rat>>) -> Int {
    vs.into_iter().flatten().fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

fn scale_to_int(v: &[Rat], s: &Int) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| {
            let y = x * Rat::from_integer(s.clone());
            y.is_integer().then(|| y.to_integer())
        })
        .collect()
}

/// A subgroup `U + ZW` of `Q^dim`, stored canonically: `U` in echelon form,
/// the lattice reduced modulo `U` and given as `hermite / scale`.
#[derive(Clone, Debug)]
pub struct MixedSubgroup {
    dim: usize,
    span: Echelon,
    scale: Int,
    lattice: Hermite,
}

impl MixedSubgroup {
    pub fn new(dim: usize, span: Vec<Vec<Rat>>, lattice: Vec<Vec<Rat>>) -> Self {
        let span = Echelon::new(span, dim);
        let reduced: Vec<Vec<Rat>> = lattice.iter().map(|w| span.reduce(w)).collect();
        let scale = lcm_of_denominators(&reduced);
        let ints = reduced.iter().map(|w| scale_to_int(w, &scale).expect("denominators cleared")).collect();
        MixedSubgroup { dim, span, scale, lattice: Hermite::new(ints, dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, vec![], vec![])
    }

    /// `Z^a ⊕ Q^b` inside `Q^(a+b)`, integral exactly on the coordinates flagged.
    pub fn standard(integral: &[bool]) -> Self {
        let dim = integral.len();
        let unit = |i: usize| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            v
        };
        let (ints, rats): (Vec<usize>, Vec<usize>) = (0..dim).partition(|&i| integral[i]);
        Self::new(dim, rats.into_iter().map(unit).collect(), ints.into_iter().map(unit).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn divisible_rank(&self) -> usize {
        self.span.dim()
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn span_basis(&self) -> &[Vec<Rat>] {
        &self.span.rows
    }

    pub fn lattice_basis(&self) -> Vec<Vec<Rat>> {
        let s = Rat::from_integer(self.scale.clone());
        self.lattice
            .rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_integer(x.clone()) / &s).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.span.dim() == 0 && self.lattice.rank() == 0
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim, "vector has the wrong dimension");
        let r = self.span.reduce(v);
        match scale_to_int(&r, &self.scale) {
            Some(ints) => self.lattice.coordinates(&ints).is_some(),
            None => false,
        }
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.span.rows.iter().all(|u| other.span.contains(u)) && self.lattice_basis().iter().all(|w| other.contains(w))
    }

    /// First generator of `self` missing from `other`, if any.
    pub fn witness_not_in(&self, other: &Self) -> Option<Vec<Rat>> {
        if let Some(u) = self.span.rows.iter().find(|u| !other.span.contains(u)) {
            return Some(u.clone());
        }
        self.lattice_basis().into_iter().find(|w| !other.contains(w))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.dim == other.dim && self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let span = self.span.rows.iter().chain(&other.span.rows).cloned().collect();
        let lattice = self.lattice_basis().into_iter().chain(other.lattice_basis()).collect();
        Self::new(self.dim, span, lattice)
    }

    /// Image under the linear map `m` (a `rows x dim` matrix).
    pub fn image(&self, m: &RatMatrix) -> Self {
        assert_eq!(m.cols(), self.dim);
        let span = self.span.rows.iter().map(|u| m.mul_vec(u)).collect();
        let lattice = self.lattice_basis().iter().map(|w| m.mul_vec(w)).collect();
        Self::new(m.rows(), span, lattice)
    }

    /// `{ z in self : m z in target }`.
    pub fn preimage(&self, m: &RatMatrix, target: &Self) -> Self {
        assert_eq!(m.cols(), self.dim);
        assert_eq!(m.rows(), target.dim);
        let (us, ws) = (self.span.rows.clone(), self.lattice_basis());
        let (ut, wt) = (target.span.rows.clone(), target.lattice_basis());
        // Rational unknowns (t, s) and integer unknowns (c, e) with
        // m(U t + W c) - Ut s - Wt e = 0.
        let neg = |v: &Vec<Rat>| v.iter().map(|x| -x.clone()).collect::<Vec<_>>();
        let rat_cols: Vec<Vec<Rat>> = us.iter().map(|u| m.mul_vec(u)).chain(ut.iter().map(neg)).collect();
        let int_cols: Vec<Vec<Rat>> = ws.iter().map(|w| m.mul_vec(w)).chain(wt.iter().map(neg)).collect();
        let sol = mixed_kernel(m.rows(), &rat_cols, &int_cols);
        let lift = |t: &[Rat], c: &[Rat]| {
            let mut z = vec![Rat::zero(); self.dim];
            for (ti, u) in t.iter().zip(&us) {
                if !ti.is_zero() {
                    z.iter_mut().zip(u).for_each(|(x, y)| *x += ti * y);
                }
            }
            for (ci, w) in c.iter().zip(&ws) {
                if !ci.is_zero() {
                    z.iter_mut().zip(w).for_each(|(x, y)| *x += ci * y);
                }
            }
            z
        };
        let span = sol.span.iter().map(|(r, _)| lift(&r[..us.len()], &[])).collect();
        let lattice = sol.lattice.iter().map(|(r, n)| lift(&r[..us.len()], &n[..ws.len()])).collect();
        Self::new(self.dim, span, lattice)
    }

    /// Invariants of `self / sub`; fails when `sub` is not contained in `self`.
    pub fn quotient(&self, sub: &Self) -> Result<MixedGroup> {
        if let Some(w) = sub.witness_not_in(self) {
            return Err(Error::NotASubgroup(format!("generator {:?} is not in the ambient group", w)));
        }
        // Work modulo the divisible part of `sub`.
        let kill = &sub.span;
        let keep: Vec<usize> = (0..self.dim).filter(|c| !kill.pivots.contains(c)).collect();
        let project = |v: &[Rat]| -> Vec<Rat> {
            let r = kill.reduce(v);
            keep.iter().map(|&c| r[c].clone()).collect()
        };
        let n = keep.len();
        let u1 = Echelon::new(self.span.rows.iter().map(|u| project(u)).collect(), n);
        let w1: Vec<Vec<Rat>> = self.lattice_basis().iter().map(|w| project(w)).collect();
        let w2: Vec<Vec<Rat>> = sub.lattice_basis().iter().map(|w| project(w)).collect();
        let w2_rank = Echelon::new(w2.clone(), n).dim();
        let p1: Vec<Vec<Rat>> = w1.iter().map(|w| u1.reduce(w)).collect();
        let p2: Vec<Vec<Rat>> = w2.iter().map(|w| u1.reduce(w)).collect();
        let p2_rank = Echelon::new(p2.clone(), n).dim();
        let circle_rank = w2_rank - p2_rank;
        let rational_rank = u1.dim() - circle_rank;
        // Lattice part: P(W1) / P(W2).
        let scale = lcm_of_denominators(p1.iter().chain(&p2));
        let l1 = Hermite::new(p1.iter().map(|v| scale_to_int(v, &scale).unwrap()).collect(), n);
        let coords: Vec<Vec<Int>> = p2
            .iter()
            .map(|v| l1.coordinates(&scale_to_int(v, &scale).unwrap()).expect("sub lattice lies in the lattice"))
            .collect();
        let (free_rank, torsion) = if coords.is_empty() || l1.rank() == 0 {
            (l1.rank(), vec![])
        } else {
            let snf = smith_normal_form(&Matrix::from_rows(coords));
            let torsion: Vec<Int> = snf.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
            (l1.rank() - snf.rank(), torsion)
        };
        Ok(MixedGroup { free_rank, torsion, rational_rank, circle_rank })
    }
}

/// `Z^free_rank ⊕ ⊕ Z/torsion ⊕ Q^rational_rank ⊕ (Q/Z)^circle_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_ints")]
    pub torsion: Vec<Int>,
    pub rational_rank: usize,
    pub circle_rank: usize,
}

fn serialize_ints<S: serde::Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(Int::to_string))
}

impl MixedGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty() && self.rational_rank == 0 && self.circle_rank == 0
    }
}

impl std::fmt::Display for MixedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if self.rational_rank > 0 {
            parts.push(format!("Q^{}", self.rational_rank));
        }
        if self.circle_rank > 0 {
            parts.push(format!("(Q/Z)^{}", self.circle_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Solutions of `A r + B n = 0` with `r` rational and `n` integral.
struct MixedKernel {
    /// Pure rational directions `(r, 0)`.
    span: Vec<(Vec<Rat>, Vec<Rat>)>,
    /// Lattice generators `(r, n)`.
    lattice: Vec<(Vec<Rat>, Vec<Rat>)>,
}

fn mixed_kernel(rows: usize, rat_cols: &[Vec<Rat>], int_cols: &[Vec<Rat>]) -> MixedKernel {
    let a = Matrix::from_columns(rows, rat_cols);
    let zero_n = vec![Rat::zero(); int_cols.len()];
    let span = rational_kernel(&a).into_iter().map(|r| (r, zero_n.clone())).collect();
    if int_cols.is_empty() {
        return MixedKernel { span, lattice: vec![] };
    }
    // Left annihilator of A: the constraint on n is Q B n = 0.
    let q = rational_kernel(&a.transpose());
    let b = Matrix::from_columns(rows, int_cols);
    let qb: Vec<Vec<Rat>> = q.iter().map(|qi| b.transpose().mul_vec(qi)).collect();
    let basis: Vec<Vec<Int>> = if qb.is_empty() {
        (0..int_cols.len())
            .map(|i| (0..int_cols.len()).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect()
    } else {
        let s = lcm_of_denominators(&qb);
        let m = Matrix::from_rows(qb.iter().map(|r| scale_to_int(r, &s).unwrap()).collect());
        let (k, _) = integer_kernel(&m);
        (0..k.cols()).map(|j| k.column(j)).collect()
    };
    let a_echelon_solve = Solver::new(&a);
    let lattice = basis
        .into_iter()
        .map(|n| {
            let n: Vec<Rat> = n.into_iter().map(Rat::from_integer).collect();
            let rhs: Vec<Rat> = b.mul_vec(&n).into_iter().map(|x| -x).collect();
            let r = a_echelon_solve.solve(&rhs).expect("consistent by construction");
            (r, n)
        })
        .collect();
    MixedKernel { span, lattice }
}

/// Rational solver for `A x = b` by elimination, free variables set to zero.
pub struct Solver {
    cols: usize,
    /// Echelon form of the augmented system's transform.
    echelon: Echelon,
    transform: Vec<Vec<Rat>>,
}

impl Solver {
    pub fn new(a: &RatMatrix) -> Self {
        // Row-reduce [A | I] to track the transform.
        let (m, c) = (a.rows(), a.cols());
        let aug: Vec<Vec<Rat>> = a
            .dense_rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..m).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        let e = Echelon::new_partial(aug, c);
        let transform = e.rows.iter().map(|r| r[c..].to_vec()).collect();
        let echelon = Echelon { rows: e.rows.iter().map(|r| r[..c].to_vec()).collect(), pivots: e.pivots };
        Solver { cols: c, echelon, transform }
    }

    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let tb: Vec<Rat> = self
            .transform
            .iter()
            .map(|row| row.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y))
            .collect();
        let rank = self.echelon.pivots.len();
        if tb[rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in self.echelon.pivots.iter().enumerate() {
            x[p] = tb[i].clone();
        }
        Some(x)
    }
}

impl Echelon {
    /// Reduced echelon form pivoting only in the first `pivot_cols` columns;
    /// zero rows are kept at the bottom.
    fn new_partial(mut rows: Vec<Vec<Rat>>, pivot_cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..pivot_cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = rows[r][col].recip();
            rows[r].iter_mut().for_each(|x| *x *= &inv);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        Echelon { rows, pivots }
    }
}

/// Solves `m x = b` where `m` has integer entries and the unknowns are
/// integral exactly where `integral` says so.
pub fn solve_mixed(m: &crate::IntMatrix, integral: &[bool], b: &[Rat]) -> Option<Vec<Rat>> {
    MixedSolver::new(m, integral).solve(b)
}

/// Reusable mixed solver for a fixed matrix.
pub struct MixedSolver {
    integral: Vec<bool>,
    ints: Vec<usize>,
    rats: Vec<usize>,
    mi: crate::IntMatrix,
    snf_r: super::snf::SnfDecomposition,
    q: crate::IntMatrix,
    snf_q: Option<super::snf::SnfDecomposition>,
}

impl MixedSolver {
    pub fn new(m: &crate::IntMatrix, integral: &[bool]) -> Self {
        assert_eq!(m.cols(), integral.len());
        let ints: Vec<usize> = (0..m.cols()).filter(|&j| integral[j]).collect();
        let rats: Vec<usize> = (0..m.cols()).filter(|&j| !integral[j]).collect();
        let mi = m.select_columns(&ints);
        let mr = m.select_columns(&rats);
        let snf_r = smith_normal_form(&mr);
        let rank = snf_r.rank();
        let q_rows: Vec<Vec<Int>> = snf_r.u.dense_rows().into_iter().skip(rank).collect();
        let q = if q_rows.is_empty() { Matrix::zeros(0, m.rows()) } else { Matrix::from_rows(q_rows) };
        let snf_q = (!ints.is_empty() && q.rows() > 0).then(|| smith_normal_form(&q.mul(&mi)));
        MixedSolver { integral: integral.to_vec(), ints, rats, mi, snf_r, q, snf_q }
    }

    pub fn integral(&self) -> &[bool] {
        &self.integral
    }

    /// Canonical solution (free parameters zero), or `None` if unsolvable.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let qb = mul_int_rat(&self.q, b);
        let n = match &self.snf_q {
            Some(snf) => super::group::solve_with_snf(snf, &qb, super::group::Ring::Int)?,
            None => {
                if qb.iter().any(|x| !x.is_zero()) {
                    return None;
                }
                vec![Rat::zero(); self.ints.len()]
            }
        };
        let rest: Vec<Rat> = b.iter().zip(mul_int_rat(&self.mi, &n)).map(|(x, y)| x - y).collect();
        let r = super::group::solve_with_snf(&self.snf_r, &rest, super::group::Ring::Rational)?;
        let mut x = vec![Rat::zero(); self.integral.len()];
        for (k, &j) in self.ints.iter().enumerate() {
            x[j] = n[k].clone();
        }
        for (k, &j) in self.rats.iter().enumerate() {
            x[j] = r[k].clone();
        }
        Some(x)
    }
}
