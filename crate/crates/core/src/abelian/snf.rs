//! Smith normal form over the integers with unimodular transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use crate::{Int, IntMatrix};

/// `u * source * v = d`, with `u_inv`, `v_inv` the inverses of `u`, `v`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub source: IntMatrix,
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries, each dividing the next.
    pub diagonal: Vec<Int>,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

struct Work {
    a: Vec<Vec<Int>>,
    u: Vec<Vec<Int>>,
    u_inv: Vec<Vec<Int>>,
    v: Vec<Vec<Int>>,
    v_inv: Vec<Vec<Int>>,
}

fn add_scaled(target: &mut [Int], source: &[Int], c: &Int) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t += c * s;
        }
    }
}

impl Work {
    /// row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &Int) {
        let (src_a, src_u) = (self.a[j].clone(), self.u[j].clone());
        add_scaled(&mut self.a[i], &src_a, c);
        add_scaled(&mut self.u[i], &src_u, c);
        for row in &mut self.u_inv {
            if !row[i].is_zero() {
                let t = &row[i] * c;
                row[j] -= t;
            }
        }
    }

    /// col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &Int) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[j].is_zero() {
                let t = &row[j] * c;
                row[i] += t;
            }
        }
        let src = self.v_inv[i].clone();
        add_scaled(&mut self.v_inv[j], &src, &-c);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
            for row in &mut self.u_inv {
                row.swap(i, j);
            }
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.iter_mut().chain(self.v.iter_mut()) {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -x.clone();
        }
        for row in &mut self.u_inv {
            row[i] = -row[i].clone();
        }
    }

    /// Smallest nonzero |entry| in the block rows >= t, cols >= t; ties go to
    /// the lexicographically first (row, col).
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, Int)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero |entry| among row t and column t (from t on).
    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a[t][t].abs());
        let mut consider = |i: usize, j: usize, x: &Int| {
            if !x.is_zero() && (best.2.is_zero() || x.abs() < best.2) {
                best = (i, j, x.abs());
            }
        };
        for i in t..self.a.len() {
            consider(i, t, &self.a[i][t]);
        }
        for j in t..self.a[t].len() {
            consider(t, j, &self.a[t][j]);
        }
        (best.0, best.1)
    }
}

fn to_dense(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.dense_rows()
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

/// Smith normal form of an arbitrary integer matrix (total function).
pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: to_dense(m),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(t) else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = -(&w.a[i][t] / &w.a[t][t]);
                    w.row_add(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = -(&w.a[t][j] / &w.a[t][t]);
                    w.col_add(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if clean {
                // Enforce the divisibility chain on the remaining block.
                let p = w.a[t][t].clone();
                let bad = (t + 1..rows).find(|&i| w.a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&p)));
                match bad {
                    Some(i) => w.row_add(t, i, &Int::one()),
                    None => break,
                }
            }
            let (i, j) = w.min_in_cross(t);
            w.row_swap(t, i);
            w.col_swap(t, j);
        }
        if w.a[t][t].is_negative() {
            w.row_negate(t);
        }
        t += 1;
    }
    let diagonal: Vec<Int> = (0..rows.min(cols)).map(|i| w.a[i][i].clone()).filter(|x| !x.is_zero()).collect();
    let dense = |rows: Vec<Vec<Int>>, c: usize| {
        if rows.is_empty() {
            Matrix::zeros(0, c)
        } else {
            Matrix::from_rows(rows)
        }
    };
    SnfDecomposition {
        source: m.clone(),
        d: dense(w.a, cols),
        u: dense(w.u, rows),
        u_inv: dense(w.u_inv, rows),
        v: dense(w.v, cols),
        v_inv: dense(w.v_inv, cols),
        diagonal,
    }
}
