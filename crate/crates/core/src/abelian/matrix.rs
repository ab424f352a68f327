use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_traits::{Num, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact scalar usable as a matrix entry.
pub trait Scalar: Num + Signed + Clone + Debug + Display + FromStr + Eq {}

impl<T: Num + Signed + Clone + Debug + Display + FromStr + Eq> Scalar for T {}

/// Matrices with both dimensions below this bound are stored densely.
pub const DENSE_LIMIT: usize = 32;

#[derive(Clone)]
enum Store<T> {
    Dense(Vec<T>),
    Sparse(BTreeMap<(usize, usize), T>),
}

/// Exact matrix with sparse triplet storage and a dense layout for small shapes.
#[derive(Clone)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    store: Store<T>,
}

/// One sparse row: column index to nonzero value.
pub type SparseRow<T> = BTreeMap<usize, T>;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let store = if rows < DENSE_LIMIT && cols < DENSE_LIMIT {
            Store::Dense(vec![T::zero(); rows * cols])
        } else {
            Store::Sparse(BTreeMap::new())
        };
        Matrix { rows, cols, store }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in entries {
            let cur = m.get(i, j);
            m.set(i, j, cur + v);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_sparse_rows(cols: usize, rows: &[SparseRow<T>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense(_))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        match &self.store {
            Store::Dense(v) => v[i * self.cols + j].clone(),
            Store::Sparse(m) => m.get(&(i, j)).cloned().unwrap_or_else(T::zero),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        match &mut self.store {
            Store::Dense(v) => v[i * self.cols + j] = value,
            Store::Sparse(m) => {
                if value.is_zero() {
                    m.remove(&(i, j));
                } else {
                    m.insert((i, j), value);
                }
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, T)> {
        match &self.store {
            Store::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k / self.cols, k % self.cols, x.clone()))
                .collect(),
            Store::Sparse(m) => m.iter().map(|(&(i, j), x)| (i, j, x.clone())).collect(),
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.store {
            Store::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
            Store::Sparse(m) => m.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn sparse_rows(&self) -> Vec<SparseRow<T>> {
        let mut out = vec![SparseRow::new(); self.rows];
        for (i, j, v) in self.entries() {
            out[i].insert(j, v);
        }
        out
    }

    pub fn dense_rows(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.entries().into_iter().map(|(i, j, v)| (j, i, v)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let right = other.sparse_rows();
        let mut out: Vec<SparseRow<T>> = vec![SparseRow::new(); self.rows];
        for (i, k, a) in self.entries() {
            for (&j, b) in &right[k] {
                let slot = out[i].entry(j).or_insert_with(T::zero);
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        for row in &mut out {
            row.retain(|_, v| !v.is_zero());
        }
        Self::from_sparse_rows(other.cols, &out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in product");
        let mut out = vec![T::zero(); self.rows];
        for (i, j, a) in self.entries() {
            if !x[j].is_zero() {
                out[i] = out[i].clone() + a * x[j].clone();
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix::from_triplets(self.rows, self.cols, self.entries().into_iter().map(|(i, j, v)| (i, j, f(&v))))
    }

    /// Columns `range` of `self`, as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for (new, &old) in cols.iter().enumerate() {
            for i in 0..self.rows {
                let v = self.get(i, old);
                if !v.is_zero() {
                    m.set(i, new, v);
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .into_iter()
            .map(|(i, j, v)| json!([i, j, v.to_string()]))
            .collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("matrix is missing '{key}'")))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let mut triplets = Vec::new();
        for e in v.get("entries").and_then(Value::as_array).into_iter().flatten() {
            let parts = e.as_array().filter(|a| a.len() == 3);
            let parts = parts.ok_or_else(|| Error::Parse("matrix entry must be [i, j, value]".into()))?;
            let i = parts[0].as_u64().ok_or_else(|| Error::Parse("bad row index".into()))? as usize;
            let j = parts[1].as_u64().ok_or_else(|| Error::Parse("bad column index".into()))? as usize;
            if i >= rows || j >= cols {
                return Err(Error::Parse(format!("entry ({i}, {j}) outside {rows}x{cols}")));
            }
            let value = parse_scalar::<T>(&parts[2])?;
            triplets.push((i, j, value));
        }
        Ok(Self::from_triplets(rows, cols, triplets))
    }
}

/// Parses a scalar written as a decimal string (or a JSON integer).
pub fn parse_scalar<T: Scalar>(v: &Value) -> Result<T> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::Parse(format!("expected a number string, got {v}"))),
    };
    text.trim()
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("cannot parse '{text}' as an exact scalar")))
}

impl<T: Scalar> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries() == other.entries()
    }
}

impl<T: Scalar> Eq for Matrix<T> {}

impl<T: Scalar> Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for (n, (i, j, v)) in self.entries().into_iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({i},{j})={v}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<Int> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Int::from).collect()).collect())
    }

    #[test]
    fn dense_below_limit_sparse_above() {
        assert!(Matrix::<Int>::zeros(31, 31).is_dense());
        assert!(!Matrix::<Int>::zeros(32, 3).is_dense());
    }

    #[test]
    fn sparse_storage_drops_zeros() {
        let mut a = Matrix::<Int>::zeros(40, 40);
        a.set(3, 4, Int::from(5));
        a.set(3, 4, Int::from(0));
        assert_eq!(a.nnz(), 0);
    }

    #[test]
    fn product_and_transpose() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let b = m(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), m(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), m(vec![vec![1, 3], vec![2, 4]]));
    }

    #[test]
    fn sparse_and_dense_products_agree() {
        let mut big = Matrix::<Int>::zeros(40, 40);
        for i in 0..40 {
            big.set(i, (i * 7) % 40, Int::from(i as i64 - 20));
        }
        let small = big.select_columns(&(0..10).collect::<Vec<_>>());
        let prod = big.mul(&small);
        for i in 0..40 {
            for j in 0..10 {
                let expect: Int = (0..40).map(|k| big.get(i, k) * small.get(k, j)).sum();
                assert_eq!(prod.get(i, j), expect);
            }
        }
    }

    #[test]
    fn json_round_trip_with_huge_entries() {
        let mut a = Matrix::<Int>::zeros(2, 3);
        a.set(1, 2, "123456789012345678901234567890".parse().unwrap());
        let back = Matrix::<Int>::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        assert_eq!(a.to_json()["entries"][0][2], "123456789012345678901234567890");
    }
}
