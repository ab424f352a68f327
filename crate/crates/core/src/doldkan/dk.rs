use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::complex::{vanishes_mod, BoundedChainComplex};
use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::{Int, IntMatrix};

/// Order-preserving surjections `[n] -> [k]` as value sequences, in
/// lexicographic order. There are `C(n, k)` of them.
pub fn enumerate_surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn fill(pos: usize, n: usize, k: usize, seq: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > n {
            out.push(seq.clone());
            return;
        }
        // Each step keeps the value or raises it by one; staying first gives
        // lexicographic order.
        for v in [seq[pos - 1], seq[pos - 1] + 1] {
            if v <= k && k - v <= n - pos {
                seq[pos] = v;
                fill(pos + 1, n, k, seq, out);
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        fill(1, n, k, &mut vec![0; n + 1], &mut out);
    }
    out
}

/// One summand `C_k` of a level, indexed by a surjection `[n] -> [k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub surjection: Vec<usize>,
    pub degree: usize,
    /// First generator of the summand inside the level.
    pub offset: usize,
}

/// Levels `0..=max_level` of the Dold–Kan simplicial abelian group of a
/// bounded complex, with all face and degeneracy matrices.
#[derive(Clone, Debug)]
pub struct DKTruncation {
    pub complex: BoundedChainComplex,
    pub max_level: usize,
    /// Summands of level `n`, ordered by degree and then lexicographically.
    pub summands: Vec<Vec<Summand>>,
    /// Generator orders of level `n` (0 for free generators).
    pub orders: Vec<Vec<Int>>,
    /// `faces[n][i]` is `d_i` from level `n` to level `n - 1` (empty for `n = 0`).
    pub faces: Vec<Vec<IntMatrix>>,
    /// `degeneracies[n][i]` is `s_i` from level `n` to level `n + 1`, for `n < max_level`.
    pub degeneracies: Vec<Vec<IntMatrix>>,
}

impl DKTruncation {
    pub fn generators(&self, n: usize) -> usize {
        self.orders[n].len()
    }

    pub fn summand(&self, n: usize, surjection: &[usize]) -> Option<&Summand> {
        self.summands[n].iter().find(|s| s.surjection == surjection)
    }

    fn same_map(&self, lhs: &IntMatrix, rhs: &IntMatrix, target: usize) -> bool {
        lhs.rows() == rhs.rows()
            && lhs.cols() == rhs.cols()
            && (0..lhs.cols()).all(|j| {
                let diff: Vec<Int> = lhs.column(j).iter().zip(rhs.column(j)).map(|(a, b)| a - b).collect();
                vanishes_mod(&diff, &self.orders[target])
            })
    }

    /// Checks every simplicial identity between levels `0..=max_level`, as
    /// matrix equations modulo the relations of the target level.
    pub fn verify_identities(&self) -> Result<()> {
        let fail = |what: String| Err(Error::IdentitiesViolated(what));
        let n_max = self.max_level;
        for n in 0..=n_max {
            if self.orders.len() <= n || self.summands.len() <= n {
                return fail(format!("level {n} is missing"));
            }
            if n >= 1 && self.faces[n].len() != n + 1 {
                return fail(format!("level {n} has {} faces", self.faces[n].len()));
            }
            if n < n_max && self.degeneracies[n].len() != n + 1 {
                return fail(format!("level {n} has {} degeneracies", self.degeneracies[n].len()));
            }
        }
        // d_i d_j = d_(j-1) d_i for i < j.
        for n in 2..=n_max {
            for j in 0..=n {
                for i in 0..j {
                    let lhs = self.faces[n - 1][i].mul(&self.faces[n][j]);
                    let rhs = self.faces[n - 1][j - 1].mul(&self.faces[n][i]);
                    if !self.same_map(&lhs, &rhs, n - 2) {
                        return fail(format!("d{i} d{j} = d{} d{i} at level {n}", j - 1));
                    }
                }
            }
        }
        // s_i s_j = s_(j+1) s_i for i <= j.
        for n in 0..n_max.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.degeneracies[n + 1][i].mul(&self.degeneracies[n][j]);
                    let rhs = self.degeneracies[n + 1][j + 1].mul(&self.degeneracies[n][i]);
                    if !self.same_map(&lhs, &rhs, n + 2) {
                        return fail(format!("s{i} s{j} = s{} s{i} at level {n}", j + 1));
                    }
                }
            }
        }
        // Mixed identities, d_i s_j from level n to n.
        for n in 0..n_max {
            let id = Matrix::<Int>::identity(self.generators(n));
            for j in 0..=n {
                let s = &self.degeneracies[n][j];
                for i in 0..=n + 1 {
                    let lhs = self.faces[n + 1][i].mul(s);
                    let rhs = if i < j {
                        self.degeneracies[n - 1][j - 1].mul(&self.faces[n][i])
                    } else if i == j || i == j + 1 {
                        id.clone()
                    } else {
                        self.degeneracies[n - 1][j].mul(&self.faces[n][i - 1])
                    };
                    if !self.same_map(&lhs, &rhs, n) {
                        return fail(format!("d{i} s{j} at level {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Level-indexed bundle of summands, orders and matrices.
    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = (0..=self.max_level)
            .map(|n| {
                json!({
                    "level": n,
                    "summands": self.summands[n].iter().map(|s| json!({"surjection": s.surjection, "degree": s.degree, "offset": s.offset})).collect::<Vec<_>>(),
                    "orders": self.orders[n].iter().map(Int::to_string).collect::<Vec<_>>(),
                    "faces": self.faces[n].iter().map(Matrix::to_json).collect::<Vec<_>>(),
                    "degeneracies": self.degeneracies.get(n).map(|d| d.iter().map(Matrix::to_json).collect::<Vec<_>>()).unwrap_or_default(),
                })
            })
            .collect();
        json!({ "max_level": self.max_level, "complex": self.complex.to_json(), "levels": levels })
    }
}

/// Copies `block` into `m` at the given offsets.
fn put_block(m: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix) {
    for (i, j, v) in block.entries() {
        m.set(row + i, col + j, v);
    }
}

/// The Dold–Kan simplicial abelian group of `complex`, up to level `max_level`.
///
/// A face `d_i` sends the summand of `σ: [n] -> [k]` along the epi-mono
/// factorization of `σ d^i`: identically when it is onto, by `(-1)^k d_k`
/// when its image misses only `k`, and to zero otherwise. A degeneracy sends
/// the summand of `σ` identically to that of `σ s^i`.
pub fn dk(complex: &BoundedChainComplex, max_level: usize) -> Result<DKTruncation> {
    let top = complex.top;
    let mut summands = Vec::with_capacity(max_level + 1);
    let mut orders = Vec::with_capacity(max_level + 1);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(max_level + 1);
    for n in 0..=max_level {
        let mut level = Vec::new();
        let mut level_orders = Vec::new();
        let mut level_index = HashMap::new();
        for k in 0..=n.min(top) {
            for surjection in enumerate_surjections(n, k) {
                level_index.insert(surjection.clone(), level.len());
                level.push(Summand { surjection, degree: k, offset: level_orders.len() });
                level_orders.extend(complex.orders[k].iter().cloned());
            }
        }
        summands.push(level);
        orders.push(level_orders);
        index.push(level_index);
    }
    let identity = |k: usize| Matrix::<Int>::identity(complex.generators(k));
    let mut faces = vec![Vec::new()];
    for n in 1..=max_level {
        let mut level_faces = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut m = Matrix::zeros(orders[n - 1].len(), orders[n].len());
            for s in &summands[n] {
                let k = s.degree;
                let mut tau = s.surjection.clone();
                tau.remove(i);
                let missing: Vec<usize> = (0..=k).filter(|v| !tau.contains(v)).collect();
                let (target_k, block) = match missing.as_slice() {
                    [] => (k, identity(k)),
                    [v] if *v == k => {
                        let sign = if k % 2 == 0 { Int::one() } else { -Int::one() };
                        (k - 1, complex.differential(k).map(|x| x * &sign))
                    }
                    _ => continue,
                };
                let t = &summands[n - 1][index[n - 1][&tau]];
                debug_assert_eq!(t.degree, target_k);
                put_block(&mut m, t.offset, s.offset, &block);
            }
            level_faces.push(m);
        }
        faces.push(level_faces);
    }
    let mut degeneracies = Vec::with_capacity(max_level);
    for n in 0..max_level {
        let mut level_degs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut m = Matrix::zeros(orders[n + 1].len(), orders[n].len());
            for s in &summands[n] {
                let mut tau = s.surjection.clone();
                tau.insert(i, s.surjection[i]);
                let t = &summands[n + 1][index[n + 1][&tau]];
                put_block(&mut m, t.offset, s.offset, &identity(s.degree));
            }
            level_degs.push(m);
        }
        degeneracies.push(level_degs);
    }
    let truncation = DKTruncation { complex: complex.clone(), max_level, summands, orders, faces, degeneracies };
    truncation.verify_identities()?;
    Ok(truncation)
}

/// Outcome of comparing a 2-simplex with its labelled-simplex description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVerdict {
    /// `C_1`-components of `d_0`, `d_1`, `d_2` of the element.
    pub faces: [Vec<Int>; 3],
    /// `(b02, b01 + b02, d c + b01)` from the labels.
    pub expected_faces: [Vec<Int>; 3],
    /// Alternating sum of the face components.
    pub boundary: Vec<Int>,
    /// `d c` of the top label.
    pub top_boundary: Vec<Int>,
    pub faces_match: bool,
    pub boundary_matches: bool,
}

impl LabelVerdict {
    pub fn holds(&self) -> bool {
        self.faces_match && self.boundary_matches
    }
}

/// Reads a level-2 element as labels `(a, b01, b02, c)` and compares its
/// faces with the labelled-simplex formulas. `b01` sits on the surjection
/// `(0,1,1)` and `b02` on `(0,0,1)`.
pub fn label_simplex_check(s: &DKTruncation, element: &[Int]) -> Result<LabelVerdict> {
    if s.max_level < 2 {
        return Err(Error::DimensionMismatch("truncation stops below level 2".into()));
    }
    if element.len() != s.generators(2) {
        return Err(Error::DimensionMismatch(format!("level 2 has {} generators, got {}", s.generators(2), element.len())));
    }
    let c1 = s.complex.generators(1);
    let block = |n: usize, surjection: &[usize], v: &[Int]| -> Vec<Int> {
        match s.summand(n, surjection) {
            Some(sm) => v[sm.offset..sm.offset + s.complex.generators(sm.degree)].to_vec(),
            None => Vec::new(),
        }
    };
    let b01 = block(2, &[0, 1, 1], element);
    let b02 = block(2, &[0, 0, 1], element);
    let c = block(2, &[0, 1, 2], element);
    let dc = if c.is_empty() { vec![Int::zero(); c1] } else { s.complex.differential(2).mul_vec(&c) };
    let add = |x: &[Int], y: &[Int]| -> Vec<Int> {
        if x.is_empty() {
            return y.to_vec();
        }
        if y.is_empty() {
            return x.to_vec();
        }
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    };
    let faces: [Vec<Int>; 3] = std::array::from_fn(|i| block(1, &[0, 1], &s.faces[2][i].mul_vec(element)));
    let expected_faces = [b02.clone(), add(&b01, &b02), add(&dc, &b01)];
    let orders = &s.complex.orders.get(1).cloned().unwrap_or_default();
    let equal = |x: &[Int], y: &[Int]| {
        let diff: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        x.len() == y.len() && vanishes_mod(&diff, orders)
    };
    let faces_match = faces.iter().zip(&expected_faces).all(|(x, y)| equal(x, y));
    let boundary: Vec<Int> = (0..c1).map(|j| &faces[0][j] - &faces[1][j] + &faces[2][j]).collect();
    let boundary_matches = equal(&boundary, &dc);
    Ok(LabelVerdict { faces, expected_faces, boundary, top_boundary: dc, faces_match, boundary_matches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn surjection_counts_and_order() {
        assert_eq!(enumerate_surjections(2, 1), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(enumerate_surjections(3, 3), vec![vec![0, 1, 2, 3]]);
        assert_eq!(enumerate_surjections(3, 1).len(), 3);
        assert_eq!(enumerate_surjections(0, 0), vec![vec![0]]);
        assert!(enumerate_surjections(1, 2).is_empty());
        for n in 0..7 {
            for k in 0..=n {
                let all = enumerate_surjections(n, k);
                let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
                assert_eq!(all.len(), binom);
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn zero_complex_has_zero_levels() {
        let s = dk(&BoundedChainComplex::zero(), 3).unwrap();
        assert!((0..=3).all(|n| s.generators(n) == 0));
    }

    #[test]
    fn corrupted_face_is_caught() {
        let c = BoundedChainComplex::shifted(&[int(0)], 1).unwrap();
        let mut s = dk(&c, 3).unwrap();
        s.faces[2][1].set(0, 0, int(0));
        assert!(matches!(s.verify_identities(), Err(Error::IdentitiesViolated(_))));
    }

    #[test]
    fn labelled_two_simplex() {
        // C_2 -> C_1 -> C_0 = Z -2-> Z -0-> Z.
        let c = BoundedChainComplex::free(
            &[1, 1, 1],
            vec![Matrix::from_rows(vec![vec![int(0)]]), Matrix::from_rows(vec![vec![int(2)]])],
        )
        .unwrap();
        let s = dk(&c, 2).unwrap();
        // Generators: a, b02, b01, c.
        let v = label_simplex_check(&s, &[int(5), int(3), int(7), int(1)]).unwrap();
        assert!(v.holds());
        assert_eq!(v.boundary, vec![int(2)]);
        let cycle = label_simplex_check(&s, &[int(1), int(1), int(1), int(0)]).unwrap();
        assert!(cycle.holds());
        assert_eq!(cycle.boundary, vec![int(0)]);
    }
}
