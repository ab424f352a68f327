use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::abelian::Matrix;
use crate::error::{Error, Result};
use crate::{Int, IntMatrix};

/// A simplex as a strictly increasing vertex list.
pub type Simplex = Vec<usize>;

/// Finite abstract simplicial complex with simplices stored by dimension in
/// lexicographic order.
///
/// Vertex labels are below `vertex_count`; subcomplexes keep the labels of
/// the complex they came from, so some labels may be unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

fn canonical(simplices: &BTreeSet<Simplex>) -> Vec<Vec<Simplex>> {
    let top = simplices.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_dim = vec![Vec::new(); top];
    for s in simplices {
        by_dim[s.len() - 1].push(s.clone());
    }
    by_dim
}

/// Whether `simplices` is closed under faces, made of strictly increasing
/// tuples below `vertex_count`, and listed by dimension then lexicographically.
pub fn validate(vertex_count: usize, simplices: &[Simplex]) -> bool {
    let increasing = |s: &Simplex| !s.is_empty() && s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&v| v < vertex_count);
    if !simplices.iter().all(increasing) {
        return false;
    }
    let ordered = simplices.windows(2).all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1]));
    let set: BTreeSet<&Simplex> = simplices.iter().collect();
    ordered && simplices.iter().all(|s| s.len() == 1 || faces(s).iter().all(|f| set.contains(f)))
}

/// Codimension-one faces, face `i` omitting vertex `i`.
pub fn faces(s: &[usize]) -> Vec<Simplex> {
    (0..s.len())
        .map(|i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect())
        .collect()
}

impl SimplicialComplex {
    /// The closure of `simplices` under taking faces.
    pub fn new(vertex_count: usize, simplices: &[Simplex]) -> Result<Self> {
        let mut all = BTreeSet::new();
        for s in simplices {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() || s.is_empty() {
                return Err(Error::InvalidComplex(format!("simplex {s:?} has repeated or no vertices")));
            }
            if let Some(&v) = t.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range 0..{vertex_count}")));
            }
            add_closure(&mut all, &t);
        }
        Ok(Self::from_closed(vertex_count, &all))
    }

    fn from_closed(vertex_count: usize, all: &BTreeSet<Simplex>) -> Self {
        let by_dim = canonical(all);
        let index = by_dim.iter().flat_map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i))).collect();
        SimplicialComplex { vertex_count, by_dim, index }
    }

    /// The full simplex on `n + 1` vertices with all faces.
    pub fn simplex(n: usize) -> Self {
        Self::new(n + 1, &[(0..=n).collect()]).expect("a simplex is valid")
    }

    pub fn point() -> Self {
        Self::simplex(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Dimension, or `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, Vec::len)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> Vec<Simplex> {
        self.by_dim.iter().flatten().cloned().collect()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    pub fn is_valid(&self) -> bool {
        validate(self.vertex_count, &self.all_simplices())
    }

    /// Matrix of the coboundary `C^k -> C^(k+1)` (rows indexed by
    /// `(k+1)`-simplices).
    pub fn coboundary_matrix(&self, k: usize) -> IntMatrix {
        let mut triplets = Vec::new();
        for (row, s) in self.simplices(k + 1).iter().enumerate() {
            for (i, f) in faces(s).iter().enumerate() {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                triplets.push((row, self.index[f], Int::from(sign)));
            }
        }
        Matrix::from_triplets(self.count(k + 1), self.count(k), triplets)
    }

    /// Subcomplex of all faces of simplices containing `s` (the closed star).
    pub fn closed_star(&self, s: &[usize]) -> Self {
        let mut all = BTreeSet::new();
        for t in self.by_dim.iter().flatten() {
            if s.iter().all(|v| t.binary_search(v).is_ok()) {
                add_closure(&mut all, t);
            }
        }
        Self::from_closed(self.vertex_count, &all)
    }

    /// Subcomplex generated by the given simplices of `self`.
    pub fn subcomplex(&self, generators: &[Simplex]) -> Result<Self> {
        if let Some(s) = generators.iter().find(|s| !self.contains(s)) {
            return Err(Error::InvalidComplex(format!("{s:?} is not a simplex of the complex")));
        }
        Self::new(self.vertex_count, generators)
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.by_dim.iter().flatten().all(|s| other.contains(s))
    }

    pub fn to_json(&self) -> Value {
        json!({ "vertices": self.vertex_count, "simplices": self.all_simplices() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("complex needs an integer 'vertices'".into()))? as usize;
        let list = v
            .get("simplices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("complex needs a 'simplices' array".into()))?;
        let simplices = list
            .iter()
            .map(|s| {
                s.as_array()
                    .ok_or_else(|| Error::Parse("simplex must be an array".into()))?
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("vertex must be an integer".into())))
                    .collect::<Result<Simplex>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, &simplices)
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

fn add_closure(all: &mut BTreeSet<Simplex>, s: &[usize]) {
    if all.contains(s) {
        return;
    }
    all.insert(s.to_vec());
    if s.len() > 1 {
        for f in faces(s) {
            add_closure(all, &f);
        }
    }
}

/// Standard triangulations used by tests, examples and the bundled corpus.
pub mod standard {
    use super::*;

    /// Boundary of a triangle.
    pub fn circle() -> SimplicialComplex {
        SimplicialComplex::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    /// Circle subdivided into `n >= 3` edges.
    pub fn polygon(n: usize) -> SimplicialComplex {
        let edges: Vec<Simplex> = (0..n).map(|i| {
            let (a, b) = (i, (i + 1) % n);
            vec![a.min(b), a.max(b)]
        }).collect();
        SimplicialComplex::new(n, &edges).unwrap()
    }

    /// Boundary of the tetrahedron.
    pub fn sphere() -> SimplicialComplex {
        SimplicialComplex::new(4, &faces(&[0, 1, 2, 3])).unwrap()
    }

    /// Seven-vertex torus.
    pub fn torus() -> SimplicialComplex {
        let tris: Vec<Simplex> = (0..7)
            .flat_map(|i| {
                let t1 = [i, (i + 1) % 7, (i + 3) % 7];
                let t2 = [i, (i + 2) % 7, (i + 3) % 7];
                [t1, t2]
            })
            .map(|t| {
                let mut t = t.to_vec();
                t.sort_unstable();
                t
            })
            .collect();
        SimplicialComplex::new(7, &tris).unwrap()
    }

    /// Six-vertex real projective plane.
    pub fn projective_plane() -> SimplicialComplex {
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
            [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
        ];
        SimplicialComplex::new(6, &tris.iter().map(|t| t.to_vec()).collect::<Vec<_>>()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn validation_examples() {
        let full = SimplicialComplex::simplex(2).all_simplices();
        assert!(validate(3, &full));
        assert!(!validate(2, &[vec![1], vec![0, 1]]));
        assert!(validate(0, &[]));
    }

    #[test]
    fn closure_and_order() {
        let k = SimplicialComplex::new(3, &[vec![2, 0, 1]]).unwrap();
        assert_eq!(k.count(0), 3);
        assert_eq!(k.count(1), 3);
        assert_eq!(k.simplices(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(k.is_valid());
        assert!(SimplicialComplex::new(2, &[vec![0, 0]]).is_err());
    }

    #[test]
    fn corpus_counts() {
        let t = torus();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
        let p = projective_plane();
        assert_eq!((p.count(0), p.count(1), p.count(2)), (6, 15, 10));
        let s = sphere();
        assert_eq!((s.count(0), s.count(1), s.count(2)), (4, 6, 4));
        assert_eq!(polygon(5).count(1), 5);
    }

    #[test]
    fn coboundary_sign_convention() {
        let k = SimplicialComplex::simplex(1);
        let d = k.coboundary_matrix(0);
        // δc(01) = c(1) - c(0)
        assert_eq!(d.get(0, 0), Int::from(-1));
        assert_eq!(d.get(0, 1), Int::from(1));
    }

    #[test]
    fn vertex_star_of_torus_is_a_hexagonal_cone() {
        let st = torus().closed_star(&[0]);
        assert_eq!((st.count(0), st.count(1), st.count(2)), (7, 12, 6));
        let est = torus().closed_star(&[0, 1]);
        assert_eq!((est.count(0), est.count(1), est.count(2)), (4, 5, 2));
    }

    #[test]
    fn json_round_trip() {
        let k = torus();
        assert_eq!(SimplicialComplex::from_json(&k.to_json()).unwrap(), k);
    }
}
