use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::abelian::matrix::parse_scalar;
use crate::abelian::{AbelianGroupPresentation, Matrix, MixedGroup, MixedSubgroup};
use crate::error::{Error, Result};
use crate::{Int, IntMatrix, Rat, RatMatrix};

/// Chain complex `C_D -> … -> C_0` of finitely generated abelian groups.
///
/// Degree `k` has generators with orders `orders[k]` (0 for a free
/// generator), so `C_k = ⊕ Z/orders[k][i]`. The differential
/// `d_k: C_k -> C_(k-1)` is an integer matrix on generators that respects the
/// relations.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedChainComplex {
    pub top: usize,
    pub orders: Vec<Vec<Int>>,
    /// `differentials[k - 1]` is `d_k`, for `k = 1..=top`.
    pub differentials: Vec<IntMatrix>,
}

/// Whether `v` lies in `⊕ orders[i] Z`.
pub(crate) fn vanishes_mod(v: &[Int], orders: &[Int]) -> bool {
    v.iter().zip(orders).all(|(x, o)| if o.is_zero() { x.is_zero() } else { x.is_multiple_of(o) })
}

/// The relation lattice `⊕ orders[i] Z` inside `Q^n`.
pub(crate) fn relation_lattice(orders: &[Int]) -> MixedSubgroup {
    let n = orders.len();
    let lattice = orders
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.is_zero())
        .map(|(i, o)| {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::from_integer(o.clone());
            v
        })
        .collect();
    MixedSubgroup::new(n, vec![], lattice)
}

pub(crate) fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.map(|x| Rat::from_integer(x.clone()))
}

impl BoundedChainComplex {
    /// Validates shapes, that each `d_k` respects the relations and `d^2 = 0`
    /// modulo relations.
    pub fn new(orders: Vec<Vec<Int>>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::NotAComplex("a complex needs degree 0".into()));
        }
        let top = orders.len() - 1;
        if differentials.len() != top {
            return Err(Error::NotAComplex(format!("{} differentials for top degree {top}", differentials.len())));
        }
        if orders.iter().flatten().any(|o| o.is_negative() || o.is_one()) {
            return Err(Error::NotAComplex("generator orders must be 0 or at least 2".into()));
        }
        for k in 1..=top {
            let d = &differentials[k - 1];
            if d.rows() != orders[k - 1].len() || d.cols() != orders[k].len() {
                return Err(Error::NotAComplex(format!("d_{k} is {}x{}, expected {}x{}", d.rows(), d.cols(), orders[k - 1].len(), orders[k].len())));
            }
            for (j, o) in orders[k].iter().enumerate() {
                if o.is_zero() {
                    continue;
                }
                let image: Vec<Int> = d.column(j).iter().map(|x| x * o).collect();
                if !vanishes_mod(&image, &orders[k - 1]) {
                    return Err(Error::NotAComplex(format!("d_{k} does not respect the order of generator {j}")));
                }
            }
            if k >= 2 {
                let dd = differentials[k - 2].mul(d);
                for j in 0..dd.cols() {
                    if !vanishes_mod(&dd.column(j), &orders[k - 2]) {
                        return Err(Error::CompositionNonzero);
                    }
                }
            }
        }
        Ok(BoundedChainComplex { top, orders, differentials })
    }

    /// Complex of free groups of the given ranks.
    pub fn free(ranks: &[usize], differentials: Vec<IntMatrix>) -> Result<Self> {
        Self::new(ranks.iter().map(|&r| vec![Int::zero(); r]).collect(), differentials)
    }

    /// `A` concentrated in `degree`.
    pub fn shifted(group: &[Int], degree: usize) -> Result<Self> {
        let mut orders = vec![Vec::new(); degree + 1];
        orders[degree] = group.to_vec();
        let differentials = (1..=degree).map(|k| Matrix::zeros(orders[k - 1].len(), orders[k].len())).collect();
        Self::new(orders, differentials)
    }

    pub fn zero() -> Self {
        BoundedChainComplex { top: 0, orders: vec![Vec::new()], differentials: Vec::new() }
    }

    pub fn generators(&self, k: usize) -> usize {
        self.orders.get(k).map_or(0, Vec::len)
    }

    /// `d_k`, zero outside `1..=top`.
    pub fn differential(&self, k: usize) -> IntMatrix {
        if k == 0 || k > self.top {
            return Matrix::zeros(self.generators(k.saturating_sub(1)), self.generators(k));
        }
        self.differentials[k - 1].clone()
    }

    /// `C_k` as a presentation on its generators (torsion first, then free).
    pub fn group(&self, k: usize) -> AbelianGroupPresentation {
        let orders = self.orders.get(k).cloned().unwrap_or_default();
        let n = orders.len();
        let (tors, free): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| !orders[i].is_zero());
        let torsion = tors.iter().map(|&i| orders[i].clone()).collect();
        let cols: Vec<usize> = tors.into_iter().chain(free.iter().copied()).collect();
        AbelianGroupPresentation::new(free.len(), torsion, Matrix::<Int>::identity(n).select_columns(&cols))
    }

    /// Isomorphism type of `C_k`.
    pub fn group_type(&self, k: usize) -> Result<MixedGroup> {
        let orders = self.orders.get(k).cloned().unwrap_or_default();
        MixedSubgroup::standard(&vec![true; orders.len()]).quotient(&relation_lattice(&orders))
    }

    /// `H_k = {x : d_k x ∈ relations} / (im d_(k+1) + relations)`.
    pub fn homology(&self, k: usize) -> Result<MixedGroup> {
        let n = self.generators(k);
        let ambient = MixedSubgroup::standard(&vec![true; n]);
        let cycles = if k == 0 {
            ambient
        } else {
            ambient.preimage(&to_rat(&self.differential(k)), &relation_lattice(&self.orders[k - 1]))
        };
        let incoming = MixedSubgroup::standard(&vec![true; self.generators(k + 1)]).image(&to_rat(&self.differential(k + 1)));
        let boundaries = incoming.sum(&relation_lattice(self.orders.get(k).map_or(&[][..], Vec::as_slice)));
        cycles.quotient(&boundaries)
    }

    /// JSON: `{"top": D, "groups": [{"free_rank", "torsion"} | {"orders"}],
    /// "differentials": [d_1, …, d_D]}`.
    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self.orders.iter().map(|o| json!({ "orders": o.iter().map(Int::to_string).collect::<Vec<_>>() })).collect();
        json!({
            "top": self.top,
            "groups": groups,
            "differentials": self.differentials.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let groups = v.get("groups").and_then(Value::as_array).ok_or_else(|| Error::Parse("complex needs groups".into()))?;
        let mut orders = Vec::new();
        for g in groups {
            if let Some(o) = g.get("orders") {
                let o = o.as_array().ok_or_else(|| Error::Parse("orders must be an array".into()))?;
                orders.push(o.iter().map(parse_scalar::<Int>).collect::<Result<Vec<_>>>()?);
            } else {
                let free = g.get("free_rank").and_then(Value::as_u64).unwrap_or(0) as usize;
                let mut o: Vec<Int> = match g.get("torsion") {
                    Some(t) => t.as_array().ok_or_else(|| Error::Parse("torsion must be an array".into()))?.iter().map(parse_scalar::<Int>).collect::<Result<_>>()?,
                    None => Vec::new(),
                };
                o.extend(std::iter::repeat(Int::zero()).take(free));
                orders.push(o);
            }
        }
        if let Some(top) = v.get("top").and_then(Value::as_u64) {
            if top as usize + 1 != orders.len() {
                return Err(Error::Parse(format!("top {top} but {} groups", orders.len())));
            }
        }
        let differentials = v
            .get("differentials")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("complex needs differentials".into()))?
            .iter()
            .map(Matrix::<Int>::from_json)
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders, differentials)
    }

    /// Random complex of top degree `top`: a direct sum of `Z -m-> Z`, `Z`
    /// and `Z/t` pieces in random degrees, with random unimodular changes of
    /// basis on the free part of each degree.
    pub fn random<R: Rng>(rng: &mut R, top: usize, pieces: usize) -> Self {
        let mut orders: Vec<Vec<Int>> = vec![Vec::new(); top + 1];
        let mut arrows: Vec<(usize, usize, usize, Int)> = Vec::new();
        for _ in 0..pieces {
            let k = rng.gen_range(0..=top);
            match rng.gen_range(0..3) {
                0 if k >= 1 => {
                    let m = Int::from(rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 });
                    orders[k].push(Int::zero());
                    orders[k - 1].push(Int::zero());
                    arrows.push((k, orders[k].len() - 1, orders[k - 1].len() - 1, m));
                }
                2 => orders[k].push(Int::from(rng.gen_range(2..=4))),
                _ => orders[k].push(Int::zero()),
            }
        }
        let mut differentials: Vec<IntMatrix> = (1..=top).map(|k| Matrix::zeros(orders[k - 1].len(), orders[k].len())).collect();
        for (k, col, row, m) in arrows {
            differentials[k - 1].set(row, col, m);
        }
        // Change of basis g_k on the free generators: d_k -> g_(k-1) d_k g_k^(-1).
        let changes: Vec<(IntMatrix, IntMatrix)> = orders.iter().map(|o| random_unimodular(rng, o)).collect();
        for k in 1..=top {
            differentials[k - 1] = changes[k - 1].0.mul(&differentials[k - 1]).mul(&changes[k].1);
        }
        Self::new(orders, differentials).expect("direct sums of elementary complexes are complexes")
    }
}

/// A unimodular matrix acting on the free coordinates only, and its inverse.
fn random_unimodular<R: Rng>(rng: &mut R, orders: &[Int]) -> (IntMatrix, IntMatrix) {
    let n = orders.len();
    let free: Vec<usize> = (0..n).filter(|&i| orders[i].is_zero()).collect();
    let mut g = Matrix::<Int>::identity(n);
    let mut g_inv = Matrix::<Int>::identity(n);
    if free.len() < 2 {
        return (g, g_inv);
    }
    for _ in 0..3 {
        let i = free[rng.gen_range(0..free.len())];
        let j = free[rng.gen_range(0..free.len())];
        if i == j {
            continue;
        }
        let c = Int::from(rng.gen_range(-2..=2));
        // Row operation r_i += c r_j, inverse r_i -= c r_j.
        let mut e = Matrix::<Int>::identity(n);
        e.set(i, j, c.clone());
        let mut e_inv = Matrix::<Int>::identity(n);
        e_inv.set(i, j, -c);
        g = e.mul(&g);
        g_inv = g_inv.mul(&e_inv);
    }
    (g, g_inv)
}
