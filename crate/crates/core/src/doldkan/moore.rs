use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::complex::{relation_lattice, to_rat, BoundedChainComplex};
use super::dk::DKTruncation;
use crate::abelian::group::to_integers;
use crate::abelian::{smith_normal_form, solve_preimage, Matrix, MixedGroup, MixedSubgroup, Ring};
use crate::error::{Error, Result};
use crate::{Int, IntMatrix};

/// Normalized Moore complex together with the inclusion of each degree into
/// the corresponding level.
#[derive(Clone, Debug)]
pub struct MooreComplex {
    pub complex: BoundedChainComplex,
    /// `inclusions[n]` maps the generators of `N_n` to level `n`.
    pub inclusions: Vec<IntMatrix>,
}

fn lattice_vectors(sub: &MixedSubgroup) -> Vec<Vec<Int>> {
    sub.lattice_basis().iter().map(|v| to_integers(v).expect("lattice of an integral preimage")).collect()
}

fn express(basis: &IntMatrix, x: &[Int]) -> Result<Vec<Int>> {
    solve_preimage(basis, x, Ring::Int)
        .and_then(|v| to_integers(&v))
        .ok_or_else(|| Error::IdentitiesViolated("face of a normalized chain left the normalized subgroup".into()))
}

/// Per-level data: a basis of the lattice `L_n`, the change of basis `u`
/// adapted to the relations, and which adapted generators survive.
struct Level {
    basis: IntMatrix,
    u: IntMatrix,
    adapted: IntMatrix,
    kept: Vec<usize>,
    orders: Vec<Int>,
}

fn normalized_level(s: &DKTruncation, n: usize) -> Result<Level> {
    let g = s.generators(n);
    let ambient = MixedSubgroup::standard(&vec![true; g]);
    let lattice = if n == 0 {
        ambient
    } else {
        let h = s.generators(n - 1);
        let mut stacked = Matrix::<Int>::zeros(n * h, g);
        let mut target_orders = Vec::with_capacity(n * h);
        for i in 0..n {
            for (r, c, v) in s.faces[n][i].entries() {
                stacked.set(i * h + r, c, v);
            }
            target_orders.extend(s.orders[n - 1].iter().cloned());
        }
        ambient.preimage(&to_rat(&stacked), &relation_lattice(&target_orders))
    };
    let vectors = lattice_vectors(&lattice);
    let basis = Matrix::from_columns(g, &vectors);
    let r = vectors.len();
    let mut relation_columns = Vec::new();
    for (i, o) in s.orders[n].iter().enumerate() {
        if !o.is_zero() {
            let mut e = vec![Int::zero(); g];
            e[i] = o.clone();
            relation_columns.push(express(&basis, &e)?);
        }
    }
    let relations = Matrix::from_columns(r, &relation_columns);
    let snf = smith_normal_form(&relations);
    let adapted = basis.mul(&snf.u_inv);
    let mut kept = Vec::new();
    let mut orders = Vec::new();
    for j in 0..r {
        let d = snf.diagonal.get(j).map(|x| x.abs()).unwrap_or_else(Int::zero);
        if !d.is_one() {
            kept.push(j);
            orders.push(d);
        }
    }
    Ok(Level { basis, u: snf.u, adapted, kept, orders })
}

/// Normalized Moore complex `N_n = ∩_(i<n) ker d_i` with differential
/// `(-1)^n d_n`, together with the inclusions into the levels.
pub fn moore_with_inclusions(s: &DKTruncation) -> Result<MooreComplex> {
    s.verify_identities()?;
    let levels: Vec<Level> = (0..=s.max_level).map(|n| normalized_level(s, n)).collect::<Result<_>>()?;
    let mut differentials = Vec::with_capacity(s.max_level);
    for n in 1..=s.max_level {
        let (src, dst) = (&levels[n], &levels[n - 1]);
        let mut columns = Vec::with_capacity(src.kept.len());
        for &j in &src.kept {
            let mut x = s.faces[n][n].mul_vec(&src.adapted.column(j));
            if n % 2 == 1 {
                x.iter_mut().for_each(|v| *v = -v.clone());
            }
            let coords = dst.u.mul_vec(&express(&dst.basis, &x)?);
            let column = dst
                .kept
                .iter()
                .zip(&dst.orders)
                .map(|(&i, o)| if o.is_zero() { coords[i].clone() } else { coords[i].mod_floor(o) })
                .collect();
            columns.push(column);
        }
        differentials.push(Matrix::from_columns(dst.kept.len(), &columns));
    }
    let inclusions = levels.iter().map(|l| l.adapted.select_columns(&l.kept)).collect();
    let orders = levels.into_iter().map(|l| l.orders).collect();
    let complex = BoundedChainComplex::new(orders, differentials).map_err(|e| Error::IdentitiesViolated(format!("normalized complex: {e}")))?;
    Ok(MooreComplex { complex, inclusions })
}

/// The normalized Moore complex of a truncation, presented on adapted
/// generators.
pub fn moore_normalize(s: &DKTruncation) -> Result<BoundedChainComplex> {
    Ok(moore_with_inclusions(s)?.complex)
}

/// `π_n = H_n(N)` for `n < max_level`; the top level lacks its incoming
/// differential.
pub fn homotopy_groups(s: &DKTruncation) -> Result<Vec<MixedGroup>> {
    let moore = moore_normalize(s)?;
    (0..s.max_level).map(|n| moore.homology(n)).collect()
}

/// Whether `f: Z^a / R_src -> Z^b / R_tgt` (given on generators) is an
/// isomorphism of the presented groups.
pub fn presented_map_is_iso(f: &IntMatrix, source_orders: &[Int], target_orders: &[Int]) -> bool {
    let f = to_rat(f);
    let source = MixedSubgroup::standard(&vec![true; source_orders.len()]);
    let target = MixedSubgroup::standard(&vec![true; target_orders.len()]);
    let target_relations = relation_lattice(target_orders);
    let onto = source.image(&f).sum(&target_relations).same_as(&target);
    let injective = source.preimage(&f, &target_relations).is_subgroup_of(&relation_lattice(source_orders));
    onto && injective
}

/// Verdict on the projection `N(dk C) -> C` onto the identity summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounitVerdict {
    pub chain_map: bool,
    /// Degrees where the projection is not an isomorphism.
    pub failures: Vec<usize>,
}

impl CounitVerdict {
    pub fn holds(&self) -> bool {
        self.chain_map && self.failures.is_empty()
    }
}

/// Checks that projecting normalized chains of `dk(C)` to their
/// identity-summand component is a chain isomorphism onto `C` in degrees up
/// to the truncation level.
pub fn counit_check(s: &DKTruncation) -> Result<CounitVerdict> {
    let moore = moore_with_inclusions(s)?;
    let c = &s.complex;
    let projections: Vec<IntMatrix> = (0..=s.max_level)
        .map(|n| {
            let width = c.generators(n);
            let mut p = Matrix::<Int>::zeros(width, s.generators(n));
            if let Some(sm) = s.summand(n, &(0..=n).collect::<Vec<_>>()) {
                for i in 0..width {
                    p.set(i, sm.offset + i, Int::one());
                }
            }
            p.mul(&moore.inclusions[n])
        })
        .collect();
    let mut failures = Vec::new();
    for (n, f) in projections.iter().enumerate() {
        let target = c.orders.get(n).cloned().unwrap_or_default();
        if !presented_map_is_iso(f, &moore.complex.orders[n], &target) {
            failures.push(n);
        }
    }
    let mut chain_map = true;
    for n in 1..=s.max_level {
        let lhs = projections[n - 1].mul(&moore.complex.differential(n));
        let rhs = c.differential(n).mul(&projections[n]);
        let target = c.orders.get(n - 1).cloned().unwrap_or_default();
        for j in 0..lhs.cols() {
            let diff: Vec<Int> = lhs.column(j).iter().zip(rhs.column(j)).map(|(a, b)| a - b).collect();
            if !super::complex::vanishes_mod(&diff, &target) {
                chain_map = false;
            }
        }
    }
    Ok(CounitVerdict { chain_map, failures })
}
