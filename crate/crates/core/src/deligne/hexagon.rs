use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::cohomology::{deligne_cohomology, to_rat};
use super::complex::{DeligneBase, DeligneCochain, DeligneComplex};
use super::maps::{curvature_unchecked, flat_lift, include_a, integer_row};
use crate::abelian::{rational_kernel, Matrix, MixedGroup, MixedSubgroup};
use crate::error::Result;
use crate::simplicial::{Coefficients, GradedCochain, SimplicialComplex};
use crate::{Rat, RatMatrix};

/// Verdict at one junction of the hexagon: two subgroups of an ambient
/// cochain space that exactness says are equal.
#[derive(Clone, Debug, Serialize)]
pub struct Junction {
    pub name: String,
    pub exact: bool,
    /// An ambient vector in one subgroup but not the other.
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<Vec<Rat>>,
}

fn serialize_witness<S: serde::Serializer>(w: &Option<Vec<Rat>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(Rat::to_string)),
    }
}

/// Groups, maps and exactness verdicts of the differential cohomology
/// hexagon at one level.
#[derive(Clone, Debug)]
pub struct HexagonReport {
    pub level: usize,
    /// The seven nodes in the order: de Rham `n-1`, forms mod exact, flat
    /// (`Q/Z`) classes, differential cohomology, closed forms with integral
    /// class, integral cohomology, de Rham `n`.
    pub groups: Vec<(String, MixedGroup)>,
    /// Maps in ambient cochain coordinates.
    pub maps: Vec<(String, RatMatrix)>,
    pub junctions: Vec<Junction>,
}

impl HexagonReport {
    pub fn all_exact(&self) -> bool {
        self.junctions.iter().all(|j| j.exact)
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|(n, g)| json!({ "node": n, "group": g, "display": g.to_string() }))
            .collect();
        let maps: Vec<Value> = self.maps.iter().map(|(n, m)| json!({ "map": n, "matrix": m.to_json() })).collect();
        json!({
            "level": self.level,
            "groups": groups,
            "maps": maps,
            "junctions": self.junctions,
            "all_exact": self.all_exact(),
        })
    }
}

fn junction(name: &str, lhs: &MixedSubgroup, rhs: &MixedSubgroup) -> Junction {
    let witness = lhs.witness_not_in(rhs).or_else(|| rhs.witness_not_in(lhs));
    Junction { name: name.to_string(), exact: witness.is_none(), witness }
}

fn rationals(dim: usize) -> MixedSubgroup {
    MixedSubgroup::standard(&vec![false; dim])
}

fn integers(dim: usize) -> MixedSubgroup {
    MixedSubgroup::standard(&vec![true; dim])
}

/// Simplicial coboundary `C^k -> C^(k+1)` as a rational matrix; handles
/// `k = -1` as the zero map.
fn delta(k: &SimplicialComplex, deg: isize) -> RatMatrix {
    if deg < 0 {
        return Matrix::zeros(k.count(0), 0);
    }
    to_rat(&k.coboundary_matrix(deg as usize))
}

fn count(k: &SimplicialComplex, deg: isize) -> usize {
    if deg < 0 {
        0
    } else {
        k.count(deg as usize)
    }
}

/// Columns are the images of unit vectors under `f`.
fn matrix_of(rows: usize, cols: usize, f: impl Fn(usize) -> Vec<Rat>) -> RatMatrix {
    let columns: Vec<Vec<Rat>> = (0..cols).map(f).collect();
    Matrix::from_columns(rows, &columns)
}

fn unit(dim: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[i] = Rat::one();
    v
}

/// The maps `a`, `I`, `R` and `j` of the level-`n` complex as matrices in
/// ambient cochain coordinates.
pub struct HexagonMaps {
    pub a: RatMatrix,
    pub i: RatMatrix,
    pub r: RatMatrix,
    pub j: RatMatrix,
}

pub fn hexagon_maps(c: &Arc<DeligneComplex>) -> Result<HexagonMaps> {
    let n = c.level();
    let k = c.complex();
    let (cn1, cn, dn) = (k.count(n - 1), k.count(n), c.dim(n));
    let a = matrix_of(dn, cn1, |s| {
        let e = GradedCochain::from_vector(k, n - 1, Coefficients::Rat, &unit(cn1, s));
        include_a(c, &e).expect("degree n-1").coords().to_vec()
    });
    let j = matrix_of(dn, cn1, |s| {
        let e = GradedCochain::from_vector(k, n - 1, Coefficients::Rat, &unit(cn1, s));
        flat_lift(c, &e).expect("integral lift").coords().to_vec()
    });
    let unit_cochain = |i: usize| DeligneCochain::from_vector(c, n, unit(dn, i)).expect("unit vector");
    let i_map = matrix_of(cn, dn, |i| {
        if c.layout(n).integral[i] {
            integer_row(&unit_cochain(i)).to_vector()
        } else {
            vec![Rat::zero(); cn]
        }
    });
    let r_map = matrix_of(cn, dn, |i| curvature_unchecked(&unit_cochain(i)).to_vector());
    Ok(HexagonMaps { a, i: i_map, r: r_map, j })
}

/// Computes the hexagon of `k` at level `n` and checks exactness of both
/// diagonals, the Bockstein row and the top row, plus the commuting
/// triangles `R a = δ`, `I j = β` and `[R] = [I]` in rational cohomology.
pub fn hexagon_check(k: &SimplicialComplex, n: usize) -> Result<HexagonReport> {
    let base = DeligneBase::new(&Arc::new(k.clone()))?;
    let c = base.level(n)?;
    let k = base.complex().clone();
    let ni = n as isize;
    let (cn1, cn) = (count(&k, ni - 1), count(&k, ni));
    let (d_prev, d_mid, d_next) = (delta(&k, ni - 2), delta(&k, ni - 1), delta(&k, ni));

    // Simplicial subgroups.
    let z_rat_n1 = MixedSubgroup::new(cn1, rational_kernel(&d_mid), vec![]);
    let b_rat_n1 = rationals(count(&k, ni - 2)).image(&d_prev);
    let z_int_n = integers(cn).preimage(&d_next, &MixedSubgroup::zero(d_next.rows()));
    let b_int_n = integers(cn1).image(&d_mid);
    let b_rat_n = rationals(cn1).image(&d_mid);
    let z_rat_n = rationals(cn).preimage(&d_next, &MixedSubgroup::zero(d_next.rows()));
    let forms = rationals(cn1);
    let omega_cl = z_int_n.sum(&b_rat_n);
    // Q/Z cocycles via rational lifts whose coboundary is integral.
    let z_flat = rationals(cn1).preimage(&d_mid, &integers(cn));
    let b_flat = b_rat_n1.sum(&integers(cn1));

    let hat = deligne_cohomology(&c, n)?;
    let maps = hexagon_maps(&c)?;
    let zero_n = MixedSubgroup::zero(cn);

    let groups = vec![
        ("H^{n-1}(Q)".to_string(), z_rat_n1.quotient(&b_rat_n1)?),
        ("C^{n-1}(Q)/im d".to_string(), forms.quotient(&b_rat_n1)?),
        ("H^{n-1}(Q/Z)".to_string(), z_flat.quotient(&b_flat)?),
        ("H^n_D".to_string(), hat.group.clone()),
        ("Z^n(Q) with integral class".to_string(), omega_cl.quotient(&MixedSubgroup::zero(cn))?),
        ("H^n(Z)".to_string(), z_int_n.quotient(&b_int_n)?),
        ("H^n(Q)".to_string(), z_rat_n.quotient(&b_rat_n)?),
    ];

    let (zd, bd) = (&hat.cocycles, &hat.boundaries);
    let mut junctions = vec![
        junction("diagonal a-I at C^{n-1}/im d: ker a is the integral-period cocycles", &forms.preimage(&maps.a, bd), &integers(cn1).preimage(&d_mid, &zero_n).sum(&b_rat_n1)),
        junction("diagonal a-I at H^n_D", &zd.preimage(&maps.i, &b_int_n), &forms.image(&maps.a).sum(bd)),
        junction("diagonal a-I at H^n(Z): I onto", &zd.image(&maps.i).sum(&b_int_n), &z_int_n),
        junction("diagonal j-R at H^{n-1}(Q/Z): j injective", &z_flat.preimage(&maps.j, bd), &b_flat),
        junction("diagonal j-R at H^n_D", &zd.preimage(&maps.r, &zero_n), &z_flat.image(&maps.j).sum(bd)),
        junction("diagonal j-R at closed forms: R onto", &zd.image(&maps.r), &omega_cl),
        junction("Bockstein row at H^{n-1}(Q/Z)", &z_flat.preimage(&d_mid, &b_int_n), &z_rat_n1.sum(&b_flat)),
        junction("Bockstein row at H^n(Z)", &z_int_n.preimage(&to_identity(cn), &b_rat_n), &z_flat.image(&d_mid).sum(&b_int_n)),
        junction("top row at C^{n-1}/im d", &forms.preimage(&d_mid, &zero_n), &z_rat_n1.sum(&b_rat_n1)),
        junction("top row at closed forms", &omega_cl.preimage(&to_identity(cn), &b_rat_n), &forms.image(&d_mid)),
    ];
    // Commuting triangles.
    let r_a = maps.r.mul(&maps.a);
    junctions.push(matrix_junction("R a = d", &r_a, &d_mid));
    let i_j = maps.i.mul(&maps.j);
    junctions.push(matrix_junction("I j = Bockstein", &i_j, &d_mid));
    let generators: Vec<Vec<Rat>> = zd.span_basis().iter().cloned().chain(zd.lattice_basis()).collect();
    let bad = generators.into_iter().find_map(|z| {
        let diff: Vec<Rat> = maps.r.mul_vec(&z).into_iter().zip(maps.i.mul_vec(&z)).map(|(x, y)| x - y).collect();
        (!b_rat_n.contains(&diff)).then_some(z)
    });
    junctions.push(Junction { name: "[R] = [I] in H^n(Q)".into(), exact: bad.is_none(), witness: bad });
let map_list = vec![
        ("a".to_string(), maps.a),
        ("I".to_string(), maps.i),
        ("R".to_string(), maps.r),
        ("j".to_string(), maps.j),
        ("d".to_string(), d_mid.clone()),
        ("Bockstein".to_string(), d_mid),
    ];
    Ok(HexagonReport { level: n, groups, maps: map_list, junctions })
}

fn to_identity(n: usize) -> RatMatrix {
    Matrix::identity(n)
}

fn matrix_junction(name: &str, lhs: &RatMatrix, rhs: &RatMatrix) -> Junction {
    let bad = (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j));
    Junction {
        name: name.to_string(),
        exact: bad.is_none(),
        witness: bad.map(|j| unit(lhs.cols(), j)),
    }
}
