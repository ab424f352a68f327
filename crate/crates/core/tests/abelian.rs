use masseykit::abelian::group::mul_int_rat;
use masseykit::abelian::*;
use masseykit::simplicial::standard;
use masseykit::{Int, IntMatrix, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn int(x: i64) -> Int {
    Int::from(x)
}

/// Determinant by fraction-free rational elimination.
fn det(m: &IntMatrix) -> Rat {
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = m.dense_rows().into_iter().map(|r| r.into_iter().map(Rat::from_integer).collect()).collect();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c].clone();
        for r in c + 1..n {
            let f = a[r][c].clone() / a[c][c].clone();
            for k in c..n {
                let t = a[c][k].clone() * &f;
                a[r][k] -= t;
            }
        }
    }
    d
}

fn sparse_matrix(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> IntMatrix {
    Matrix::from_triplets(rows, cols, entries.iter().map(|&(i, j, v)| (i % rows, j % cols, int(v))))
}

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (1usize..=40, 1usize..=40).prop_flat_map(|(r, c)| {
        prop::collection::vec((0..r, 0..c, -9i64..=9), 0..=(r * c).min(120)).prop_map(move |e| sparse_matrix(r, c, &e))
    })
}

#[test]
fn projective_plane_has_two_torsion() {
    let k = standard::projective_plane();
    let h = homology_at(&k.coboundary_matrix(1), &Matrix::zeros(0, k.count(2))).unwrap();
    assert_eq!(h.free_rank, 0);
    assert_eq!(h.torsion, vec![int(2)]);
}

#[test]
fn unsolvable_integer_systems_have_fractional_rational_solutions() {
    let m = Matrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), int(3)]]);
    assert!(solve_preimage(&m, &[int(1), int(3)], Ring::Int).is_none());
    let x = solve_preimage(&m, &[int(1), int(3)], Ring::Rational).unwrap();
    assert!(!x[0].is_integer());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix_strategy()) {
        let snf = smith_normal_form(&m);
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert_eq!(det(&snf.u).abs(), Rat::one());
        prop_assert_eq!(det(&snf.v).abs(), Rat::one());
        prop_assert_eq!(snf.u.mul(&snf.u_inv), Matrix::identity(m.rows()));
        prop_assert_eq!(snf.v.mul(&snf.v_inv), Matrix::identity(m.cols()));
        for (i, (r, c, v)) in snf.d.entries().into_iter().enumerate() {
            prop_assert_eq!(r, c);
            prop_assert_eq!(&v, &snf.diagonal[i]);
        }
        prop_assert!(snf.diagonal.iter().all(|x| x.is_positive()));
        for w in snf.diagonal.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn homology_is_invariant_under_permuting_the_middle(perm_seed in any::<u64>(), which in 0usize..3) {
        let k = [standard::torus(), standard::projective_plane(), standard::sphere()][which].clone();
        let d_in = k.coboundary_matrix(0);
        let d_out = k.coboundary_matrix(1);
        let n = d_in.rows();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = Matrix::from_triplets(n, n, order.iter().enumerate().map(|(i, &j)| (i, j, int(1))));
        let pt = p.transpose();
        let a = homology_at(&d_in, &d_out).unwrap();
        let b = homology_at(&p.mul(&d_in), &d_out.mul(&pt)).unwrap();
        prop_assert!(a.isomorphic(&b));
        prop_assert_eq!(a.free_rank, b.free_rank);
        prop_assert_eq!(a.torsion, b.torsion);
    }

    #[test]
    fn preimage_solutions_are_exact(m in matrix_strategy(), x in prop::collection::vec(-5i64..=5, 40)) {
        // b = M x is solvable over Z; a perturbed b may not be.
        let xs: Vec<Int> = x[..m.cols()].iter().map(|&v| int(v)).collect();
        let b = m.mul_vec(&xs);
        let sol = solve_preimage(&m, &b, Ring::Int).unwrap();
        prop_assert_eq!(mul_int_rat(&m, &sol), b.iter().cloned().map(Rat::from_integer).collect::<Vec<_>>());
        let mut b2 = b.clone();
        b2[0] += 1;
        match solve_preimage(&m, &b2, Ring::Int) {
            Some(s) => prop_assert_eq!(mul_int_rat(&m, &s), b2.iter().cloned().map(Rat::from_integer).collect::<Vec<_>>()),
            None => {
                if let Some(r) = solve_preimage(&m, &b2, Ring::Rational) {
                    prop_assert_eq!(mul_int_rat(&m, &r), b2.iter().cloned().map(Rat::from_integer).collect::<Vec<_>>());
                    prop_assert!(r.iter().any(|v| !v.is_integer()));
                }
            }
        }
    }

    #[test]
    fn class_coordinates_are_additive(c1 in prop::collection::vec(-4i64..=4, 2), c2 in prop::collection::vec(-4i64..=4, 2), b1 in prop::collection::vec(-3i64..=3, 30), which in 0usize..2) {
        let k = [standard::torus(), standard::projective_plane()][which].clone();
        let deg = if which == 0 { 1 } else { 2 };
        let d_in = k.coboundary_matrix(deg - 1);
        let d_out = if deg == 2 { Matrix::zeros(0, k.count(2)) } else { k.coboundary_matrix(deg) };
        let h = homology_at(&d_in, &d_out).unwrap();
        let cocycle = |coef: &[i64], shift: &[i64]| -> Vec<Int> {
            let mut v = vec![Int::zero(); k.count(deg)];
            for i in 0..h.generator_count() {
                for (x, g) in v.iter_mut().zip(h.generator(i)) {
                    *x += g * coef[i];
                }
            }
            let s: Vec<Int> = (0..d_in.cols()).map(|i| int(shift[i % shift.len()])).collect();
            v.iter().zip(d_in.mul_vec(&s)).map(|(a, b)| a + b).collect()
        };
        let x = cocycle(&c1, &b1);
        let y = cocycle(&c2, &b1[1..]);
        let sum: Vec<Int> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (cx, cy, cs) = (h.class_coordinates(&x).unwrap(), h.class_coordinates(&y).unwrap(), h.class_coordinates(&sum).unwrap());
        for i in 0..h.generator_count() {
            let diff = &cs[i] - &cx[i] - &cy[i];
            let order = h.order(i);
            let ok = if order.is_zero() { diff.is_zero() } else { (diff % order).is_zero() };
            prop_assert!(ok);
        }
    }
}
