use std::sync::Arc;

use masseykit::simplicial::*;
use masseykit::{Int, Rat};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn corpus() -> Vec<Arc<SimplicialComplex>> {
    vec![
        SimplicialComplex::point().into_arc(),
        standard::circle().into_arc(),
        standard::sphere().into_arc(),
        standard::torus().into_arc(),
        standard::projective_plane().into_arc(),
    ]
}

fn cochain(k: &Arc<SimplicialComplex>, deg: usize, coeffs: Coefficients, seed: &[i64]) -> GradedCochain {
    let v: Vec<Rat> = (0..k.count(deg))
        .map(|i| {
            let a = seed[i % seed.len()];
            let b = seed[(i * 5 + 1) % seed.len()];
            match coeffs {
                Coefficients::Int => Rat::from_integer(a.into()),
                _ => Rat::new(a.into(), (b.abs() % 3 + 1).into()),
            }
        })
        .collect();
    GradedCochain::from_vector(k, deg, coeffs, &v)
}

#[test]
fn torus_cup_pairing_is_unimodular() {
    // The cup pairing on H^1 of the torus, read in H^2 = Z, has determinant ±1.
    let k = standard::torus().into_arc();
    let h1 = cohomology(&k, 1).unwrap();
    let h2 = cohomology(&k, 2).unwrap();
    let gens: Vec<GradedCochain> = (0..2).map(|i| GradedCochain::from_int_vector(&k, 1, &h1.generator(i))).collect();
    let pairing = |a: &GradedCochain, b: &GradedCochain| -> Int {
        h2.class_coordinates(&a.cup(b).unwrap().to_int_vector().unwrap()).unwrap()[0].clone()
    };
    let m: Vec<Vec<Int>> = gens.iter().map(|a| gens.iter().map(|b| pairing(a, b)).collect()).collect();
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    assert_eq!(det.abs(), Int::from(1));
    assert!(m[0][0].is_zero() && m[1][1].is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coboundary_squares_to_zero(seed in prop::collection::vec(-5i64..=5, 1..16), which in 0usize..5, kind in 0usize..3) {
        let k = &corpus()[which];
        let coeffs = [Coefficients::Int, Coefficients::Rat, Coefficients::RatModInt][kind];
        for deg in 0..=k.dimension().max(0) as usize {
            prop_assert!(cochain(k, deg, coeffs, &seed).coboundary().coboundary().is_zero());
        }
    }

    #[test]
    fn cup_is_associative_and_leibniz(seed in prop::collection::vec(-4i64..=4, 3..16), degs in prop::collection::vec(0usize..=2, 3)) {
        let k = standard::torus().into_arc();
        let mk = |i: usize| {
            let mut s = seed.clone();
            s.rotate_left(i);
            cochain(&k, degs[i], Coefficients::Rat, &s)
        };
        let (a, b, c) = (mk(0), mk(1), mk(2));
        prop_assert_eq!(a.cup(&b).unwrap().cup(&c).unwrap(), a.cup(&b.cup(&c).unwrap()).unwrap());
        let lhs = a.cup(&b).unwrap().coboundary();
        let sign = Rat::from_integer(if degs[0] % 2 == 0 { 1.into() } else { (-1).into() });
        let rhs = a.coboundary().cup(&b).unwrap().add(&a.cup(&b.coboundary()).unwrap().scale(&sign)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cone_contraction_inverts_the_coboundary(seed in prop::collection::vec(-4i64..=4, 1..12), v in 0usize..7, deg in 0usize..2) {
        let k = standard::torus().into_arc();
        let cover = star_cover(&k).unwrap();
        let st = cover.star_of(&[v]).unwrap().clone();
        let c = cochain(&st, deg, Coefficients::Rat, &seed).coboundary();
        let eta = cone_contraction(&cover, &[v], &c, v).unwrap();
        prop_assert_eq!(eta.coboundary(), c);
    }

    #[test]
    fn pullback_commutes_with_coboundary_and_cup(seed in prop::collection::vec(-4i64..=4, 1..12), which in 0usize..3) {
        let t = standard::torus().into_arc();
        let (src, vm): (Arc<SimplicialComplex>, Vec<usize>) = match which {
            0 => (standard::circle().into_arc(), vec![0, 1, 3]),
            1 => (standard::circle().into_arc(), vec![1, 4, 6]),
            _ => (standard::polygon(4).into_arc(), vec![0, 1, 2, 3]),
        };
        let f = SimplicialMap::new(&src, &t, vm).unwrap();
        let a = cochain(&t, 0, Coefficients::Rat, &seed);
        let b = cochain(&t, 1, Coefficients::Rat, &seed[1..].iter().chain(&seed[..1]).copied().collect::<Vec<_>>());
        prop_assert_eq!(pullback(&f, &a.coboundary()).unwrap(), pullback(&f, &a).unwrap().coboundary());
        prop_assert_eq!(pullback(&f, &a.cup(&b).unwrap()).unwrap(), pullback(&f, &a).unwrap().cup(&pullback(&f, &b).unwrap()).unwrap());
    }
}
