use std::collections::BTreeMap;

use masseykit::abelian::Matrix;
use masseykit::doldkan::*;
use masseykit::{Int, IntMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(x: i64) -> Int {
    Int::from(x)
}

/// Surjections `[n] -> [1]` indexed by the first position sent to 1.
fn threshold(n: usize, i: usize) -> Vec<usize> {
    (0..=n).map(|m| usize::from(m >= i)).collect()
}

#[test]
fn delooping_face_table() {
    // Level n of dk(Z[1]) is Z^n; A_i is the copy on the surjection with
    // threshold i. d_0 kills A_1, d_n kills A_n and inner faces send A_i to
    // A_(i-1) when i > j and to A_i otherwise.
    let c = BoundedChainComplex::shifted(&[int(0)], 1).unwrap();
    let s = dk(&c, 4).unwrap();
    for n in 1..=4 {
        assert_eq!(s.generators(n), n);
        let slot = |level: usize, i: usize| s.summand(level, &threshold(level, i)).unwrap().offset;
        for j in 0..=n {
            let face = &s.faces[n][j];
            for i in 1..=n {
                let image = face.column(slot(n, i));
                let expected = if j == 0 {
                    (i > 1).then(|| i - 1)
                } else if j == n {
                    (i < n).then_some(i)
                } else if i > j {
                    Some(i - 1)
                } else {
                    Some(i)
                };
                let mut want = vec![int(0); n - 1];
                if let Some(t) = expected {
                    want[slot(n - 1, t)] = int(1);
                }
                assert_eq!(image, want, "d{j} on A{i} at level {n}");
            }
        }
    }
}

/// Invariant factors of `⊕ Z/o`, via prime-power parts.
fn invariant_factors(orders: &[u64]) -> Vec<Int> {
    let mut powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders {
        let mut rest = o;
        let mut p = 2;
        while rest > 1 {
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                q *= p;
            }
            if q > 1 {
                powers.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = powers.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for list in powers.values_mut() {
        list.sort_unstable();
        for (slot, q) in factors.iter_mut().rev().zip(list.iter().rev()) {
            *slot *= q;
        }
    }
    factors.into_iter().map(|f| int(f as i64)).collect()
}

#[derive(Default, Clone)]
struct Expected {
    free: usize,
    torsion: Vec<u64>,
}

/// A random complex built from elementary pieces with known homology, then
/// conjugated by unimodular changes of basis on free generators.
fn piecewise(rng: &mut ChaCha8Rng, top: usize) -> (BoundedChainComplex, Vec<Expected>) {
    let mut orders: Vec<Vec<Int>> = vec![Vec::new(); top + 1];
    let mut expected = vec![Expected::default(); top + 1];
    let mut arrows = Vec::new();
    for _ in 0..rng.gen_range(2..7) {
        let k = rng.gen_range(0..=top);
        match rng.gen_range(0..4) {
            0 if k >= 1 => {
                // Z -m-> Z contributes Z/m below.
                let m: i64 = rng.gen_range(1..=5);
                orders[k].push(int(0));
                orders[k - 1].push(int(0));
                arrows.push((k, orders[k].len() - 1, orders[k - 1].len() - 1, int(if rng.gen_bool(0.5) { m } else { -m })));
                if m > 1 {
                    expected[k - 1].torsion.push(m as u64);
                }
            }
            1 if k >= 1 => {
                // Z -> Z/t onto: homology Z (the kernel tZ) on top.
                let t: i64 = rng.gen_range(2..=4);
                orders[k].push(int(0));
                orders[k - 1].push(int(t));
                arrows.push((k, orders[k].len() - 1, orders[k - 1].len() - 1, int(1)));
                expected[k].free += 1;
            }
            2 => {
                let t: i64 = rng.gen_range(2..=6);
                orders[k].push(int(t));
                expected[k].torsion.push(t as u64);
            }
            _ => {
                orders[k].push(int(0));
                expected[k].free += 1;
            }
        }
    }
    let mut d: Vec<IntMatrix> = (1..=top).map(|k| Matrix::zeros(orders[k - 1].len(), orders[k].len())).collect();
    for (k, col, row, m) in arrows {
        d[k - 1].set(row, col, m);
    }
    // Elementary changes of basis on pairs of free generators.
    for k in 0..=top {
        let free: Vec<usize> = (0..orders[k].len()).filter(|&i| orders[k][i] == int(0)).collect();
        if free.len() < 2 {
            continue;
        }
        let (i, j) = (free[0], free[free.len() - 1]);
        let c = int(rng.gen_range(-3..=3));
        let n = orders[k].len();
        let mut g = Matrix::<Int>::identity(n);
        g.set(i, j, c.clone());
        let mut g_inv = Matrix::<Int>::identity(n);
        g_inv.set(i, j, -c);
        if k >= 1 {
            d[k - 1] = d[k - 1].mul(&g_inv);
        }
        if k < top {
            d[k] = g.mul(&d[k]);
        }
    }
    (BoundedChainComplex::new(orders, d).unwrap(), expected)
}

#[test]
fn homotopy_groups_of_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let top = trial % 4;
        let (c, expected) = piecewise(&mut rng, top);
        let s = dk(&c, top + 2).unwrap();
        let pi = homotopy_groups(&s).unwrap();
        assert_eq!(pi.len(), top + 2);
        for (n, group) in pi.iter().enumerate() {
            let e = expected.get(n).cloned().unwrap_or_default();
            assert_eq!(group.free_rank, e.free, "trial {trial} degree {n}");
            assert_eq!(group.torsion, invariant_factors(&e.torsion), "trial {trial} degree {n}");
            assert_eq!(group.rational_rank + group.circle_rank, 0);
            assert_eq!(group, &c.homology(n).unwrap());
        }
        assert!(counit_check(&s).unwrap().holds(), "trial {trial}");
    }
}

#[test]
fn moore_of_dk_is_the_complex() {
    let identity = Matrix::from_rows(vec![vec![int(1)]]);
    let complexes = [
        BoundedChainComplex::shifted(&[int(0)], 1).unwrap(),
        BoundedChainComplex::shifted(&[int(0)], 2).unwrap(),
        BoundedChainComplex::free(&[1, 1], vec![identity]).unwrap(),
    ];
    for c in &complexes {
        let s = dk(c, c.top + 2).unwrap();
        assert!(counit_check(&s).unwrap().holds());
        let n = moore_normalize(&s).unwrap();
        for k in 0..=s.max_level {
            assert_eq!(n.group_type(k).unwrap(), c.group_type(k).unwrap(), "degree {k}");
        }
    }
}

#[test]
fn labelled_simplices_of_random_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (c, _) = piecewise(&mut rng, 2);
        let s = dk(&c, 2).unwrap();
        let x: Vec<Int> = (0..s.generators(2)).map(|_| int(rng.gen_range(-9..10))).collect();
        assert!(label_simplex_check(&s, &x).unwrap().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identities_hold_on_random_complexes(seed in any::<u64>(), top in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = BoundedChainComplex::random(&mut rng, top, 5);
        let s = dk(&c, top + 2).unwrap();
        prop_assert!(s.verify_identities().is_ok());
        prop_assert!(counit_check(&s).unwrap().holds());
    }

    #[test]
    fn level_rank_of_shifted_groups(n in 1usize..6, rank in 1usize..3) {
        let c = BoundedChainComplex::shifted(&vec![int(0); rank], 1).unwrap();
        let s = dk(&c, n).unwrap();
        prop_assert_eq!(s.generators(n), n * rank);
    }
}
