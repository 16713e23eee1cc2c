//! Oracle self-checks against frozen values, then the library against the
//! oracles on small instances.

mod common;

use common::*;
use num_bigint::BigUint;
use profin_core::congruence::{stab_chain_order, FiniteMatrix};
use profin_core::exactnum::{hilbert_symbol, rat_int, Place};
use profin_core::quatalg::{choose_algebra, maximal_order, nrd_mat, Mat2Quat, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn place(l: u64) -> Place {
    if l == 0 { Place::Infinite } else { Place::Prime(l) }
}

#[test]
fn hilbert_oracle_textbook_values() {
    let cases: [(i64, i64, u64, i8); 12] = [
        (-1, -1, 0, -1),
        (-1, 1, 0, 1),
        (-1, -1, 2, -1),
        (2, 2, 2, 1),
        (5, 7, 2, 1),
        (3, 7, 2, -1),
        (2, 3, 3, -1),
        (-1, -3, 3, -1),
        (3, 3, 3, -1),
        (2, 5, 5, -1),
        (3, 5, 5, -1),
        (7, 7, 7, -1),
    ];
    for (a, b, l, expected) in cases {
        assert_eq!(hilbert_brute(a, b, l), expected, "({a}, {b})_{l}");
    }
}

#[test]
fn hilbert_library_matches_oracle_small_grid() {
    for l in [0u64, 2, 3, 5, 7] {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 || b == 0 {
                    continue;
                }
                let lib = hilbert_symbol(&rat_int(a), &rat_int(b), place(l)).unwrap();
                assert_eq!(lib, hilbert_brute(a, b, l), "({a}, {b})_{l}");
            }
        }
    }
}

#[test]
fn closure_oracle_frozen() {
    let cases: [(&[M2], u64, usize); 7] = [
        (&[[1, 1, 0, 1], [1, 0, 1, 1]], 3, 24),
        (&[[0, 2, 1, 0], [1, 1, 1, 2]], 3, 8),
        (&[[2, 0, 0, 2]], 3, 2),
        (&[[1, 1, 0, 1]], 3, 3),
        (&[[1, 1, 0, 1], [1, 0, 1, 1]], 5, 120),
        (&[[0, 4, 1, 0], [2, 0, 0, 3]], 5, 8),
        (&[[1, 1, 0, 1], [4, 0, 0, 4]], 5, 10),
    ];
    for (gens, l, size) in cases {
        assert_eq!(closure_size(gens, l), size, "{gens:?} mod {l}");
        let fm: Vec<FiniteMatrix> = gens.iter().map(|g| FiniteMatrix::new(l, 2, g.to_vec())).collect();
        let (order, chain) = stab_chain_order(&fm, l);
        assert_eq!(order, BigUint::from(size));
        assert!(chain.verify());
    }
    assert_eq!(sl2_elements(3).len(), 24);
    assert_eq!(sl2_elements(5).len(), 120);
}

#[test]
fn study_closed_form_frozen() {
    let alg = choose_algebra(3).unwrap();
    let q = Quaternion::from_ints;
    let m1 = [q([1, 1, 0, 0]), q([0, 0, 1, 0]), q([0, 0, 0, 1]), q([2, 0, 0, 0])];
    let m2 = [q([1, 2, -1, 3]), q([0, 1, 1, -2]), q([3, 0, 2, 1]), q([-1, 1, 0, 4])];
    assert_eq!(nrd_closed_form(&alg, &m1), rat_int(5));
    assert_eq!(nrd_closed_form(&alg, &m2), rat_int(3130));
}

#[test]
fn nrd_mat_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3, 5, 7, 13] {
        let alg = choose_algebra(p).unwrap();
        let order = maximal_order(&alg).unwrap();
        for _ in 0..25 {
            let m: [Quaternion; 4] =
                std::array::from_fn(|_| order.element(&std::array::from_fn(|_| rng.gen_range(-4..=4))));
            let g = Mat2Quat::new(m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone());
            assert_eq!(nrd_mat(&alg, &g).unwrap(), nrd_closed_form(&alg, &m));
        }
    }
}

#[test]
fn finite_det_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [2u64, 8, 27, 125, 1331] {
        for _ in 0..20 {
            let rows: Vec<Vec<u64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..q)).collect()).collect();
            let fm = FiniteMatrix::new(q, 4, rows.concat());
            assert_eq!(fm.det(), det_leibniz(&rows, q));
        }
    }
}
