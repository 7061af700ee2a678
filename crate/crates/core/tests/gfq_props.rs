mod common;

use common::{random_rows, RefField};
use grasscov::gfq::{make_field, MatrixFq};
use grasscov::grassmann::Subspace;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL_Q: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

#[test]
fn field_axioms_exhaustive() {
    for q in SMALL_Q {
        let f = make_field(q).unwrap();
        let els: Vec<u8> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a, "q={q}");
            assert_eq!(f.mul(a, 1), a, "q={q}");
            assert_eq!(f.add(a, f.neg(a)), 0, "q={q}");
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)), "q={q}");
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)), "q={q}");
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)), "q={q}");
                }
            }
        }
    }
}

#[test]
fn tables_match_polynomial_arithmetic() {
    for q in SMALL_Q.iter().copied().chain([25, 27, 32, 49, 64, 81, 121, 125, 128, 169, 243, 256]) {
        let f = make_field(q).unwrap();
        let rf = RefField::from(&f);
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), rf.add(a, b), "q={q} {a}+{b}");
                assert_eq!(f.mul(a, b), rf.mul(a, b), "q={q} {a}*{b}");
            }
        }
        // the multiplicative group is cyclic and the table generator spans it
        let orbit: std::collections::HashSet<u8> = (0..q - 1).map(|e| f.exp(e)).collect();
        assert_eq!(orbit.len() as u32, q - 1, "q={q}");
    }
}

#[test]
fn non_prime_powers_rejected() {
    for q in [0, 1, 6, 10, 12, 15, 100, 257, 1024] {
        assert!(make_field(q).is_err(), "q={q}");
    }
}

fn random_matrix(q: u32, rows: usize, cols: usize, seed: u64) -> MatrixFq {
    let f = make_field(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MatrixFq::from_rows(&f, cols, &random_rows(q, rows, cols, &mut rng)).unwrap()
}

fn qs() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_is_idempotent(q in qs(), rows in 0usize..7, cols in 1usize..8, seed in any::<u64>()) {
        let m = random_matrix(q, rows, cols, seed);
        let r = m.rref();
        prop_assert_eq!(r.matrix.rref(), r.clone());
        prop_assert_eq!(r.rank, r.pivots.len());
    }

    #[test]
    fn rank_matches_reference_and_transpose(q in qs(), rows in 1usize..7, cols in 1usize..8, seed in any::<u64>()) {
        let m = random_matrix(q, rows, cols, seed);
        let rf = RefField::from(m.field());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank(), rf.rank(&m.row_vecs()));
    }

    #[test]
    fn null_space_biduality(q in qs(), rows in 1usize..6, cols in 1usize..7, seed in any::<u64>()) {
        let m = random_matrix(q, rows, cols, seed);
        let ns = m.null_space();
        prop_assert_eq!(ns.rows(), cols - m.rank());
        prop_assert!(m.mul(&ns.transpose()).unwrap().entries().iter().all(|&x| x == 0));
        let back = ns.null_space();
        let a = Subspace::from_generators(&back);
        let b = Subspace::from_generators(&m);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn modular_dimension_law(q in qs(), n in 1usize..7, ra in 0usize..5, rb in 0usize..5, seed in any::<u64>()) {
        let f = make_field(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Subspace::from_rows(&f, n, &random_rows(q, ra, n, &mut rng)).unwrap();
        let b = Subspace::from_rows(&f, n, &random_rows(q, rb, n, &mut rng)).unwrap();
        let sum = a.sum(&b).unwrap();
        let int = a.intersection(&b).unwrap();
        prop_assert_eq!(sum.dim() + int.dim(), a.dim() + b.dim());
        prop_assert_eq!(int.dim(), a.intersection_dim(&b).unwrap());
        prop_assert!(a.contains(&int) && b.contains(&int));
        prop_assert!(sum.contains(&a) && sum.contains(&b));
    }
}
