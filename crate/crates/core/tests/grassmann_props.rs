mod common;

use common::{qbinom, random_rows, RefField};
use grasscov::gfq::{make_field, MatrixFq};
use grasscov::grassmann::{
    enumerate_grassmannian, gaussian_binomial, grassmann_distance, GrassmannIter, Subspace,
    DEFAULT_ENUMERATION_BUDGET,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

#[test]
fn enumeration_is_complete_distinct_and_sorted() {
    for (q, n, k) in [(2, 4, 2), (2, 5, 2), (2, 5, 3), (3, 4, 2), (4, 3, 1), (2, 6, 3), (5, 3, 2)] {
        let f = make_field(q).unwrap();
        let all = enumerate_grassmannian(&f, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(all.len() as u128, qbinom(n as u32, k as u32, q as u128), "({q},{n},{k})");
        let set: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            assert_eq!(s.dim(), k);
        }
        // lexicographic in (pivot set, RREF entries)
        for w in all.windows(2) {
            let key = |s: &Subspace| (s.pivots().to_vec(), s.basis().entries().to_vec());
            assert!(key(&w[0]) < key(&w[1]));
        }
    }
}

#[test]
fn gaussian_binomial_matches_product_formula() {
    for q in [2u64, 3, 4, 5, 7] {
        for n in 0..10usize {
            for k in 0..=n {
                assert_eq!(
                    gaussian_binomial(n, k, q).unwrap(),
                    BigUint::from(qbinom(n as u32, k as u32, q as u128)),
                    "[{n},{k}]_{q}"
                );
            }
        }
    }
}

#[test]
fn lazy_iterator_agrees_with_enumeration() {
    let f = make_field(3).unwrap();
    let eager = enumerate_grassmannian(&f, 4, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let lazy: Vec<Subspace> = GrassmannIter::new(&f, 4, 2).unwrap().collect();
    assert_eq!(eager, lazy);
    assert!(enumerate_grassmannian(&f, 10, 5, 1000).is_err());
}

#[test]
fn containment_counts() {
    for (q, n, k, t) in [(2u32, 4usize, 2usize, 1usize), (2, 5, 3, 2), (3, 3, 2, 1)] {
        let f = make_field(q).unwrap();
        let rf = RefField::from(&f);
        let ks = enumerate_grassmannian(&f, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let expected = qbinom((n - t) as u32, (k - t) as u32, q as u128) as usize;
        // every t-subspace, not just one, has the same count
        for ts in enumerate_grassmannian(&f, n, t, DEFAULT_ENUMERATION_BUDGET).unwrap() {
            let count = ks
                .iter()
                .filter(|x| {
                    let rows: Vec<_> = x.basis().row_vecs().into_iter().chain(ts.basis().row_vecs()).collect();
                    rf.rank(&rows) == k
                })
                .count();
            assert_eq!(count, expected, "({q},{n},{k},{t})");
        }
    }
}

#[test]
fn distance_preserved_by_complement_on_g2_4_2() {
    let f = make_field(2).unwrap();
    let all = enumerate_grassmannian(&f, 4, 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
    let comps: Vec<Subspace> = all.iter().map(|s| s.orthogonal_complement()).collect();
    for i in 0..all.len() {
        for j in 0..all.len() {
            assert_eq!(
                grassmann_distance(&all[i], &all[j]).unwrap(),
                grassmann_distance(&comps[i], &comps[j]).unwrap()
            );
        }
    }
}

fn random_space(f: &grasscov::gfq::Field, n: usize, rng: &mut impl Rng) -> Subspace {
    let rows = rng.gen_range(0..=n);
    Subspace::from_rows(f, n, &random_rows(f.order(), rows, n, rng)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_basis_independent(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..7, seed in any::<u64>()) {
        let f = make_field(q).unwrap();
        let rf = RefField::from(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_space(&f, n, &mut rng);
        let k = x.dim();
        // a random invertible k×k change of basis
        let a = loop {
            let rows = random_rows(q, k, k, &mut rng);
            if k == 0 || rf.rank(&rows) == k {
                break MatrixFq::from_rows(&f, k, &rows).unwrap();
            }
        };
        let y = Subspace::from_generators(&a.mul(x.basis()).unwrap());
        prop_assert_eq!(&x, &y);
        // extra dependent rows do not change it either
        let mut rows = x.basis().row_vecs();
        rows.extend(y.basis().row_vecs());
        prop_assert_eq!(&x, &Subspace::from_rows(&f, n, &rows).unwrap());
    }

    #[test]
    fn complement_of_sum_is_intersection_of_complements(q in prop::sample::select(vec![2u32, 3, 4]), n in 2usize..7, seed in any::<u64>()) {
        let f = make_field(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vs: Vec<Subspace> = (0..3).map(|_| random_space(&f, n, &mut rng)).collect();
        let sum = vs[0].sum(&vs[1]).unwrap().sum(&vs[2]).unwrap();
        let c: Vec<Subspace> = vs.iter().map(|v| v.orthogonal_complement()).collect();
        let int = c[0].intersection(&c[1]).unwrap().intersection(&c[2]).unwrap();
        prop_assert_eq!(sum.orthogonal_complement(), int);
    }

    #[test]
    fn complement_is_orthogonal_involution(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..7, seed in any::<u64>()) {
        let f = make_field(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_space(&f, n, &mut rng);
        let c = x.orthogonal_complement();
        prop_assert_eq!(c.dim(), n - x.dim());
        for u in x.basis().row_vecs() {
            for v in c.basis().row_vecs() {
                prop_assert_eq!(f.dot(&u, &v), 0);
            }
        }
        prop_assert_eq!(c.orthogonal_complement(), x);
    }
}
