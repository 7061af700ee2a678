mod common;

use common::RefField;
use grasscov::bounds::{Bounds, Variant};
use grasscov::codes::{is_covering_code, is_multiple_code};
use grasscov::gfq::make_field;
use grasscov::search::{
    covers, exact_max_covering, exact_max_multiple, exact_min_cover, greedy_covering_code, greedy_max_multiple,
    spread_construct, Mode, SearchConfig,
};
use num_bigint::BigUint;
use std::collections::HashMap;

fn cfg(mode: Mode, variant: Variant, seed: u64, restarts: u32) -> SearchConfig {
    SearchConfig {
        mode,
        variant,
        seed,
        restarts,
        node_budget: 5_000_000,
        time_budget: 60.0,
        ..SearchConfig::default()
    }
}

const MULTIPLE_CASES: [(u32, usize, usize, usize, u64); 9] = [
    (2, 4, 2, 1, 1),
    (2, 4, 2, 1, 2),
    (2, 4, 2, 1, 4),
    (2, 4, 3, 2, 1),
    (2, 5, 2, 1, 1),
    (2, 5, 3, 2, 1),
    (3, 3, 2, 1, 2),
    (3, 4, 2, 1, 1),
    (4, 3, 2, 1, 1),
];

#[test]
fn results_revalidate_and_exact_beats_greedy() {
    let mut bounds = Bounds::new(None);
    for (q, n, k, t, lambda) in MULTIPLE_CASES {
        for variant in [Variant::Simple, Variant::Repeats] {
            let g = greedy_max_multiple(n, k, t, lambda, q, &cfg(Mode::Greedy, variant, 0, 1)).unwrap();
            let e = exact_max_multiple(n, k, t, lambda, q, &cfg(Mode::Exact, variant, 0, 1)).unwrap();
            for r in [&g, &e] {
                assert!(is_multiple_code(&r.code, t, lambda).unwrap().valid, "({q},{n},{k},{t};{lambda})");
                assert_eq!(r.code.size(), r.size);
                if variant == Variant::Simple {
                    assert!(r.code.is_simple());
                }
            }
            assert!(!g.optimal);
            assert!(e.size >= g.size, "({q},{n},{k},{t};{lambda}) {variant:?}");
            let best = bounds.report_a(n, k, t, lambda, q as u64, variant).unwrap().best_upper.unwrap();
            assert!(BigUint::from(e.size) <= best);
            if e.optimal && BigUint::from(e.size) == best {
                // meeting the bound with equality: every t-subspace is loaded exactly λ times
                let n_t = grasscov::search::candidate_count(n, t, q).unwrap() as usize;
                let tight = packing_is_tight(n, k, t, q, e.size, lambda);
                assert_eq!(covers(&e.code, t, lambda, n_t).unwrap(), tight);
            }
        }
    }
}

/// Whether λ[n,t]/[k,t] is an integer equal to `size`.
fn packing_is_tight(n: usize, k: usize, t: usize, q: u32, size: u64, lambda: u64) -> bool {
    let nt = common::qbinom(n as u32, t as u32, q as u128);
    let kt = common::qbinom(k as u32, t as u32, q as u128);
    (lambda as u128 * nt).is_multiple_of(kt) && lambda as u128 * nt / kt == size as u128
}

#[test]
fn covering_searches_revalidate() {
    for (q, n, k, delta, alpha) in [(2u32, 3usize, 1usize, 1usize, 3u64), (2, 4, 2, 1, 2), (2, 4, 2, 2, 3), (2, 4, 1, 2, 2), (3, 3, 1, 1, 2)] {
        for variant in [Variant::Simple, Variant::Repeats] {
            let g = greedy_covering_code(n, k, delta, alpha, q, &cfg(Mode::Greedy, variant, 0, 1)).unwrap();
            let e = exact_max_covering(n, k, delta, alpha, q, &cfg(Mode::Exact, variant, 0, 1)).unwrap();
            for r in [&g, &e] {
                assert!(is_covering_code(&r.code, alpha, delta).unwrap().valid);
                assert_eq!(r.code.k(), k);
            }
            assert!(e.size >= g.size);
        }
    }
}

#[test]
fn min_cover_covers() {
    for (q, n, k, t, mu) in [(2u32, 4usize, 2usize, 1usize, 1u64), (2, 4, 2, 1, 2), (2, 4, 3, 2, 1), (3, 3, 2, 1, 1)] {
        let r = exact_min_cover(n, k, t, mu, q, &cfg(Mode::Exact, Variant::Simple, 0, 1)).unwrap();
        let n_t = grasscov::search::candidate_count(n, t, q).unwrap() as usize;
        assert!(covers(&r.code, t, mu, n_t).unwrap());
        assert!(r.optimal);
    }
}

#[test]
fn spreads_partition_the_nonzero_vectors() {
    for (n, k, q) in [(4usize, 2usize, 2u32), (6, 2, 2), (6, 3, 2), (4, 2, 3), (6, 2, 3), (4, 2, 4), (3, 1, 5), (8, 4, 2)] {
        let code = spread_construct(n, k, q).unwrap();
        let f = make_field(q).unwrap();
        let rf = RefField::from(&f);
        let expected = ((q as u64).pow(n as u32) - 1) / ((q as u64).pow(k as u32) - 1);
        assert_eq!(code.size(), expected, "({n},{k},{q})");
        let ws = code.words();
        if n <= 6 {
            for i in 0..ws.len() {
                for j in i + 1..ws.len() {
                    assert_eq!(ws[i].space.intersection_dim(&ws[j].space).unwrap(), 0);
                }
            }
        }
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        for w in ws {
            for v in rf.span(&w.space.basis().row_vecs(), n) {
                if v.iter().any(|&x| x != 0) {
                    *seen.entry(v).or_default() += 1;
                }
            }
        }
        assert_eq!(seen.len() as u64, (q as u64).pow(n as u32) - 1);
        assert!(seen.values().all(|&c| c == 1));
    }
    assert!(spread_construct(5, 2, 2).is_err());
}

#[test]
fn restarts_are_deterministic() {
    for (q, n, k, t, lambda) in [(2u32, 5usize, 2usize, 1usize, 1u64), (2, 5, 3, 2, 2), (3, 4, 2, 1, 1)] {
        let c = cfg(Mode::GreedyRestarts, Variant::Simple, 42, 8);
        let a = greedy_max_multiple(n, k, t, lambda, q, &c).unwrap();
        let b = greedy_max_multiple(n, k, t, lambda, q, &c).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        // restarts only ever add candidates to compare, so never do worse than one pass
        let single = greedy_max_multiple(n, k, t, lambda, q, &cfg(Mode::Greedy, Variant::Simple, 42, 1)).unwrap();
        assert!(a.size >= single.size);
    }
}
