mod common;

use common::qbinom;
use grasscov::bounds::{b_to_a, johnson1, johnson2, packing_bound_a, packing_bound_b, Bounds, Variant};
use grasscov::search::{exact_max_covering, exact_max_multiple, greedy_max_multiple, Mode, SearchConfig};
use grasscov::store::ResultsStore;
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

/// Every (q, n, k, δ, α) with n ≤ 8, q ∈ {2,3}, 1 ≤ k < n, 1 ≤ δ ≤ n−k, 2 ≤ α ≤ 5.
fn b_tuples() -> Vec<(u64, usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for q in [2u64, 3] {
        for n in 2..=8usize {
            for k in 1..n {
                for delta in 1..=n - k {
                    for alpha in 2..=5u64 {
                        out.push((q, n, k, delta, alpha));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn covering_packing_bound_is_the_translated_multiple_bound() {
    for (q, n, k, delta, alpha) in b_tuples() {
        let direct = (alpha as u128 - 1) * qbinom(n as u32, (delta + k - 1) as u32, q as u128)
            / qbinom((n - k) as u32, (delta - 1) as u32, q as u128);
        let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha).unwrap();
        assert_eq!((n2, k2, t2, l2), (n, n - k, n - k - delta + 1, alpha - 1));
        for variant in [Variant::Simple, Variant::Repeats] {
            let b = packing_bound_b(n, k, delta, alpha, q, variant);
            let a = packing_bound_a(n2, k2, t2, l2, q, variant);
            assert_eq!(b.is_ok(), a.is_ok(), "({q},{n},{k},{delta},{alpha}) {variant:?}");
            if let (Ok(b), Ok(a)) = (b, a) {
                assert_eq!(b, a);
                assert_eq!(b, big(direct), "({q},{n},{k},{delta},{alpha})");
            }
        }
    }
}

#[test]
fn covering_johnson_bounds_are_the_translated_multiple_bounds() {
    let mut checked = 0;
    for (q, n, k, delta, alpha) in b_tuples() {
        if delta < 2 {
            // the A-side recursions need t < k, i.e. δ ≥ 2
            assert!(johnson1(n, n - k, n - k - delta + 1, alpha - 1, q, &big(1)).is_err());
            continue;
        }
        let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha).unwrap();
        let qn = (q as u128).pow(n as u32) - 1;
        for inner in [1u128, 7, 32, 1000] {
            // B(n−1,k,δ;α) inner bound, scaled by (q^n−1)/(q^{n−k}−1)
            let c1 = qn * inner / ((q as u128).pow((n - k) as u32) - 1);
            assert_eq!(johnson1(n2, k2, t2, l2, q, &big(inner)).unwrap(), big(c1));
            // B(n−1,k−1,δ;α) inner bound, scaled by (q^n−1)/(q^k−1)
            let c2 = qn * inner / ((q as u128).pow(k as u32) - 1);
            if let Ok(v) = johnson2(n2, k2, t2, l2, q, &big(inner)) {
                assert_eq!(v, big(c2));
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn b_reports_agree_with_a_reports() {
    let mut b = Bounds::new(None);
    for (q, n, k, delta, alpha) in b_tuples().into_iter().filter(|t| t.1 <= 6) {
        let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha).unwrap();
        for variant in [Variant::Simple, Variant::Repeats] {
            let rb = b.report_b(n, k, delta, alpha, q, variant);
            let ra = b.report_a(n2, k2, t2, l2, q, variant);
            assert_eq!(rb.is_ok(), ra.is_ok());
            if let (Ok(rb), Ok(ra)) = (rb, ra) {
                assert_eq!(rb.best_upper, ra.best_upper, "({q},{n},{k},{delta},{alpha})");
            }
        }
    }
}

#[test]
fn repeats_bound_dominates_simple_bound() {
    let mut b = Bounds::new(None);
    for q in [2u64, 3] {
        for n in 2..=6usize {
            for k in 1..n {
                for t in 1..=k {
                    for lambda in 1..=3u64 {
                        let Ok((s, _)) = b.upper(n, k, t, lambda, q, Variant::Simple) else { continue };
                        let (r, _) = b.upper(n, k, t, lambda, q, Variant::Repeats).unwrap();
                        assert!(r >= s, "A~ bound below A bound at ({q},{n},{k},{t};{lambda})");
                    }
                }
            }
        }
    }
}

fn cfg(mode: Mode, variant: Variant) -> SearchConfig {
    SearchConfig {
        mode,
        variant,
        node_budget: 2_000_000,
        time_budget: 60.0,
        ..SearchConfig::default()
    }
}

#[test]
fn upper_bounds_dominate_found_codes() {
    let store = ResultsStore::with_literature();
    let mut b = Bounds::new(Some(&store));
    let mut plain = Bounds::new(None);
    let mut checked = 0;
    for (q, n, k, t) in [(2u32, 4usize, 2usize, 1usize), (2, 5, 2, 1), (2, 5, 3, 2), (3, 4, 2, 1), (2, 6, 3, 2), (2, 6, 4, 3)] {
        for lambda in 1..=3u64 {
            for variant in [Variant::Simple, Variant::Repeats] {
                let Ok(found) = greedy_max_multiple(n, k, t, lambda, q, &cfg(Mode::Greedy, variant)) else { continue };
                for bounds in [&mut b, &mut plain] {
                    let Ok(rep) = bounds.report_a(n, k, t, lambda, q as u64, variant) else { continue };
                    let best = rep.best_upper.unwrap();
                    assert!(best >= BigUint::from(found.size), "({q},{n},{k},{t};{lambda}) {variant:?}");
                    for e in &rep.upper {
                        assert!(e.value >= BigUint::from(found.size), "{} below a found code", e.rule);
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 40, "only {checked} comparisons");
}

#[test]
fn repeats_values_dominate_simple_values() {
    for lambda in 1..=3u64 {
        let a = exact_max_multiple(4, 2, 1, lambda, 2, &cfg(Mode::Exact, Variant::Simple)).unwrap();
        let at = exact_max_multiple(4, 2, 1, lambda, 2, &cfg(Mode::Exact, Variant::Repeats)).unwrap();
        assert!(a.optimal && at.optimal);
        assert!(at.size >= a.size);
    }
    let b = exact_max_covering(3, 1, 1, 3, 2, &cfg(Mode::Exact, Variant::Simple)).unwrap();
    let bt = exact_max_covering(3, 1, 1, 3, 2, &cfg(Mode::Exact, Variant::Repeats)).unwrap();
    assert_eq!((b.size, bt.size), (7, 14));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn packing_bound_a_formula(q in prop::sample::select(vec![2u64, 3, 4, 5]), n in 2usize..9, k_off in 1usize..8, t_off in 0usize..8, lambda in 1u64..6) {
        let k = 1 + k_off % (n - 1);
        let t = 1 + t_off % k;
        let expect = lambda as u128 * qbinom(n as u32, t as u32, q as u128) / qbinom(k as u32, t as u32, q as u128);
        prop_assert_eq!(packing_bound_a(n, k, t, lambda, q, Variant::Repeats).unwrap(), big(expect));
        let lmax = qbinom((n - t) as u32, (k - t) as u32, q as u128);
        let simple = packing_bound_a(n, k, t, lambda, q, Variant::Simple);
        prop_assert_eq!(simple.is_ok(), lambda as u128 <= lmax);
    }
}
