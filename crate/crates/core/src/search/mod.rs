//! Searches for large multiple codes, large covering codes and small
//! multiple covers, plus the spread construction. Covering-code questions
//! are solved on the dual side: C is an α-(n,k,δ)^c code exactly when C^⊥
//! is an (n−k−δ+1)-(n,n−k,α−1)^m code.

mod solver;
mod spread;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bounds::{b_to_a, lambda_max, Bounds, Variant};
use crate::codes::{dualize, is_covering_code, is_multiple_code, GrassCode};
use crate::error::{Error, Result};
use crate::gfq::{make_field, Field};
use crate::grassmann::{enumerate_grassmannian, gaussian_binomial, Subspace, DEFAULT_ENUMERATION_BUDGET};
use crate::store::{Quantity, StoreKey};

pub(crate) use solver::{greedy_pack, Incidence, Limits, PackSearch};
pub use spread::spread_construct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Greedy,
    Exact,
    GreedyRestarts,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "greedy" => Ok(Mode::Greedy),
            "exact" => Ok(Mode::Exact),
            "greedy-restarts" => Ok(Mode::GreedyRestarts),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub node_budget: u64,
    /// seconds
    pub time_budget: f64,
    pub seed: u64,
    pub mode: Mode,
    pub restarts: u32,
    pub variant: Variant,
    /// Largest Grassmannian the search may enumerate.
    pub enumeration_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 100_000_000,
            time_budget: 600.0,
            seed: 0,
            mode: Mode::Exact,
            restarts: 1,
            variant: Variant::Simple,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        // written to reject NaN as well
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let bad_time = !(self.time_budget > 0.0);
        if self.node_budget == 0 || bad_time || self.restarts == 0 {
            return Err(Error::InvalidArgs("budgets and restarts must be positive".into()));
        }
        Ok(())
    }

    fn limits(&self) -> Limits {
        Limits::new(self.node_budget, self.time_budget)
    }

    fn mult_cap(&self, lambda: u64) -> u32 {
        match self.variant {
            Variant::Simple => 1,
            Variant::Repeats => lambda.min(u32::MAX as u64) as u32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchTrace {
    pub mode: Mode,
    pub seed: u64,
    pub restarts: u32,
    pub variant: Variant,
    /// Candidates are visited in canonical Grassmannian order; greedy
    /// restarts after the first use seeded shuffles of it.
    pub order: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    /// The quantity this result bounds; for B-side searches `t` holds δ and
    /// `lambda` holds α.
    pub params: StoreKey,
    pub code: GrassCode,
    pub size: u64,
    /// Only exact mode that ran to completion (or met its upper bound).
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub explored: u64,
    /// Upper bound used to stop early.
    pub upper_bound: Option<u64>,
    pub trace: SearchTrace,
}

struct Problem {
    field: Field,
    n: usize,
    k: usize,
    cands: Vec<Subspace>,
    inc: Incidence,
}

/// Candidates G_q(n,k), constraints the t-subspaces inside them.
fn multiple_problem(q: u32, n: usize, k: usize, t: usize, budget: u64) -> Result<Problem> {
    if !(1 <= t && t <= k && k <= n) {
        return Err(Error::InvalidArgs(format!("need 1 <= t <= k <= n, got t={t} k={k} n={n}")));
    }
    let field = make_field(q)?;
    let cands = enumerate_grassmannian(&field, n, k, budget)?;
    let mut ids: HashMap<Subspace, u32> = HashMap::new();
    let mut cand_cons = Vec::with_capacity(cands.len());
    for c in &cands {
        let cons = c
            .subspaces(t)?
            .into_iter()
            .map(|s| {
                let next = ids.len() as u32;
                *ids.entry(s).or_insert(next)
            })
            .collect();
        cand_cons.push(cons);
    }
    let inc = Incidence::new(cand_cons, ids.len());
    Ok(Problem { field, n, k, cands, inc })
}

fn build_code(p: &Problem, counts: &[u32]) -> Result<GrassCode> {
    let mut code = GrassCode::new(&p.field, p.n, p.k)?;
    for (c, &m) in counts.iter().enumerate() {
        if m > 0 {
            code.push(p.cands[c].clone(), m)?;
        }
    }
    Ok(code)
}

fn check_lambda(n: usize, k: usize, t: usize, lambda: u64, q: u32, variant: Variant) -> Result<()> {
    if lambda == 0 {
        return Err(Error::InvalidArgs("lambda must be at least 1".into()));
    }
    // a simple code never loads a t-subspace beyond [n-t,k-t], so a larger
    // λ is allowed and simply never binds
    let _ = (n, k, t, q, variant);
    Ok(())
}

fn upper_for(n: usize, k: usize, t: usize, lambda: u64, q: u32, variant: Variant) -> Option<u64> {
    Bounds::new(None).upper(n, k, t, lambda, q as u64, variant).ok()?.0.to_u64()
}

fn trace(cfg: &SearchConfig, restarts: u32) -> SearchTrace {
    SearchTrace {
        mode: cfg.mode,
        seed: cfg.seed,
        restarts,
        variant: cfg.variant,
        order: "canonical".into(),
    }
}

fn a_key(cfg: &SearchConfig, q: u32, n: usize, k: usize, t: usize, lambda: u64) -> StoreKey {
    let qty = if cfg.variant == Variant::Simple { Quantity::A } else { Quantity::ATilde };
    StoreKey::new(qty, q, n, k, t, lambda)
}

fn run_multiple(n: usize, k: usize, t: usize, lambda: u64, q: u32, cfg: &SearchConfig, exact: bool) -> Result<SearchResult> {
    cfg.validate()?;
    check_lambda(n, k, t, lambda, q, cfg.variant)?;
    let p = multiple_problem(q, n, k, t, cfg.enumeration_budget)?;
    if exact && cfg.variant == Variant::Repeats && p.cands.len() > 1000 {
        return Err(Error::Unsupported(format!(
            "exact multiset search over {} candidates; use greedy mode",
            p.cands.len()
        )));
    }
    let cap = lambda.min(u32::MAX as u64) as u32;
    let mult_cap = cfg.mult_cap(lambda);
    let upper = upper_for(n, k, t, lambda, q, cfg.variant);
    let restarts = if cfg.mode == Mode::GreedyRestarts { cfg.restarts } else { 1 };
    let (greedy, runs, cut) =
        solver::greedy_pack_restarts(&p.inc, cap, mult_cap, cfg.seed, restarts, cfg.limits());
    let (counts, optimal, exhausted, explored) = if exact {
        let out = PackSearch::run(&p.inc, cap, mult_cap, greedy, upper.unwrap_or(u64::MAX), true, cfg.limits());
        (out.counts, out.optimal, out.exhausted, out.explored)
    } else {
        (greedy, false, cut, runs)
    };
    let code = build_code(&p, &counts)?;
    assert!(is_multiple_code(&code, t, lambda)?.valid, "search produced an invalid code");
    Ok(SearchResult {
        params: a_key(cfg, q, n, k, t, lambda),
        size: code.size(),
        code,
        optimal,
        budget_exhausted: exhausted,
        explored,
        upper_bound: upper,
        trace: trace(cfg, restarts),
    })
}

/// A maximal t-(n,k,λ)^m_q code by load-balancing greedy (with seeded
/// restarts in greedy-restarts mode).
pub fn greedy_max_multiple(n: usize, k: usize, t: usize, lambda: u64, q: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    run_multiple(n, k, t, lambda, q, cfg, false)
}

/// A_q(n,k,t;λ) (or Ã with `cfg.variant = Repeats`) by branch-and-bound.
pub fn exact_max_multiple(n: usize, k: usize, t: usize, lambda: u64, q: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    run_multiple(n, k, t, lambda, q, cfg, true)
}

/// C_q(n,k,t;μ): the fewest distinct k-subspaces covering every t-subspace
/// at least μ times.
pub fn exact_min_cover(n: usize, k: usize, t: usize, mu: u64, q: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let p = multiple_problem(q, n, k, t, cfg.enumeration_budget)?;
    let lm = lambda_max(n, k, t, q as u64)?;
    if num_bigint::BigUint::from(mu) > lm {
        return Err(Error::InvalidArgs(format!("mu={mu} exceeds [n-t,k-t]_q = {lm}; no simple cover exists")));
    }
    let key = StoreKey::new(Quantity::C, q, n, k, t, mu);
    let tr = SearchTrace {
        variant: Variant::Simple,
        ..trace(cfg, 1)
    };
    if mu == 0 {
        return Ok(SearchResult {
            params: key,
            code: GrassCode::new(&p.field, n, k)?,
            size: 0,
            optimal: true,
            budget_exhausted: false,
            explored: 0,
            upper_bound: Some(0),
            trace: tr,
        });
    }
    let demand = mu as u32;
    let greedy = solver::greedy_cover(&p.inc, demand);
    let out = solver::CoverSearch::run(&p.inc, demand, greedy, true, cfg.limits());
    let code = build_code(&p, &out.counts)?;
    if out.counts.iter().any(|&c| c > 0) {
        assert!(covers(&code, t, mu, p.inc.n_cons())?, "search produced an invalid cover");
    }
    Ok(SearchResult {
        params: key,
        size: code.size(),
        code,
        optimal: out.optimal,
        budget_exhausted: out.exhausted,
        explored: out.explored,
        upper_bound: None,
        trace: tr,
    })
}

fn run_covering(n: usize, k: usize, delta: usize, alpha: u64, q: u32, cfg: &SearchConfig, exact: bool) -> Result<SearchResult> {
    let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha)?;
    let dual = run_multiple(n2, k2, t2, l2, q, cfg, exact)?;
    let code = dualize(&dual.code);
    assert!(is_covering_code(&code, alpha, delta)?.valid, "search produced an invalid code");
    let qty = if cfg.variant == Variant::Simple { Quantity::B } else { Quantity::BTilde };
    Ok(SearchResult {
        params: StoreKey::new(qty, q, n, k, delta, alpha),
        code,
        ..dual
    })
}

/// A maximal α-(n,k,δ)^c_q code by greedy search on the dual side.
pub fn greedy_covering_code(n: usize, k: usize, delta: usize, alpha: u64, q: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    run_covering(n, k, delta, alpha, q, cfg, false)
}

/// B_q(n,k,δ;α) (or B̃) by branch-and-bound on the dual side.
pub fn exact_max_covering(n: usize, k: usize, delta: usize, alpha: u64, q: u32, cfg: &SearchConfig) -> Result<SearchResult> {
    run_covering(n, k, delta, alpha, q, cfg, true)
}

/// Whether every t-subspace of F_q^n lies in at least μ codewords.
pub fn covers(code: &GrassCode, t: usize, mu: u64, n_tspaces: usize) -> Result<bool> {
    let mut load: HashMap<Subspace, u64> = HashMap::new();
    for w in code.words() {
        for s in w.space.subspaces(t)? {
            *load.entry(s).or_default() += w.mult as u64;
        }
    }
    Ok(mu == 0 || (load.len() == n_tspaces && load.values().all(|&l| l >= mu)))
}

/// Every codeword repeated `factor` times: a code for λ becomes one for
/// factor·λ (and α−1 becomes factor·(α−1) on the covering side).
pub fn scale_code(code: &GrassCode, factor: u32) -> Result<GrassCode> {
    code.scaled(factor)
}

/// Number of k-subspaces of F_q^n, if it fits the enumeration budget.
pub fn candidate_count(n: usize, k: usize, q: u32) -> Result<u64> {
    gaussian_binomial(n, k, q as u64)?
        .to_u64()
        .ok_or_else(|| Error::Unsupported("Grassmannian too large".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::packing_bound_a;
    use crate::codes::{alpha_covering, max_multiplicity};

    fn cfg(mode: Mode) -> SearchConfig {
        SearchConfig {
            mode,
            time_budget: 60.0,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_max_multiple(4, 2, 1, 1, 2, &cfg(Mode::Greedy)).unwrap();
        assert!(g.size >= 5, "{}", g.size);
        let g = greedy_max_multiple(3, 1, 1, 1, 2, &cfg(Mode::Greedy)).unwrap();
        assert_eq!(g.size, 7);
        let g = greedy_max_multiple(4, 2, 1, 7, 2, &cfg(Mode::Greedy)).unwrap();
        assert_eq!(g.size, 35);
        assert!(!g.optimal);
    }

    #[test]
    fn exact_spread_value() {
        let r = exact_max_multiple(4, 2, 1, 1, 2, &cfg(Mode::Exact)).unwrap();
        assert_eq!(r.size, 5);
        assert!(r.optimal && !r.budget_exhausted);
        assert_eq!(r.upper_bound, Some(5));
        assert_eq!(packing_bound_a(4, 2, 1, 1, 2, Variant::Simple).unwrap(), 5u32.into());
        assert_eq!(max_multiplicity(&r.code, 1).unwrap(), 1);
    }

    #[test]
    fn exact_b_side_example() {
        let r = exact_max_covering(3, 1, 1, 3, 2, &cfg(Mode::Exact)).unwrap();
        assert_eq!(r.size, 7);
        assert!(r.optimal);
        assert!(alpha_covering(&r.code, 3).unwrap() >= 2);
        let rep = SearchConfig {
            variant: Variant::Repeats,
            ..cfg(Mode::Exact)
        };
        let r2 = exact_max_covering(3, 1, 1, 3, 2, &rep).unwrap();
        assert_eq!(r2.size, 14);
        let scaled = scale_code(&r.code, 2).unwrap();
        assert_eq!(scaled.size(), 14);
        assert!(is_covering_code(&scaled, 3, 1).unwrap().valid);
    }

    #[test]
    fn exact_beats_or_matches_greedy_and_respects_bounds() {
        for (n, k, t) in [(4usize, 2usize, 1usize), (4, 3, 2), (5, 2, 1)] {
            let lm = lambda_max(n, k, t, 2).unwrap().to_u64().unwrap().min(if n == 5 { 2 } else { 3 });
            for lambda in 1..=lm {
                let g = greedy_max_multiple(n, k, t, lambda, 2, &cfg(Mode::Greedy)).unwrap();
                let e = exact_max_multiple(n, k, t, lambda, 2, &cfg(Mode::Exact)).unwrap();
                assert!(e.size >= g.size);
                assert!(e.optimal, "{n} {k} {t} {lambda} {} {}", e.size, e.explored);
                let ub = Bounds::new(None).report_a(n, k, t, lambda, 2, Variant::Simple).unwrap();
                assert!(num_bigint::BigUint::from(e.size) <= ub.best_upper.unwrap());
            }
        }
        // partial spreads of lines in F_2^5 have at most 9 lines
        let e = exact_max_multiple(5, 2, 1, 1, 2, &cfg(Mode::Exact)).unwrap();
        assert_eq!(e.size, 9);
    }

    #[test]
    fn min_cover_examples() {
        let c = exact_min_cover(3, 1, 1, 1, 2, &cfg(Mode::Exact)).unwrap();
        assert_eq!(c.size, 7);
        let c = exact_min_cover(4, 2, 1, 1, 2, &cfg(Mode::Exact)).unwrap();
        assert!(c.optimal);
        assert_eq!(c.size, 5);
        let a = exact_max_multiple(4, 2, 1, 1, 2, &cfg(Mode::Exact)).unwrap();
        assert!(a.size <= c.size);
        let z = exact_min_cover(4, 2, 1, 0, 2, &cfg(Mode::Exact)).unwrap();
        assert_eq!(z.size, 0);
        assert!(exact_min_cover(4, 2, 1, 8, 2, &cfg(Mode::Exact)).is_err());
    }

    #[test]
    fn restarts_are_deterministic() {
        let c = SearchConfig {
            mode: Mode::GreedyRestarts,
            restarts: 5,
            seed: 42,
            ..cfg(Mode::GreedyRestarts)
        };
        let a = greedy_covering_code(5, 2, 2, 3, 2, &c).unwrap();
        let b = greedy_covering_code(5, 2, 2, 3, 2, &c).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn q4_scalar_ceiling() {
        let r = exact_max_covering(3, 1, 1, 3, 4, &cfg(Mode::Exact)).unwrap();
        assert_eq!(r.size, 21);
        let rep = SearchConfig {
            variant: Variant::Repeats,
            ..cfg(Mode::Exact)
        };
        let r = exact_max_covering(3, 1, 1, 3, 4, &rep).unwrap();
        assert_eq!(r.size, 42);
        assert!(r.optimal);
        let g = greedy_covering_code(3, 1, 1, 3, 4, &cfg(Mode::Greedy)).unwrap();
        assert_eq!(g.size, 21);
    }

    #[test]
    fn budget_flag() {
        let c = SearchConfig {
            node_budget: 3,
            ..cfg(Mode::Exact)
        };
        let r = exact_max_multiple(5, 3, 2, 2, 2, &c).unwrap();
        assert!(r.budget_exhausted);
        assert!(!r.optimal);
        assert!(r.size > 0);
    }
}
