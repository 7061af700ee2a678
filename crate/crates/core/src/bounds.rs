//! Upper and lower bounds on A_q(n,k,t;λ), B_q(n,k,δ;α) and their
//! repeated-codeword versions, plus checks of the identities that tie them to
//! the covering number C_q(n,k,t;λ).
//!
//! B-side questions are answered on the A side through orthogonal
//! complements: B_q(n,k,δ;α) = A_q(n, n−k, n−k−δ+1; α−1).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::gaussian_binomial;
use crate::store::{Provenance, Quantity, ResultsStore, StoreKey};

/// Whether codes may repeat codewords (Ã, B̃) or not (A, B).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Simple,
    Repeats,
}

pub(crate) mod big {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::Serializer;

    /// JSON number when it fits in u64, decimal string otherwise.
    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(b) => super::serialize(b, s),
                None => s.serialize_none(),
            }
        }
    }
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::NotAPrimePower(q as u32));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    if r != 1 {
        return Err(Error::NotAPrimePower(q.min(u32::MAX as u64) as u32));
    }
    Ok(())
}

fn qb(n: usize, k: usize, q: u64) -> BigUint {
    gaussian_binomial(n, k, q).expect("validated k <= n, q >= 2")
}

fn pm1(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32) - 1u32
}

/// `[n−t, k−t]_q`: how many k-subspaces contain a fixed t-subspace, hence
/// the largest λ worth considering for simple codes.
pub fn lambda_max(n: usize, k: usize, t: usize, q: u64) -> Result<BigUint> {
    if t > k || k > n {
        return Err(Error::InvalidArgs(format!("need t <= k <= n, got t={t} k={k} n={n}")));
    }
    check_q(q)?;
    Ok(qb(n - t, k - t, q))
}

fn check_a(n: usize, k: usize, t: usize, lambda: u64, q: u64) -> Result<()> {
    check_q(q)?;
    if !(1 <= t && t <= k && k < n) {
        return Err(Error::InvalidArgs(format!("need 1 <= t <= k < n, got t={t} k={k} n={n}")));
    }
    if lambda == 0 {
        return Err(Error::InvalidArgs("lambda must be at least 1".into()));
    }
    Ok(())
}

fn check_simple_lambda(n: usize, k: usize, t: usize, lambda: u64, q: u64) -> Result<()> {
    let lm = qb(n - t, k - t, q);
    if BigUint::from(lambda) > lm {
        return Err(Error::InvalidArgs(format!(
            "lambda={lambda} exceeds [n-t,k-t]_q = {lm}; no simple code needs more"
        )));
    }
    Ok(())
}

/// The A-side parameters (n, n−k, n−k−δ+1, α−1) of a B-side question.
pub fn b_to_a(n: usize, k: usize, delta: usize, alpha: u64) -> Result<(usize, usize, usize, u64)> {
    if !(1 <= k && k < n) || !(1 <= delta && delta <= n - k) || alpha < 2 {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= k < n, 1 <= delta <= n-k, alpha >= 2; got n={n} k={k} delta={delta} alpha={alpha}"
        )));
    }
    Ok((n, n - k, n - k - delta + 1, alpha - 1))
}

/// ⌊λ [n,t]_q / [k,t]_q⌋.
pub fn packing_bound_a(n: usize, k: usize, t: usize, lambda: u64, q: u64, variant: Variant) -> Result<BigUint> {
    check_a(n, k, t, lambda, q)?;
    if variant == Variant::Simple {
        check_simple_lambda(n, k, t, lambda, q)?;
    }
    Ok(BigUint::from(lambda) * qb(n, t, q) / qb(k, t, q))
}

/// ⌊(α−1) [n, δ+k−1]_q / [n−k, δ−1]_q⌋.
pub fn packing_bound_b(n: usize, k: usize, delta: usize, alpha: u64, q: u64, variant: Variant) -> Result<BigUint> {
    let (_, k2, t2, l2) = b_to_a(n, k, delta, alpha)?;
    check_q(q)?;
    if variant == Variant::Simple {
        check_simple_lambda(n, k2, t2, l2, q)?;
    }
    Ok(BigUint::from(alpha - 1) * qb(n, delta + k - 1, q) / qb(n - k, delta - 1, q))
}

fn check_johnson(n: usize, k: usize, t: usize, lambda: u64, q: u64) -> Result<()> {
    check_a(n, k, t, lambda, q)?;
    if t == k {
        return Err(Error::InvalidArgs("the Johnson bounds need t < k".into()));
    }
    Ok(())
}

/// ⌊(q^n−1)/(q^k−1) · inner⌋ with inner a bound on A_q(n−1,k−1,t−1;λ).
pub fn johnson1(n: usize, k: usize, t: usize, lambda: u64, q: u64, inner: &BigUint) -> Result<BigUint> {
    check_johnson(n, k, t, lambda, q)?;
    Ok(pm1(q, n) * inner / pm1(q, k))
}

/// ⌊(q^n−1)/(q^{n−k}−1) · inner⌋ with inner a bound on A_q(n−1,k,t;λ).
pub fn johnson2(n: usize, k: usize, t: usize, lambda: u64, q: u64, inner: &BigUint) -> Result<BigUint> {
    check_johnson(n, k, t, lambda, q)?;
    check_simple_lambda(n - 1, k, t, lambda, q)?;
    Ok(pm1(q, n) * inner / pm1(q, n - k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    #[serde(with = "big")]
    pub value: BigUint,
    pub rule: String,
    /// Recursion chain, outermost step first.
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// For B-side reports `t` holds δ and `lambda` holds α.
    pub params: StoreKey,
    pub variant: Variant,
    pub upper: Vec<BoundEntry>,
    pub lower: Vec<BoundEntry>,
    #[serde(with = "big::opt")]
    pub best_upper: Option<BigUint>,
    #[serde(with = "big::opt")]
    pub best_lower: Option<BigUint>,
}

impl BoundReport {
    pub fn upper_rule(&self, rule: &str) -> Option<&BigUint> {
        self.upper.iter().find(|e| e.rule == rule).map(|e| &e.value)
    }
}

type MemoKey = (u64, usize, usize, usize, u64, Variant);

/// Bound evaluator with a memo table; exact values from the store take
/// precedence over the recursion.
pub struct Bounds<'a> {
    store: Option<&'a ResultsStore>,
    memo: HashMap<MemoKey, (BigUint, Vec<String>)>,
}

fn name(variant: Variant, q: u64, n: usize, k: usize, t: usize, lambda: u64) -> String {
    let a = if variant == Variant::Simple { "A" } else { "A~" };
    format!("{a}_{q}({n},{k},{t};{lambda})")
}

fn a_key(variant: Variant, q: u64, n: usize, k: usize, t: usize, lambda: u64) -> StoreKey {
    let qty = if variant == Variant::Simple { Quantity::A } else { Quantity::ATilde };
    StoreKey::new(qty, q as u32, n, k, t, lambda)
}

/// The B-side key naming the same number as an A-side key.
fn dual_b_key(key: &StoreKey) -> Option<StoreKey> {
    let qty = match key.quantity {
        Quantity::A => Quantity::B,
        Quantity::ATilde => Quantity::BTilde,
        _ => return None,
    };
    // A(n,k,t;λ) = B(n, n−k, k−t+1; λ+1)
    Some(StoreKey::new(qty, key.q, key.n, key.n - key.k, key.k - key.t + 1, key.lambda + 1))
}

fn describe(p: &Provenance) -> String {
    match p {
        Provenance::Literature { citation } => format!("literature: {citation}"),
        Provenance::Formula { rule } => format!("formula: {rule}"),
        Provenance::SearchCertificate { mode, seed, explored } => {
            format!("search certificate: {mode}, seed {seed}, {explored} nodes")
        }
    }
}

impl<'a> Bounds<'a> {
    pub fn new(store: Option<&'a ResultsStore>) -> Self {
        Bounds {
            store,
            memo: HashMap::new(),
        }
    }

    fn store_bound(&self, key: &StoreKey, lower: bool) -> Option<(u64, String)> {
        let store = self.store?;
        [Some(*key), dual_b_key(key)]
            .into_iter()
            .flatten()
            .filter_map(|k| {
                let e = store.get(&k)?;
                let b = if lower { e.lower.as_ref()? } else { e.upper.as_ref()? };
                Some((b.value, format!("{k} {} {} from store ({})", if lower { ">=" } else { "<=" }, b.value, describe(&b.provenance))))
            })
            .reduce(|a, b| if (lower && b.0 > a.0) || (!lower && b.0 < a.0) { b } else { a })
    }

    fn store_exact(&self, key: &StoreKey) -> Option<(u64, String)> {
        let lo = self.store_bound(key, true)?;
        let hi = self.store_bound(key, false)?;
        (lo.0 == hi.0).then(|| (lo.0, format!("{key} = {} from store ({})", lo.0, hi.1.rsplit_once('(').map_or("", |x| x.1).trim_end_matches(')'))))
    }

    /// Best recursive upper bound on A_q(n,k,t;λ) (or Ã), for 0 <= t <= k <= n.
    pub fn upper(&mut self, n: usize, k: usize, t: usize, lambda: u64, q: u64, variant: Variant) -> Result<(BigUint, Vec<String>)> {
        check_q(q)?;
        if t > k || k > n || lambda == 0 {
            return Err(Error::InvalidArgs(format!("need 0 <= t <= k <= n and lambda >= 1, got ({n},{k},{t};{lambda})")));
        }
        let mk = (q, n, k, t, lambda, variant);
        if let Some(v) = self.memo.get(&mk) {
            return Ok(v.clone());
        }
        let nm = name(variant, q, n, k, t, lambda);
        let nk = qb(n, k, q);
        let lam = BigUint::from(lambda);
        let simple = variant == Variant::Simple;
        let base = if t == 0 {
            Some(if simple {
                (lam.clone().min(nk.clone()), format!("{nm}: t=0, every codeword counts, so min(lambda, [n,k])"))
            } else {
                (lam.clone(), format!("{nm}: t=0, every codeword counts, so lambda"))
            })
        } else if k == t {
            Some(if simple {
                (nk.clone(), format!("{nm}: t=k, all of G_q(n,k)"))
            } else {
                (&lam * &nk, format!("{nm}: t=k, each k-subspace lambda times"))
            })
        } else if k == n {
            Some(if simple {
                (BigUint::one(), format!("{nm}: k=n, one codeword"))
            } else {
                (lam.clone(), format!("{nm}: k=n, lambda copies of F_q^n"))
            })
        } else if simple && lam >= qb(n - t, k - t, q) {
            Some((nk.clone(), format!("{nm}: lambda >= [n-t,k-t], all of G_q(n,k)")))
        } else {
            None
        };
        if let Some((v, line)) = base {
            let out = (v, vec![line]);
            self.memo.insert(mk, out.clone());
            return Ok(out);
        }
        if let Some((v, line)) = self.store_exact(&a_key(variant, q, n, k, t, lambda)) {
            let out = (BigUint::from(v), vec![line]);
            self.memo.insert(mk, out.clone());
            return Ok(out);
        }
        let mut cands: Vec<(BigUint, Vec<String>)> = Vec::new();
        let pack = &lam * qb(n, t, q) / qb(k, t, q);
        cands.push((pack.clone(), vec![format!("{nm} <= {pack} by packing")]));
        let (i1, tr1) = self.upper(n - 1, k - 1, t - 1, lambda, q, variant)?;
        let j1 = pm1(q, n) * &i1 / pm1(q, k);
        let mut tr = vec![format!("{nm} <= floor(({q}^{n}-1)/({q}^{k}-1) * {i1}) = {j1} by johnson1")];
        tr.extend(tr1);
        cands.push((j1, tr));
        if !simple || lam <= qb(n - 1 - t, k - t, q) {
            let (i2, tr2) = self.upper(n - 1, k, t, lambda, q, variant)?;
            let j2 = pm1(q, n) * &i2 / pm1(q, n - k);
            let mut tr = vec![format!("{nm} <= floor(({q}^{n}-1)/({q}^{}-1) * {i2}) = {j2} by johnson2", n - k)];
            tr.extend(tr2);
            cands.push((j2, tr));
        }
        if let Some((v, line)) = self.store_bound(&a_key(variant, q, n, k, t, lambda), false) {
            cands.push((BigUint::from(v), vec![line]));
        }
        if simple {
            cands.push((nk.clone(), vec![format!("{nm} <= [n,k] = {nk}")]));
        }
        let best = cands.into_iter().min_by(|a, b| a.0.cmp(&b.0)).unwrap();
        self.memo.insert(mk, best.clone());
        Ok(best)
    }

    fn known_lower(&self, n: usize, k: usize, t: usize, lambda: u64, q: u64, variant: Variant) -> (BigUint, String) {
        let nm = name(variant, q, n, k, t, lambda);
        let mut best = (BigUint::one(), format!("{nm} >= 1"));
        let mut keys = vec![a_key(Variant::Simple, q, n, k, t, lambda)];
        if variant == Variant::Repeats {
            keys.push(a_key(Variant::Repeats, q, n, k, t, lambda));
        }
        for key in keys {
            if let Some((v, line)) = self.store_bound(&key, true) {
                if BigUint::from(v) > best.0 {
                    best = (BigUint::from(v), line);
                }
            }
        }
        let lm = qb(n - t, k - t, q);
        let full = BigUint::from(lambda) / &lm * qb(n, k, q);
        if full > best.0 {
            best = (full, format!("{nm} >= floor(lambda/[n-t,k-t]) * [n,k]: copies of G_q(n,k)"));
        }
        best
    }

    /// Full report for A_q(n,k,t;λ) (or Ã).
    pub fn report_a(&mut self, n: usize, k: usize, t: usize, lambda: u64, q: u64, variant: Variant) -> Result<BoundReport> {
        check_a(n, k, t, lambda, q)?;
        let simple = variant == Variant::Simple;
        if simple {
            check_simple_lambda(n, k, t, lambda, q)?;
        }
        let nm = name(variant, q, n, k, t, lambda);
        let nk = qb(n, k, q);
        let lm = qb(n - t, k - t, q);
        let lam = BigUint::from(lambda);
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let entry = |value: BigUint, rule: &str, trace: Vec<String>| BoundEntry {
            value,
            rule: rule.into(),
            trace,
        };

        let pack = packing_bound_a(n, k, t, lambda, q, variant)?;
        upper.push(entry(pack.clone(), "packing", vec![format!("floor({lambda} * [{n},{t}] / [{k},{t}]) = {pack}")]));
        if t < k {
            let (i1, tr1) = self.upper(n - 1, k - 1, t - 1, lambda, q, variant)?;
            let v = johnson1(n, k, t, lambda, q, &i1)?;
            let mut tr = vec![format!("{nm} <= floor(({q}^{n}-1)/({q}^{k}-1) * {i1}) = {v}")];
            tr.extend(tr1);
            upper.push(entry(v, "johnson1", tr));
            if !simple || lam <= qb(n - 1 - t, k - t, q) {
                let (i2, tr2) = self.upper(n - 1, k, t, lambda, q, variant)?;
                let v = pm1(q, n) * &i2 / pm1(q, n - k);
                let mut tr = vec![format!("{nm} <= floor(({q}^{n}-1)/({q}^{}-1) * {i2}) = {v}", n - k)];
                tr.extend(tr2);
                upper.push(entry(v, "johnson2", tr));
            }
        }
        if simple && lambda == 1 && n + t > 2 * k && n + t - 2 * k < n - k {
            // A(n,k,t;1) = A(n,n−k,n−2k+t;1)
            let t2 = n + t - 2 * k;
            let (v, tr1) = self.upper(n, n - k, t2, 1, q, variant)?;
            let mut tr = vec![format!("{nm} = {} by duality", name(variant, q, n, n - k, t2, 1))];
            tr.extend(tr1);
            upper.push(entry(v, "duality", tr));
        }
        if let Some((v, line)) = self.store_bound(&a_key(variant, q, n, k, t, lambda), false) {
            upper.push(entry(BigUint::from(v), "store", vec![line]));
        }
        if simple {
            upper.push(entry(nk.clone(), "grassmannian", vec![format!("[{n},{k}]_{q} = {nk}")]));
        } else if t == k {
            upper.push(entry(&lam * &nk, "t=k", vec![format!("each k-subspace at most {lambda} times")]));
        }

        lower.push(entry(BigUint::one(), "single codeword", vec![]));
        if simple && lam == lm {
            lower.push(entry(nk.clone(), "full grassmannian", vec![format!("every t-subspace lies in exactly [{},{}] = {lm} codewords", n - t, k - t)]));
        }
        if !simple && lam >= lm {
            let v = &lam / &lm * &nk;
            lower.push(entry(v, "scaled grassmannian", vec![format!("floor({lambda}/{lm}) copies of G_q({n},{k})")]));
        }
        if t == k {
            let v = if simple { nk.clone() } else { &lam * &nk };
            lower.push(entry(v, "t=k", vec![]));
        }
        for key in [a_key(Variant::Simple, q, n, k, t, lambda), a_key(variant, q, n, k, t, lambda)] {
            if !simple || key.quantity == Quantity::A {
                if let Some((v, line)) = self.store_bound(&key, true) {
                    let rule = if key.quantity == Quantity::A { "store" } else { "store (repeats)" };
                    if !lower.iter().any(|e: &BoundEntry| e.rule == rule) {
                        lower.push(entry(BigUint::from(v), rule, vec![line]));
                    }
                }
            }
        }
        if !simple {
            // Ã(λ'λ) >= λ' Ã(λ) for every proper divisor λ of the target
            for d in (1..lambda).filter(|d| lambda.is_multiple_of(*d)) {
                let (base, why) = self.known_lower(n, k, t, d, q, variant);
                let v = BigUint::from(lambda / d) * &base;
                lower.push(entry(v, "scaling", vec![format!("{} copies of a code of size {base}", lambda / d), why]));
            }
        }

        let best_upper = upper.iter().map(|e| e.value.clone()).min();
        let best_lower = lower.iter().map(|e| e.value.clone()).max();
        if let (Some(u), Some(l)) = (&best_upper, &best_lower) {
            if l > u {
                return Err(Error::StoreConflict(format!("{nm}: lower bound {l} exceeds upper bound {u}")));
            }
        }
        let qty = if simple { Quantity::A } else { Quantity::ATilde };
        Ok(BoundReport {
            params: StoreKey::new(qty, q as u32, n, k, t, lambda),
            variant,
            upper,
            lower,
            best_upper,
            best_lower,
        })
    }

    /// Report for B_q(n,k,δ;α) (or B̃), computed on the dual A side.
    pub fn report_b(&mut self, n: usize, k: usize, delta: usize, alpha: u64, q: u64, variant: Variant) -> Result<BoundReport> {
        let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha)?;
        let mut rep = self.report_a(n2, k2, t2, l2, q, variant)?;
        let dual = name(variant, q, n2, k2, t2, l2);
        for e in rep.upper.iter_mut().chain(rep.lower.iter_mut()) {
            e.trace.insert(0, format!("via the dual quantity {dual}"));
        }
        let qty = if variant == Variant::Simple { Quantity::B } else { Quantity::BTilde };
        rep.params = StoreKey::new(qty, q as u32, n, k, delta, alpha);
        Ok(rep)
    }
}

/// One report per λ in `lambdas`.
pub fn bound_table(
    n: usize,
    k: usize,
    t: usize,
    q: u64,
    lambdas: impl IntoIterator<Item = u64>,
    variant: Variant,
    store: Option<&ResultsStore>,
) -> Result<Vec<BoundReport>> {
    let mut b = Bounds::new(store);
    lambdas.into_iter().map(|l| b.report_a(n, k, t, l, q, variant)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Holds,
    Violated,
    /// Parameters outside the identity's range; nothing is claimed.
    Guarded,
    /// A needed exact value is unknown.
    Missing,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub params: StoreKey,
    pub checks: Vec<IdentityCheck>,
    /// A = C at these parameters, i.e. a t-(n,k,λ)_q design exists.
    pub design: Option<bool>,
}

/// Checks the structural identities on exact values held in `store`
/// (search certificates or literature). C at multiplicity 0 is 0.
pub fn identity_checks(q: u64, n: usize, k: usize, t: usize, lambda: u64, store: &ResultsStore) -> Result<IdentityReport> {
    check_a(n, k, t, lambda, q)?;
    check_simple_lambda(n, k, t, lambda, q)?;
    let a = |n: usize, k: usize, t: usize, l: u64| store.exact(&StoreKey::new(Quantity::A, q as u32, n, k, t, l));
    let c = |l: u64| {
        if l == 0 {
            Some(0)
        } else {
            store.exact(&StoreKey::new(Quantity::C, q as u32, n, k, t, l))
        }
    };
    let nk = qb(n, k, q).to_u64();
    let lm = qb(n - t, k - t, q).to_u64().unwrap_or(u64::MAX);
    let here = a(n, k, t, lambda);
    let mut checks = Vec::new();
    let mut push = |name: &str, status: CheckStatus, detail: String| {
        checks.push(IdentityCheck {
            name: name.into(),
            status,
            detail,
        })
    };
    let missing = |what: String| (CheckStatus::Missing, format!("no exact value for {what}"));
    let dual_t = (n + t).checked_sub(2 * k).filter(|&t2| t2 >= 1 && t2 <= n - k);

    // A(n,k,t;1) = A(n,n−k,n−2k+t;1)
    if lambda == 1 {
        let (st, d) = match dual_t {
            None => (CheckStatus::Guarded, format!("n-2k+t = {} is outside 1..=n-k", n as i64 + t as i64 - 2 * k as i64)),
            Some(t2) => match (here, a(n, n - k, t2, 1)) {
                (Some(x), Some(y)) => (
                    if x == y { CheckStatus::Holds } else { CheckStatus::Violated },
                    format!("A({n},{k},{t};1) = {x}, A({n},{},{t2};1) = {y}", n - k),
                ),
                (None, _) => missing(format!("A({n},{k},{t};1)")),
                (_, None) => missing(format!("A({n},{},{t2};1)", n - k)),
            },
        };
        push("duality_lambda_1", st, d);
    }

    // A(n,k,t;λ) <= A(n,n−k,n−2k+t;λ) for 2k <= n
    let (st, d) = match dual_t.filter(|_| 2 * k <= n) {
        None => (CheckStatus::Guarded, "needs 2k <= n and 1 <= n-2k+t".to_string()),
        Some(t2) => match (here, a(n, n - k, t2, lambda)) {
            (Some(x), Some(y)) => (
                if x <= y { CheckStatus::Holds } else { CheckStatus::Violated },
                format!("{x} <= {y}"),
            ),
            (None, _) => missing(format!("A({n},{k},{t};{lambda})")),
            (_, None) => missing(format!("A({n},{},{t2};{lambda})", n - k)),
        },
    };
    push("complement_inequality", st, d);

    // A(λ) = [n,k] − C([n−t,k−t] − λ)
    let (st, d) = match (here, c(lm - lambda), nk) {
        (Some(x), Some(y), Some(nk)) => (
            if x + y == nk { CheckStatus::Holds } else { CheckStatus::Violated },
            format!("A = {x}, C({n},{k},{t};{}) = {y}, [n,k] = {nk}", lm - lambda),
        ),
        (None, _, _) => missing(format!("A({n},{k},{t};{lambda})")),
        (_, None, _) => missing(format!("C({n},{k},{t};{})", lm - lambda)),
        (_, _, None) => (CheckStatus::Guarded, "[n,k] exceeds u64".into()),
    };
    push("complement_closure", st, d);

    // A <= C, with equality iff a design exists (packing bound met)
    let mut design = None;
    let pack = packing_bound_a(n, k, t, lambda, q, Variant::Simple)?;
    let divisible = (BigUint::from(lambda) * qb(n, t, q) % qb(k, t, q)).is_zero();
    let (st, d) = match (here, c(lambda)) {
        (Some(x), Some(y)) => {
            design = Some(x == y);
            let ok = x <= y && (x != y || (divisible && BigUint::from(x) == pack));
            (
                if ok { CheckStatus::Holds } else { CheckStatus::Violated },
                format!("A = {x}, C = {y}{}", if x == y { ", a design" } else { "" }),
            )
        }
        (None, _) => missing(format!("A({n},{k},{t};{lambda})")),
        (_, None) => missing(format!("C({n},{k},{t};{lambda})")),
    };
    push("packing_vs_covering", st, d);

    if lambda == lm {
        let (st, d) = match (here, nk) {
            (Some(x), Some(nk)) => (
                if x == nk { CheckStatus::Holds } else { CheckStatus::Violated },
                format!("A = {x}, [n,k] = {nk}"),
            ),
            (None, _) => missing(format!("A({n},{k},{t};{lambda})")),
            (_, None) => (CheckStatus::Guarded, "[n,k] exceeds u64".into()),
        };
        push("full_grassmannian", st, d);
    }

    if here.is_none() {
        return Err(Error::MissingExactValue(format!("A_{q}({n},{k},{t};{lambda})")));
    }
    Ok(IdentityReport {
        params: StoreKey::new(Quantity::A, q as u32, n, k, t, lambda),
        checks,
        design,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::Side;
    use Variant::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn packing_examples() {
        assert_eq!(packing_bound_a(6, 4, 3, 1, 2, Simple).unwrap(), b(93));
        assert_eq!(packing_bound_a(6, 4, 3, 2, 2, Simple).unwrap(), b(186));
        assert_eq!(packing_bound_a(4, 2, 1, 7, 2, Simple).unwrap(), b(35));
        assert_eq!(packing_bound_a(5, 3, 2, 7, 2, Simple).unwrap(), b(155));
        assert!(packing_bound_a(4, 2, 1, 8, 2, Simple).is_err());
        assert_eq!(packing_bound_a(4, 2, 1, 8, 2, Repeats).unwrap(), b(40));
        assert!(packing_bound_a(4, 2, 0, 1, 2, Simple).is_err());
        assert!(packing_bound_a(4, 4, 1, 1, 2, Simple).is_err());
        assert!(matches!(packing_bound_a(4, 2, 1, 1, 6, Simple), Err(Error::NotAPrimePower(6))));
    }

    #[test]
    fn packing_b_examples() {
        assert_eq!(packing_bound_b(3, 1, 1, 3, 2, Repeats).unwrap(), b(14));
        assert!(packing_bound_b(3, 1, 1, 3, 2, Simple).is_err());
        assert_eq!(packing_bound_b(3, 1, 1, 2, 2, Simple).unwrap(), b(7));
        assert!(packing_bound_b(6, 3, 2, 4, 2, Simple).unwrap() >= b(279));
        assert!(packing_bound_b(6, 3, 2, 1, 2, Simple).is_err());
        assert!(packing_bound_b(6, 3, 4, 2, 2, Simple).is_err());
    }

    #[test]
    fn packing_b_is_dual_packing_a() {
        for q in [2u64, 3] {
            for n in 2..=8usize {
                for k in 1..n {
                    for delta in 1..=n - k {
                        for alpha in 2..=5u64 {
                            for v in [Simple, Repeats] {
                                let (n2, k2, t2, l2) = b_to_a(n, k, delta, alpha).unwrap();
                                let lhs = packing_bound_b(n, k, delta, alpha, q, v);
                                let rhs = packing_bound_a(n2, k2, t2, l2, q, v);
                                match (lhs, rhs) {
                                    (Ok(x), Ok(y)) => assert_eq!(x, y, "{q} {n} {k} {delta} {alpha}"),
                                    (Err(_), Err(_)) => {}
                                    other => panic!("validity differs at {q} {n} {k} {delta} {alpha}: {other:?}"),
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn johnson_examples() {
        assert_eq!(johnson1(6, 4, 3, 2, 2, &b(32)).unwrap(), b(134));
        assert_eq!(johnson2(5, 2, 1, 1, 2, &b(5)).unwrap(), b(22));
        assert!(johnson2(5, 2, 1, 100, 2, &b(5)).is_err());
        assert!(johnson1(4, 2, 2, 1, 2, &b(5)).is_err());
        // t = 1 with inner λ reproduces the λ-scaled point count
        for lambda in 1..5u64 {
            assert_eq!(
                johnson1(4, 2, 1, lambda, 2, &b(lambda)).unwrap(),
                packing_bound_a(4, 2, 1, lambda, 2, Repeats).unwrap()
            );
        }
        for inner in 0..40u64 {
            assert!(johnson2(6, 3, 2, 1, 2, &b(inner + 1)).unwrap() >= johnson2(6, 3, 2, 1, 2, &b(inner)).unwrap());
        }
    }

    #[test]
    fn johnson1_with_packing_inner_loses_only_the_floor() {
        for n in 4..=7usize {
            for k in 2..n {
                for t in 2..k {
                    for lambda in 1..=4u64 {
                        let inner = packing_bound_a(n - 1, k - 1, t - 1, lambda, 2, Repeats).unwrap();
                        let j = johnson1(n, k, t, lambda, 2, &inner).unwrap();
                        let p = packing_bound_a(n, k, t, lambda, 2, Repeats).unwrap();
                        let c = (pm1(2, n) + pm1(2, k) - 1u32) / pm1(2, k);
                        assert!(j <= p && &p - &j <= c, "{n} {k} {t} {lambda}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_reproduces_known_rows() {
        let mut store = ResultsStore::new();
        store
            .record(StoreKey::new(Quantity::A, 2, 5, 3, 2, 2), Side::Lower, 32, Provenance::literature("EKOO18"))
            .unwrap();
        store
            .record(StoreKey::new(Quantity::A, 2, 5, 3, 2, 2), Side::Upper, 32, Provenance::literature("EKOO18"))
            .unwrap();
        let rows = bound_table(6, 4, 3, 2, 1..=2, Simple, Some(&store)).unwrap();
        assert_eq!(rows[0].upper_rule("packing"), Some(&b(93)));
        assert_eq!(rows[0].upper_rule("johnson1"), Some(&b(92)));
        // the dual spread count
        assert_eq!(rows[0].upper_rule("duality"), Some(&b(21)));
        assert_eq!(rows[0].best_upper, Some(b(21)));
        assert_eq!(rows[1].upper_rule("packing"), Some(&b(186)));
        assert_eq!(rows[1].upper_rule("johnson1"), Some(&b(134)));
        assert_eq!(rows[1].best_upper, Some(b(134)));
        let j1 = rows[1].upper.iter().find(|e| e.rule == "johnson1").unwrap();
        assert!(j1.trace.iter().any(|l| l.contains("from store")));
    }

    #[test]
    fn recursive_values_without_store() {
        let mut bd = Bounds::new(None);
        assert_eq!(bd.upper(5, 3, 2, 2, 2, Simple).unwrap().0, b(44));
        assert_eq!(bd.upper(4, 2, 1, 2, 2, Simple).unwrap().0, b(10));
        assert_eq!(bd.upper(5, 3, 2, 1, 2, Simple).unwrap().0, b(22));
        let r = bd.report_a(6, 4, 3, 2, 2, Simple).unwrap();
        assert_eq!(r.upper_rule("johnson1"), Some(&b(184)));
    }

    #[test]
    fn lambda_max_row_is_exact() {
        for (q, n, k, t) in [(2u64, 4usize, 2usize, 1usize), (2, 5, 3, 2), (3, 4, 2, 1), (2, 6, 4, 3)] {
            let lm = lambda_max(n, k, t, q).unwrap().to_u64().unwrap();
            let r = Bounds::new(None).report_a(n, k, t, lm, q, Simple).unwrap();
            let nk = qb(n, k, q);
            assert_eq!(r.best_upper, Some(nk.clone()));
            assert_eq!(r.best_lower, Some(nk.clone()));
            assert_eq!(r.upper_rule("packing"), Some(&nk));
        }
    }

    #[test]
    fn rows_are_monotone_in_lambda() {
        for (q, n, k, t) in [(2u64, 4usize, 2usize, 1usize), (2, 5, 3, 2), (2, 6, 4, 3), (3, 4, 2, 1), (2, 6, 3, 2)] {
            let lm = lambda_max(n, k, t, q).unwrap().to_u64().unwrap();
            for v in [Simple, Repeats] {
                let rows = bound_table(n, k, t, q, 1..=lm, v, None).unwrap();
                for w in rows.windows(2) {
                    assert!(w[0].best_upper <= w[1].best_upper, "{q} {n} {k} {t} {v:?}");
                    assert!(w[0].best_lower <= w[1].best_lower);
                }
                for r in &rows {
                    assert!(r.best_lower <= r.best_upper);
                }
            }
        }
    }

    #[test]
    fn repeats_dominate_simple_and_scale() {
        // B~(3,1,1;3) = 14 > 7 = B(3,1,1;3)
        let mut bd = Bounds::new(None);
        let simple = bd.report_b(3, 1, 1, 2, 2, Simple).unwrap();
        assert_eq!(simple.best_upper, Some(b(7)));
        let rep = bd.report_b(3, 1, 1, 3, 2, Repeats).unwrap();
        assert_eq!(rep.best_upper, Some(b(14)));
        assert_eq!(rep.best_lower, Some(b(14)));
        let mut store = ResultsStore::new();
        store
            .record_certificate(StoreKey::new(Quantity::A, 2, 4, 2, 1, 1), 5, "exact", 0, 1)
            .unwrap();
        let mut bd = Bounds::new(Some(&store));
        let r = bd.report_a(4, 2, 1, 3, 2, Repeats).unwrap();
        assert_eq!(r.best_lower, Some(b(15)));
        assert!(r.lower.iter().any(|e| e.rule == "scaling"));
    }

    #[test]
    fn identity_checks_on_exact_values() {
        let mut store = ResultsStore::new();
        for l in 1..=7u64 {
            store.record_certificate(StoreKey::new(Quantity::A, 2, 4, 2, 1, l), 5 * l, "exact", 0, 1).unwrap();
            store.record_certificate(StoreKey::new(Quantity::C, 2, 4, 2, 1, l), 5 * l, "exact", 0, 1).unwrap();
        }
        for l in 1..=7u64 {
            let r = identity_checks(2, 4, 2, 1, l, &store).unwrap();
            assert!(r.checks.iter().all(|c| c.status == CheckStatus::Holds), "{r:?}");
            assert_eq!(r.design, Some(true));
        }
        // t' = n−2k+t = 0: the λ = 1 duality is guarded
        let mut s2 = ResultsStore::new();
        s2.record_certificate(StoreKey::new(Quantity::A, 2, 4, 3, 2, 1), 1, "exact", 0, 1).unwrap();
        let r = identity_checks(2, 4, 3, 2, 1, &s2).unwrap();
        assert_eq!(r.checks[0].status, CheckStatus::Guarded);
        assert!(matches!(identity_checks(2, 5, 2, 1, 1, &ResultsStore::new()), Err(Error::MissingExactValue(_))));
    }
}
