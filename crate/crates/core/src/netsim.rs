//! Generalized combination networks (ε,k)-N_{h,r,αk+ε}: a source with h
//! messages, r middle nodes fed by k links each, and one receiver for every
//! α-subset of middle nodes, which also gets ε direct links from the source.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{is_covering_code, GrassCode, Witness};
use crate::error::{Error, Result};
use crate::gfq::{make_field, Echelon, Elem, Field, MatrixFq};
use crate::grassmann::combinations;

/// Message spaces up to this size are simulated exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
pub const DEFAULT_SAMPLES: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// k + ε ≥ h: the direct links and any one node already suffice.
    Trivial,
    /// αk + ε < h: a receiver never sees enough symbols.
    Unsolvable,
    Nontrivial,
}

pub fn classify(h: usize, r: usize, k: usize, eps: usize, alpha: usize) -> Result<Classification> {
    if h == 0 || r == 0 || k == 0 || alpha == 0 {
        return Err(Error::InvalidArgs("h, r, k and alpha must be positive".into()));
    }
    if alpha > r {
        return Err(Error::InvalidArgs(format!("alpha={alpha} exceeds r={r}")));
    }
    Ok(if k + eps >= h {
        Classification::Trivial
    } else if alpha * k + eps < h {
        Classification::Unsolvable
    } else {
        Classification::Nontrivial
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkInstance {
    pub h: usize,
    pub r: usize,
    pub k: usize,
    pub eps: usize,
    pub alpha: usize,
    pub q: u32,
}

impl NetworkInstance {
    pub fn new(h: usize, r: usize, k: usize, eps: usize, alpha: usize, q: u32) -> Result<Self> {
        classify(h, r, k, eps, alpha)?;
        make_field(q)?;
        Ok(NetworkInstance { h, r, k, eps, alpha, q })
    }

    /// From the network's s = αk + ε.
    pub fn with_s(h: usize, r: usize, k: usize, eps: usize, s: usize, q: u32) -> Result<Self> {
        if k == 0 || s < eps || !(s - eps).is_multiple_of(k) {
            return Err(Error::InvalidArgs(format!("s={s} is not alpha*k+eps for k={k}, eps={eps}")));
        }
        Self::new(h, r, k, eps, (s - eps) / k, q)
    }

    pub fn s(&self) -> usize {
        self.alpha * self.k + self.eps
    }

    pub fn classification(&self) -> Classification {
        classify(self.h, self.r, self.k, self.eps, self.alpha).expect("validated")
    }

    pub fn receivers(&self) -> BigUint {
        let mut b = BigUint::from(1u32);
        for i in 0..self.alpha {
            b = b * (self.r - i) / (i + 1);
        }
        b
    }

    /// Receivers as α-subsets of node indices, lexicographically.
    pub fn receiver_iter(&self) -> impl Iterator<Item = Vec<usize>> {
        combinations(self.r, self.alpha)
    }

    /// The covering distance δ = h−k−ε a code must reach; None when trivial.
    pub fn required_delta(&self) -> Option<usize> {
        self.h.checked_sub(self.k + self.eps).filter(|&d| d >= 1)
    }

    /// The instance for vector coding over F_q^ℓ.
    pub fn vector(&self, ell: usize) -> Result<NetworkInstance> {
        if ell == 0 {
            return Err(Error::InvalidArgs("ell must be at least 1".into()));
        }
        Self::new(self.h * ell, self.r, self.k * ell, self.eps * ell, self.alpha, self.q)
    }
}

/// Code parameters (n, k, δ) a vector solution with ℓ-symbol packets needs.
pub fn vector_params(h: usize, k: usize, eps: usize, ell: usize) -> Result<(usize, usize, usize)> {
    if ell == 0 || k == 0 {
        return Err(Error::InvalidArgs("ell and k must be at least 1".into()));
    }
    if k + eps >= h {
        return Err(Error::InvalidArgs(format!("k+eps = {} >= h = {h}: the network is trivial", k + eps)));
    }
    Ok((h * ell, k * ell, (h - k - eps) * ell))
}

#[derive(Clone, Debug, Serialize)]
pub struct CodingAssignment {
    pub net: NetworkInstance,
    /// Per middle node: k global coding vectors (rows), length h.
    pub nodes: Vec<MatrixFq>,
    /// Word index in the source code for each node.
    pub node_words: Vec<usize>,
}

impl CodingAssignment {
    fn field(&self) -> Field {
        make_field(self.net.q).expect("validated")
    }

    /// The receiver's direct-link vectors: standard basis vectors e_1..e_h,
    /// in order, that raise the span of the node vectors, padded with zero
    /// vectors to ε. None when more than ε would be needed.
    pub fn completion(&self, receiver: &[usize]) -> Option<Vec<Vec<Elem>>> {
        let h = self.net.h;
        let mut ech = Echelon::new(&self.field(), h);
        for &i in receiver {
            ech.insert_all(self.nodes[i].row_vecs().iter().map(|v| v.as_slice()));
        }
        let mut out = Vec::new();
        for j in 0..h {
            if ech.rank() == h {
                break;
            }
            let mut e = vec![0; h];
            e[j] = 1;
            if ech.insert(&e) {
                out.push(e);
            }
        }
        if out.len() > self.net.eps {
            return None;
        }
        out.resize(self.net.eps, vec![0; h]);
        Some(out)
    }

    /// Everything the receiver hears, one row per link: node vectors first
    /// (in node order), then the direct links.
    fn receiver_rows(&self, receiver: &[usize]) -> Option<Vec<Vec<Elem>>> {
        let mut rows: Vec<Vec<Elem>> = receiver.iter().flat_map(|&i| self.nodes[i].row_vecs()).collect();
        rows.extend(self.completion(receiver)?);
        Some(rows)
    }

    /// Codeword strings of this linear solution: for each message tuple
    /// (base-q index, first message most significant), the r·k symbols the
    /// middle nodes forward.
    pub fn linear_strings(&self) -> Result<Vec<Vec<Elem>>> {
        let f = self.field();
        let total = message_count(self.net.q, self.net.h)?;
        Ok((0..total)
            .map(|m| {
                let msg = message_from_index(&f, self.net.h, m);
                self.nodes.iter().flat_map(|g| g.mul_vec(&msg)).collect()
            })
            .collect())
    }
}

/// Assigns the first r codewords (multiset order) to the middle nodes after
/// checking that every receiver can complete its span with ε direct links.
pub fn assign_scalar(net: &NetworkInstance, code: &GrassCode) -> Result<CodingAssignment> {
    if code.q() != net.q || code.n() != net.h || code.k() != net.k {
        return Err(Error::DimensionMismatch(format!(
            "code in G_{}({},{}) for a network needing G_{}({},{})",
            code.q(),
            code.n(),
            code.k(),
            net.q,
            net.h,
            net.k
        )));
    }
    if code.size() < net.r as u64 {
        return Err(Error::CodeTooSmall {
            have: code.size(),
            need: net.r as u64,
        });
    }
    let slots: Vec<usize> = code.slots().into_iter().take(net.r).collect();
    let needed = net.h.saturating_sub(net.eps);
    if let Some(delta) = net.required_delta() {
        let mut sub = GrassCode::new(code.field(), net.h, net.k)?;
        for &w in &slots {
            sub.push(code.words()[w].space.clone(), 1)?;
        }
        let rep = is_covering_code(&sub, net.alpha as u64, delta)?;
        if let Some(Witness::Covering { words, span_dim }) = rep.witness {
            // sub-code word j is the j-th distinct word among the slots
            let mut firsts: Vec<usize> = Vec::new();
            for (node, &w) in slots.iter().enumerate() {
                if !firsts.iter().any(|&n| slots[n] == w) {
                    firsts.push(node);
                }
            }
            let mut receiver = Vec::new();
            for &j in &words {
                let w = slots[firsts[j]];
                let node = (0..net.r).find(|&n| slots[n] == w && !receiver.contains(&n)).expect("multiplicity bounds the copies");
                receiver.push(node);
            }
            receiver.sort_unstable();
            return Err(Error::CodeInvalid {
                receiver,
                span_dim,
                needed,
            });
        }
    } else if net.classification() == Classification::Unsolvable {
        return Err(Error::InvalidArgs("the network is unsolvable".into()));
    }
    let nodes = slots.iter().map(|&w| code.words()[w].space.basis().clone()).collect();
    Ok(CodingAssignment {
        net: *net,
        nodes,
        node_words: slots,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// The receiver's links span less than F_q^h.
    Singular { receiver: Vec<usize> },
    WrongDecode {
        receiver: Vec<usize>,
        message: Vec<Elem>,
        decoded: Vec<Elem>,
    },
}

/// Linear decoder for one receiver: picks h independent links and inverts.
struct Decoder {
    rows: Vec<Vec<Elem>>,
    pick: Vec<usize>,
    inverse: MatrixFq,
}

impl Decoder {
    fn new(f: &Field, h: usize, rows: Vec<Vec<Elem>>) -> Option<Decoder> {
        let mut ech = Echelon::new(f, h);
        let mut pick = Vec::with_capacity(h);
        for (i, r) in rows.iter().enumerate() {
            if ech.rank() == h {
                break;
            }
            if ech.insert(r) {
                pick.push(i);
            }
        }
        if pick.len() < h {
            return None;
        }
        let square: Vec<Vec<Elem>> = pick.iter().map(|&i| rows[i].clone()).collect();
        let inverse = invert(f, &MatrixFq::from_rows(f, h, &square).ok()?)?;
        Some(Decoder { rows, pick, inverse })
    }

    fn decode(&self, f: &Field, message: &[Elem]) -> Vec<Elem> {
        let received: Vec<Elem> = self.pick.iter().map(|&i| f.dot(&self.rows[i], message)).collect();
        self.inverse.mul_vec(&received)
    }
}

fn invert(f: &Field, m: &MatrixFq) -> Option<MatrixFq> {
    let h = m.rows();
    let aug = m.transpose().stack(&MatrixFq::identity(f, h)).ok()?.transpose();
    let red = aug.rref();
    if red.pivots.iter().copied().take(h).ne(0..h) {
        return None;
    }
    let mut out = MatrixFq::zeros(f, h, h);
    for i in 0..h {
        for j in 0..h {
            out.set(i, j, red.matrix.get(i, h + j));
        }
    }
    Some(out)
}

pub fn message_count(q: u32, h: usize) -> Result<u64> {
    (q as u64)
        .checked_pow(h as u32)
        .ok_or_else(|| Error::Unsupported(format!("q^h = {q}^{h} overflows")))
}

/// Message tuple with base-q index `m`, first message most significant.
pub fn message_from_index(f: &Field, h: usize, mut m: u64) -> Vec<Elem> {
    let q = f.order() as u64;
    let mut v = vec![0 as Elem; h];
    for i in (0..h).rev() {
        v[i] = (m % q) as Elem;
        m /= q;
    }
    v
}

/// Decodes one message tuple at every receiver.
pub fn simulate(asg: &CodingAssignment, messages: &[Elem]) -> Result<SimulationReport> {
    let f = asg.field();
    if messages.len() != asg.net.h || messages.iter().any(|&x| !f.contains(x as u32)) {
        return Err(Error::InvalidArgs(format!("need {} messages in F_{}", asg.net.h, asg.net.q)));
    }
    run(asg, MessagePlan::Given(vec![messages.to_vec()]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MessagePlan {
    /// Exhaustive when q^h ≤ 4096, else this many seeded samples.
    Auto { samples: u64, seed: u64 },
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
    Given(Vec<Vec<Elem>>),
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationReport {
    pub classification: Classification,
    pub receivers_checked: u64,
    pub messages_checked: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    /// Every receiver decoded every message.
    pub success: bool,
    pub failure_count: u64,
    /// The first failures in receiver order (at most 20).
    pub failures: Vec<Failure>,
}

const MAX_REPORTED: usize = 20;

/// Simulates the messages chosen by `plan` at every receiver.
pub fn run(asg: &CodingAssignment, plan: MessagePlan) -> Result<SimulationReport> {
    let f = asg.field();
    let h = asg.net.h;
    let total = message_count(asg.net.q, h).ok();
    let (messages, exhaustive, seed): (Vec<Vec<Elem>>, bool, Option<u64>) = match plan {
        MessagePlan::Given(m) => (m, false, None),
        MessagePlan::Exhaustive => {
            let total = total.filter(|&t| t <= 1 << 24).ok_or_else(|| Error::BudgetExceeded {
                requested: format!("{}^{h} messages", asg.net.q),
                budget: 1 << 24,
            })?;
            ((0..total).map(|m| message_from_index(&f, h, m)).collect(), true, None)
        }
        MessagePlan::Auto { samples, seed } if total.is_some_and(|t| t <= EXHAUSTIVE_LIMIT) => {
            let _ = (samples, seed);
            ((0..total.unwrap()).map(|m| message_from_index(&f, h, m)).collect(), true, None)
        }
        MessagePlan::Auto { samples, seed } | MessagePlan::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = asg.net.q;
            let msgs = (0..samples)
                .map(|_| (0..h).map(|_| rng.gen_range(0..q) as Elem).collect())
                .collect();
            (msgs, false, Some(seed))
        }
    };
    let mut failures = Vec::new();
    let mut failure_count = 0u64;
    let mut receivers = 0u64;
    for rec in asg.net.receiver_iter() {
        receivers += 1;
        let dec = asg.receiver_rows(&rec).and_then(|rows| Decoder::new(&f, h, rows));
        match dec {
            None => {
                failure_count += 1;
                if failures.len() < MAX_REPORTED {
                    failures.push(Failure::Singular { receiver: rec.clone() });
                }
            }
            Some(d) => {
                for m in &messages {
                    let got = d.decode(&f, m);
                    if &got != m {
                        failure_count += 1;
                        if failures.len() < MAX_REPORTED {
                            failures.push(Failure::WrongDecode {
                                receiver: rec.clone(),
                                message: m.clone(),
                                decoded: got,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(SimulationReport {
        classification: asg.net.classification(),
        receivers_checked: receivers,
        messages_checked: messages.len() as u64,
        exhaustive,
        seed,
        success: failure_count == 0,
        failure_count,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonlinearReport {
    pub valid: bool,
    /// A receiver and a projection pattern seen more than q^ε times.
    pub witness: Option<(Vec<usize>, Vec<Elem>, u64)>,
    /// Lookup decoding at every receiver for every message (only when valid).
    pub decoded_all: Option<bool>,
    pub receivers_checked: u64,
}

/// Checks an arbitrary (possibly nonlinear) network code given as one
/// string of r·k symbols per message tuple, listed by message index.
pub fn nonlinear_check(words: &[Vec<Elem>], net: &NetworkInstance) -> Result<NonlinearReport> {
    let f = make_field(net.q)?;
    let total = message_count(net.q, net.h)?;
    if words.len() as u64 != total {
        return Err(Error::WrongCount {
            expected: total,
            got: words.len() as u64,
        });
    }
    let len = net.r * net.k;
    if let Some((i, w)) = words.iter().enumerate().find(|(_, w)| w.len() != len) {
        return Err(Error::WrongLength {
            index: i,
            expected: len,
            got: w.len(),
        });
    }
    let limit = (net.q as u64).checked_pow(net.eps as u32).unwrap_or(u64::MAX);
    let mut receivers = 0u64;
    let mut decoded_all = true;
    for rec in net.receiver_iter() {
        receivers += 1;
        let coords: Vec<usize> = rec.iter().flat_map(|&i| i * net.k..(i + 1) * net.k).collect();
        let mut pre: HashMap<Vec<Elem>, Vec<u64>> = HashMap::new();
        for (m, w) in words.iter().enumerate() {
            pre.entry(coords.iter().map(|&c| w[c]).collect()).or_default().push(m as u64);
        }
        if let Some((pat, ms)) = pre.iter().filter(|(_, ms)| ms.len() as u64 > limit).min_by(|a, b| a.0.cmp(b.0)) {
            return Ok(NonlinearReport {
                valid: false,
                witness: Some((rec, pat.clone(), ms.len() as u64)),
                decoded_all: None,
                receivers_checked: receivers,
            });
        }
        // the source sends, on the ε direct links, the base-q digits of the
        // message's position among the messages sharing its pattern
        for (m, w) in words.iter().enumerate() {
            let pat: Vec<Elem> = coords.iter().map(|&c| w[c]).collect();
            let bucket = &pre[&pat];
            let pos = bucket.iter().position(|&x| x == m as u64).unwrap() as u64;
            let direct = message_from_index(&f, net.eps, pos);
            let mut idx = 0u64;
            for &d in &direct {
                idx = idx * net.q as u64 + d as u64;
            }
            if bucket.get(idx as usize) != Some(&(m as u64)) {
                decoded_all = false;
            }
        }
    }
    Ok(NonlinearReport {
        valid: true,
        witness: None,
        decoded_all: Some(decoded_all),
        receivers_checked: receivers,
    })
}
