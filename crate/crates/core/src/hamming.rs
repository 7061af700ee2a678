//! Bridges to the Hamming scheme: linear codes read as codes of lines,
//! set packings (the q → 1 picture of multiple codes), and the generalized
//! weight hierarchies d_r and c_α.

use std::collections::HashMap;

use serde::Serialize;

use crate::codes::GrassCode;
use crate::error::{Error, Result};
use crate::gfq::{make_field, Elem, Field, MatrixFq};
use crate::grassmann::{combinations, enumerate_grassmannian, Subspace};
use crate::search::{greedy_pack, Incidence, Limits, PackSearch};

/// Largest message space enumerated codeword by codeword.
pub const CODEWORD_BUDGET: u64 = 1 << 20;
/// Largest number of subcodes or codeword subsets a hierarchy scan visits.
pub const HIERARCHY_BUDGET: u64 = 10_000_000;

/// A linear [r, h] code given by a full-rank h×r generator matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearCode {
    generator: MatrixFq,
}

impl LinearCode {
    pub fn new(generator: MatrixFq) -> Result<LinearCode> {
        let rank = generator.rank();
        if rank < generator.rows() || generator.rows() == 0 {
            return Err(Error::RankDeficient {
                rank,
                rows: generator.rows(),
            });
        }
        Ok(LinearCode { generator })
    }

    /// The code with parity-check matrix `h` (its null space).
    pub fn from_parity(h: &MatrixFq) -> Result<LinearCode> {
        LinearCode::new(h.null_space())
    }

    /// Binary Hamming code of redundancy m: the parity-check columns are
    /// 1..2^m−1 written in binary, most significant bit first.
    pub fn hamming(m: usize) -> Result<LinearCode> {
        LinearCode::from_parity(&hamming_parity(m)?)
    }

    /// Hamming code extended by an overall parity coordinate.
    pub fn extended_hamming(m: usize) -> Result<LinearCode> {
        let g = LinearCode::hamming(m)?.generator;
        let f = g.field().clone();
        let rows: Vec<Vec<Elem>> = g
            .row_vecs()
            .into_iter()
            .map(|mut row| {
                let p = row.iter().fold(0, |acc, &x| f.add(acc, x));
                row.push(p);
                row
            })
            .collect();
        LinearCode::new(MatrixFq::from_rows(&f, g.cols() + 1, &rows)?)
    }

    pub fn repetition(field: &Field, r: usize) -> Result<LinearCode> {
        LinearCode::new(MatrixFq::from_rows(field, r, &[vec![1; r]])?)
    }

    pub fn field(&self) -> &Field {
        self.generator.field()
    }

    pub fn generator(&self) -> &MatrixFq {
        &self.generator
    }

    pub fn length(&self) -> usize {
        self.generator.cols()
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn parity_check(&self) -> MatrixFq {
        self.generator.null_space()
    }

    fn message_space(&self) -> Result<u64> {
        let q = self.field().order() as u64;
        q.checked_pow(self.dim() as u32)
            .filter(|&m| m <= CODEWORD_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded {
                requested: format!("{q}^{} codewords", self.dim()),
                budget: CODEWORD_BUDGET,
            })
    }

    /// All q^h codewords, messages in base-q order (first symbol most
    /// significant), so index 0 is the zero word.
    pub fn codewords(&self) -> Result<Vec<Vec<Elem>>> {
        let total = self.message_space()?;
        let f = self.field();
        let h = self.dim();
        let gt = self.generator.transpose();
        Ok((0..total)
            .map(|m| gt.mul_vec(&crate::netsim::message_from_index(f, h, m)))
            .collect())
    }

    pub fn min_distance(&self) -> Result<usize> {
        Ok(self
            .codewords()?
            .iter()
            .skip(1)
            .map(|c| weight(c))
            .min()
            .unwrap_or(0))
    }
}

pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

pub fn hamming_parity(m: usize) -> Result<MatrixFq> {
    if !(2..=16).contains(&m) {
        return Err(Error::InvalidArgs(format!("Hamming redundancy must be in 2..=16, got {m}")));
    }
    let f = make_field(2)?;
    let r = (1usize << m) - 1;
    let mut h = MatrixFq::zeros(&f, m, r);
    for c in 0..r {
        for i in 0..m {
            h.set(i, c, ((c + 1) >> (m - 1 - i) & 1) as Elem);
        }
    }
    Ok(h)
}

fn columns_as_lines(m: &MatrixFq) -> Result<GrassCode> {
    let f = m.field();
    let mut code = GrassCode::new(f, m.rows(), 1)?;
    for c in 0..m.cols() {
        let col = m.column(c);
        if col.iter().all(|&x| x == 0) {
            return Err(Error::ZeroColumn(c));
        }
        code.push(Subspace::from_rows(f, m.rows(), &[col])?, 1)?;
    }
    Ok(code)
}

/// The r columns of an h×r generator as a multiset of lines in F_q^h.
pub fn generator_to_grasscode(g: &MatrixFq) -> Result<GrassCode> {
    let rank = g.rank();
    if rank < g.rows() {
        return Err(Error::RankDeficient { rank, rows: g.rows() });
    }
    columns_as_lines(g)
}

/// Columns of a parity-check matrix whose every d−1 columns are
/// independent, as a (d−1)-(r−k,1,d−2)^c code of lines.
pub fn parity_to_covering(h: &MatrixFq, d: usize) -> Result<GrassCode> {
    if d < 2 {
        return Err(Error::InvalidArgs(format!("d must be at least 2, got {d}")));
    }
    let f = h.field();
    let cols: Vec<Vec<Elem>> = (0..h.cols()).map(|c| h.column(c)).collect();
    if d - 1 <= cols.len() {
        for set in combinations(cols.len(), d - 1) {
            let rows: Vec<Vec<Elem>> = set.iter().map(|&c| cols[c].clone()).collect();
            if MatrixFq::from_rows(f, h.rows(), &rows)?.rank() < d - 1 {
                return Err(Error::IndependenceViolated { columns: set });
            }
        }
    }
    columns_as_lines(h)
}

/// A family of distinct k-subsets (blocks) of {1..n}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPacking {
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl SetPacking {
    /// Blocks are sorted; repeats and out-of-range elements are rejected.
    pub fn new(n: usize, k: usize, blocks: Vec<Vec<usize>>) -> Result<SetPacking> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            b.dedup();
            if b.len() != k || b.iter().any(|&x| x == 0 || x > n) {
                return Err(Error::InvalidArgs(format!("{b:?} is not a {k}-subset of 1..={n}")));
            }
            if !seen.insert(b.clone()) {
                return Err(Error::InvalidArgs(format!("block {b:?} repeats")));
            }
            out.push(b);
        }
        Ok(SetPacking { n, k, blocks: out })
    }

    pub fn size(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPackingReport {
    pub valid: bool,
    pub max_load: u64,
    /// The lexicographically first t-subset over the cap, with its load.
    pub witness: Option<(Vec<usize>, u64)>,
}

pub fn set_packing_check(p: &SetPacking, t: usize, lambda: u64) -> Result<SetPackingReport> {
    if t == 0 || t > p.k {
        return Err(Error::InvalidArgs(format!("need 1 <= t <= k={}, got t={t}", p.k)));
    }
    let mut load: HashMap<Vec<usize>, u64> = HashMap::new();
    for b in &p.blocks {
        for sub in combinations(p.k, t) {
            *load.entry(sub.iter().map(|&i| b[i]).collect()).or_default() += 1;
        }
    }
    let max_load = load.values().copied().max().unwrap_or(0);
    let witness = load
        .into_iter()
        .filter(|&(_, l)| l > lambda)
        .min_by(|a, b| a.0.cmp(&b.0));
    Ok(SetPackingReport {
        valid: witness.is_none(),
        max_load,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPackingResult {
    pub packing: SetPacking,
    pub size: usize,
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub explored: u64,
}

fn packing_problem(n: usize, k: usize, t: usize, lambda: u64) -> Result<(Vec<Vec<usize>>, Incidence)> {
    if !(1 <= t && t <= k && k <= n) || lambda == 0 {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= t <= k <= n and lambda >= 1, got n={n} k={k} t={t} lambda={lambda}"
        )));
    }
    let cands: Vec<Vec<usize>> = combinations(n, k).collect();
    if cands.len() > 100_000 {
        return Err(Error::BudgetExceeded {
            requested: format!("{} blocks", cands.len()),
            budget: 100_000,
        });
    }
    let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
    let cand_cons = cands
        .iter()
        .map(|b| {
            combinations(k, t)
                .map(|sub| {
                    let key: Vec<usize> = sub.iter().map(|&i| b[i]).collect();
                    let next = ids.len() as u32;
                    *ids.entry(key).or_insert(next)
                })
                .collect()
        })
        .collect();
    Ok((cands, Incidence::new(cand_cons, ids.len())))
}

fn packing_from(n: usize, k: usize, cands: &[Vec<usize>], counts: &[u32]) -> Result<SetPacking> {
    let blocks = cands
        .iter()
        .zip(counts)
        .filter(|(_, &c)| c > 0)
        .map(|(b, _)| b.iter().map(|&x| x + 1).collect())
        .collect();
    SetPacking::new(n, k, blocks)
}

/// A maximal (not necessarily maximum) packing by load-balancing greedy.
pub fn greedy_set_packing(n: usize, k: usize, t: usize, lambda: u64) -> Result<SetPacking> {
    let (cands, inc) = packing_problem(n, k, t, lambda)?;
    let order: Vec<u32> = (0..cands.len() as u32).collect();
    let counts = greedy_pack(&inc, lambda.min(u32::MAX as u64) as u32, 1, &order);
    packing_from(n, k, &cands, &counts)
}

/// Largest family of k-subsets of {1..n} with every t-subset in at most λ
/// blocks, by the same branch and bound used for subspace codes.
pub fn exact_set_packing(n: usize, k: usize, t: usize, lambda: u64, node_budget: u64, seconds: f64) -> Result<SetPackingResult> {
    let (cands, inc) = packing_problem(n, k, t, lambda)?;
    let cap = lambda.min(u32::MAX as u64) as u32;
    // the symmetric group is transitive on blocks, so some optimum uses the first
    let out = PackSearch::run(&inc, cap, 1, vec![0; cands.len()], u64::MAX, true, Limits::new(node_budget, seconds));
    let packing = packing_from(n, k, &cands, &out.counts)?;
    debug_assert!(set_packing_check(&packing, t, lambda)?.valid);
    Ok(SetPackingResult {
        size: packing.size(),
        packing,
        optimal: out.optimal,
        budget_exhausted: out.exhausted,
        explored: out.explored,
    })
}

/// Closed forms for A(n, n−2, n−3; λ) at λ = 1, 2, 3. Complementing blocks
/// turns these into graphs on n vertices where every triangle holds at most
/// λ edges: a matching, a triangle-free (Turán) graph, and K_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TuranValues {
    pub n: usize,
    pub lambda1: u64,
    pub lambda2: u64,
    pub lambda3: u64,
}

pub fn turan_values(n: usize) -> Result<TuranValues> {
    if n < 4 {
        return Err(Error::InvalidArgs(format!("n must be at least 4, got {n}")));
    }
    let n64 = n as u64;
    Ok(TuranValues {
        n,
        lambda1: n64 / 2,
        lambda2: n64 * n64 / 4,
        lambda3: n64 * (n64 - 1) / 2,
    })
}

fn support(rows: &[Vec<Elem>], len: usize) -> usize {
    (0..len).filter(|&i| rows.iter().any(|r| r[i] != 0)).count()
}

/// d_1..d_h: the smallest support of an r-dimensional subcode, found by
/// pushing every r-subspace of the message space through the generator.
pub fn generalized_weights(c: &LinearCode) -> Result<Vec<usize>> {
    let f = c.field();
    let h = c.dim();
    let mut budget = HIERARCHY_BUDGET;
    let mut out = Vec::with_capacity(h);
    for r in 1..=h {
        let subs = enumerate_grassmannian(f, h, r, budget)?;
        budget -= subs.len() as u64;
        let best = subs
            .iter()
            .map(|u| support(&u.basis().mul(&c.generator).expect("shapes agree").row_vecs(), c.length()))
            .min()
            .expect("the Grassmannian is nonempty");
        out.push(best);
    }
    Ok(out)
}

/// c_1..c_M: the smallest union support of α distinct nonzero codewords,
/// for α up to `max_alpha` (capped at the number of nonzero codewords).
pub fn covering_hierarchy(c: &LinearCode, max_alpha: usize) -> Result<Vec<usize>> {
    let words: Vec<u64> = c
        .codewords()?
        .iter()
        .skip(1)
        .map(|w| w.iter().enumerate().fold(0u64, |m, (i, &x)| if x != 0 { m | 1 << i } else { m }))
        .collect();
    if c.length() > 64 {
        return Err(Error::Unsupported("covering hierarchy needs length <= 64".into()));
    }
    let m = words.len();
    let top = max_alpha.min(m);
    let mut visits = 0u64;
    let mut binom = 1u64;
    for a in 1..=top {
        binom = binom.saturating_mul((m - a + 1) as u64) / a as u64;
        visits = visits.saturating_add(binom);
    }
    if visits > HIERARCHY_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: format!("{visits} codeword subsets"),
            budget: HIERARCHY_BUDGET,
        });
    }
    // best[a] over all subsets, by a depth-first walk of increasing index sets
    let mut best = vec![usize::MAX; top + 1];
    fn walk(words: &[u64], start: usize, depth: usize, mask: u64, best: &mut [usize]) {
        if depth + 1 >= best.len() {
            return;
        }
        for i in start..words.len() {
            let m = mask | words[i];
            let s = m.count_ones() as usize;
            if s < best[depth + 1] {
                best[depth + 1] = s;
            }
            walk(words, i + 1, depth + 1, m, best);
        }
    }
    walk(&words, 0, 0, 0, &mut best);
    Ok(best[1..].to_vec())
}
