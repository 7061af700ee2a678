//! Grassmannian codes as multisets of k-subspaces, and the two distance
//! measures: the α-Grassmannian covering (every α codewords span at least
//! δ+k dimensions) and the λ-multiple property (every t-subspace lies in at
//! most λ codewords).

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfq::{Echelon, Field};
use crate::grassmann::{enumerate_grassmannian, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Word {
    pub space: Subspace,
    pub mult: u32,
}

/// A multiset of k-subspaces of F_q^n. Distinct subspaces are stored once
/// with a positive multiplicity, in insertion order.
#[derive(Clone, Debug)]
pub struct GrassCode {
    field: Field,
    n: usize,
    k: usize,
    words: Vec<Word>,
    index: HashMap<Subspace, usize>,
}

impl Serialize for GrassCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct W {
            mult: u32,
            basis: Vec<Vec<u8>>,
        }
        let words: Vec<W> = self
            .words
            .iter()
            .map(|w| W {
                mult: w.mult,
                basis: w.space.basis().row_vecs(),
            })
            .collect();
        let mut st = s.serialize_struct("GrassCode", 6)?;
        st.serialize_field("format", "grasscode")?;
        st.serialize_field("q", &self.field.order())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("count", &self.words.len())?;
        st.serialize_field("words", &words)?;
        st.end()
    }
}

impl PartialEq for GrassCode {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order()
            && self.n == other.n
            && self.k == other.k
            && self.words == other.words
    }
}

impl Eq for GrassCode {}

impl GrassCode {
    pub fn new(field: &Field, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgs(format!("k={k} > n={n}")));
        }
        Ok(GrassCode {
            field: field.clone(),
            n,
            k,
            words: Vec::new(),
            index: HashMap::new(),
        })
    }

    /// A simple code (repeats merge into multiplicities).
    pub fn from_subspaces(
        field: &Field,
        n: usize,
        k: usize,
        spaces: impl IntoIterator<Item = Subspace>,
    ) -> Result<Self> {
        let mut c = Self::new(field, n, k)?;
        for s in spaces {
            c.push(s, 1)?;
        }
        Ok(c)
    }

    /// Adds `mult` copies of `space`, merging with an existing entry.
    pub fn push(&mut self, space: Subspace, mult: u32) -> Result<()> {
        if mult == 0 {
            return Err(Error::InvalidArgs("multiplicity must be positive".into()));
        }
        if space.field().order() != self.field.order() || space.ambient_dim() != self.n || space.dim() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "a {}-subspace of F_{}^{} in a code of {}-subspaces of F_{}^{}",
                space.dim(),
                space.field().order(),
                space.ambient_dim(),
                self.k,
                self.field.order(),
                self.n
            )));
        }
        match self.index.get(&space) {
            Some(&i) => self.words[i].mult += mult,
            None => {
                self.index.insert(space.clone(), self.words.len());
                self.words.push(Word { space, mult });
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn distinct(&self) -> usize {
        self.words.len()
    }

    /// Number of codewords counted with multiplicity.
    pub fn size(&self) -> u64 {
        self.words.iter().map(|w| w.mult as u64).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.words.iter().all(|w| w.mult == 1)
    }

    pub fn position(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn multiplicity(&self, s: &Subspace) -> u32 {
        self.position(s).map_or(0, |i| self.words[i].mult)
    }

    /// Word index of every codeword in multiset order (each word repeated
    /// `mult` times in a row).
    pub fn slots(&self) -> Vec<usize> {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, w)| std::iter::repeat_n(i, w.mult as usize))
            .collect()
    }

    /// Every multiplicity multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Result<GrassCode> {
        if factor == 0 {
            return Err(Error::InvalidArgs("scale factor must be positive".into()));
        }
        let mut c = self.clone();
        for w in &mut c.words {
            w.mult *= factor;
        }
        Ok(c)
    }

    fn span_rank(&self, word_indices: &[usize]) -> usize {
        let mut e = Echelon::new(&self.field, self.n);
        for &i in word_indices {
            e.insert_all(self.words[i].space.basis_rows());
        }
        e.rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// α codewords (word indices, repeated up to multiplicity) spanning too little.
    Covering { words: Vec<usize>, span_dim: usize },
    /// A t-subspace and the words containing it, with total load over λ.
    Multiple {
        subspace: Subspace,
        words: Vec<usize>,
        load: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    /// Covering check on a code with fewer than α codewords.
    pub vacuous: bool,
    /// α = 1: the covering condition only restates dim = k.
    pub degenerate: bool,
    pub witness: Option<Witness>,
}

impl ValidityReport {
    fn ok() -> Self {
        ValidityReport {
            valid: true,
            vacuous: false,
            degenerate: false,
            witness: None,
        }
    }

    /// Re-checks the witness against `code`: true when it shows a genuine
    /// violation of the given covering (`delta`) or multiple (`lambda`) bound.
    pub fn replay(&self, code: &GrassCode, covering_delta: Option<usize>, multiple_lambda: Option<u64>) -> bool {
        match &self.witness {
            None => false,
            Some(Witness::Covering { words, span_dim }) => {
                let mut counts: HashMap<usize, u32> = HashMap::new();
                for &w in words {
                    *counts.entry(w).or_default() += 1;
                }
                let within = counts
                    .iter()
                    .all(|(&w, &c)| w < code.distinct() && c <= code.words[w].mult);
                let dim = code.span_rank(words);
                within && dim == *span_dim && covering_delta.is_some_and(|d| dim < d + code.k)
            }
            Some(Witness::Multiple { subspace, words, load }) => {
                let containing: Vec<usize> = (0..code.distinct())
                    .filter(|&i| code.words[i].space.contains(subspace))
                    .collect();
                let total: u64 = containing.iter().map(|&i| code.words[i].mult as u64).sum();
                containing == *words && total == *load && multiple_lambda.is_some_and(|l| total > l)
            }
        }
    }
}

/// Minimum span dimension over α-multisubsets, searched over sets of
/// distinct words whose multiplicities can fill α slots. With `cutoff`, stops
/// at the first set spanning fewer than `cutoff` dimensions.
fn min_span(code: &GrassCode, alpha: u64, cutoff: Option<usize>) -> Option<(usize, Vec<usize>)> {
    let words = code.words();
    let m = words.len();
    let mut suffix = vec![0u64; m + 1];
    for i in (0..m).rev() {
        suffix[i] = suffix[i + 1] + words[i].mult as u64;
    }
    struct Ctx<'a> {
        code: &'a GrassCode,
        alpha: u64,
        suffix: Vec<u64>,
        best: usize,
        best_set: Option<Vec<usize>>,
        first_only: bool,
        floor: usize,
        done: bool,
    }
    fn dfs(ctx: &mut Ctx, start: usize, chosen: &mut Vec<usize>, filled: u64, ech: &Echelon) {
        for j in start..ctx.code.distinct() {
            if ctx.done || filled + ctx.suffix[j] < ctx.alpha {
                return;
            }
            let mut e = ech.clone();
            e.insert_all(ctx.code.words[j].space.basis_rows());
            if e.rank() >= ctx.best {
                continue;
            }
            chosen.push(j);
            let f = filled + ctx.code.words[j].mult as u64;
            if f >= ctx.alpha {
                ctx.best = e.rank();
                ctx.best_set = Some(chosen.clone());
                if ctx.first_only || ctx.best <= ctx.floor {
                    ctx.done = true;
                }
            } else {
                dfs(ctx, j + 1, chosen, f, &e);
            }
            chosen.pop();
        }
    }
    let mut ctx = Ctx {
        code,
        alpha,
        suffix,
        best: cutoff.unwrap_or(code.n + 1),
        best_set: None,
        first_only: cutoff.is_some(),
        floor: code.k,
        done: false,
    };
    dfs(&mut ctx, 0, &mut Vec::new(), 0, &Echelon::new(code.field(), code.n));
    let set = ctx.best_set?;
    // expand distinct words into exactly α slots
    let mut slots = Vec::with_capacity(alpha as usize);
    for &w in &set {
        for _ in 0..code.words[w].mult {
            if (slots.len() as u64) < alpha {
                slots.push(w);
            }
        }
    }
    Some((ctx.best, slots))
}

/// The minimum α-Grassmannian covering: the least dimension spanned by any
/// α codewords (a word may be used up to its multiplicity).
pub fn alpha_covering(code: &GrassCode, alpha: u64) -> Result<usize> {
    if alpha == 0 {
        return Err(Error::InvalidArgs("alpha must be at least 1".into()));
    }
    if code.size() < alpha {
        return Err(Error::TooFewCodewords {
            have: code.size(),
            need: alpha,
        });
    }
    Ok(min_span(code, alpha, None).expect("size >= alpha").0)
}

/// The minimum α-subset with its span, for reporting.
pub fn alpha_covering_witness(code: &GrassCode, alpha: u64) -> Result<(usize, Vec<usize>)> {
    alpha_covering(code, alpha)?;
    Ok(min_span(code, alpha, None).expect("size >= alpha"))
}

/// Checks that the code is an α-(n,k,δ)^c_q code.
pub fn is_covering_code(code: &GrassCode, alpha: u64, delta: usize) -> Result<ValidityReport> {
    if alpha == 0 || delta == 0 {
        return Err(Error::InvalidArgs("alpha and delta must be at least 1".into()));
    }
    let mut rep = ValidityReport::ok();
    rep.degenerate = alpha == 1;
    if code.size() < alpha {
        rep.vacuous = true;
        return Ok(rep);
    }
    if let Some((span_dim, words)) = min_span(code, alpha, Some(delta + code.k)) {
        rep.valid = false;
        rep.witness = Some(Witness::Covering { words, span_dim });
    }
    Ok(rep)
}

/// Load of every t-subspace that lies in some codeword.
fn t_loads(code: &GrassCode, t: usize) -> Result<HashMap<Subspace, (u64, Vec<usize>)>> {
    let mut loads: HashMap<Subspace, (u64, Vec<usize>)> = HashMap::new();
    for (i, w) in code.words.iter().enumerate() {
        for s in w.space.subspaces(t)? {
            let e = loads.entry(s).or_default();
            e.0 += w.mult as u64;
            e.1.push(i);
        }
    }
    Ok(loads)
}

fn check_t(code: &GrassCode, t: usize) -> Result<()> {
    if t == 0 || t > code.k {
        return Err(Error::InvalidArgs(format!(
            "t={t} must satisfy 1 <= t <= k={}",
            code.k
        )));
    }
    Ok(())
}

/// The smallest λ for which the code is a t-(n,k,λ)^m_q code, with the
/// canonically-first t-subspace attaining it.
pub fn max_multiplicity_witness(code: &GrassCode, t: usize) -> Result<(u64, Option<(Subspace, Vec<usize>)>)> {
    check_t(code, t)?;
    let loads = t_loads(code, t)?;
    let best = loads
        .into_iter()
        .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then_with(|| b.0.cmp(&a.0)));
    Ok(match best {
        None => (0, None),
        Some((s, (load, words))) => (load, Some((s, words))),
    })
}

pub fn max_multiplicity(code: &GrassCode, t: usize) -> Result<u64> {
    Ok(max_multiplicity_witness(code, t)?.0)
}

/// Checks that every t-subspace lies in at most λ codewords.
pub fn is_multiple_code(code: &GrassCode, t: usize, lambda: u64) -> Result<ValidityReport> {
    if lambda == 0 {
        return Err(Error::InvalidArgs("lambda must be at least 1".into()));
    }
    check_t(code, t)?;
    let loads = t_loads(code, t)?;
    let mut rep = ValidityReport::ok();
    let worst = loads
        .into_iter()
        .filter(|(_, (l, _))| *l > lambda)
        .min_by(|a, b| a.0.cmp(&b.0));
    if let Some((subspace, (load, words))) = worst {
        rep.valid = false;
        rep.witness = Some(Witness::Multiple { subspace, words, load });
    }
    Ok(rep)
}

/// Minimum pairwise Grassmannian distance of a simple code.
pub fn min_distance(code: &GrassCode) -> Result<usize> {
    if !code.is_simple() {
        return Err(Error::NotSimple);
    }
    if code.size() < 2 {
        return Err(Error::TooFewCodewords {
            have: code.size(),
            need: 2,
        });
    }
    let w = code.words();
    let mut best = code.k;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let d = code.k - w[i].space.intersection_dim(&w[j].space)?;
            best = best.min(d);
        }
    }
    debug_assert_eq!(Some(best + code.k), alpha_covering(code, 2).ok());
    Ok(best)
}

/// Word-wise orthogonal complement; multiplicities are kept.
pub fn dualize(code: &GrassCode) -> GrassCode {
    let mut d = GrassCode::new(&code.field, code.n, code.n - code.k).expect("n-k <= n");
    for w in &code.words {
        d.push(w.space.orthogonal_complement(), w.mult)
            .expect("complement has the dual dimension");
    }
    d
}

/// `G_q(n,k) \ C` for a simple code, in canonical order.
pub fn complement(code: &GrassCode, budget: u64) -> Result<GrassCode> {
    if !code.is_simple() {
        return Err(Error::NotSimple);
    }
    let all = enumerate_grassmannian(&code.field, code.n, code.k, budget)?;
    GrassCode::from_subspaces(
        &code.field,
        code.n,
        code.k,
        all.into_iter().filter(|s| code.position(s).is_none()),
    )
}

/// Covering and multiple parameters of a code in one pass, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct CodeProfile {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub size: u64,
    pub distinct: usize,
    pub simple: bool,
    /// (α, minimum α-covering) for α = 1..=max_alpha
    pub alpha_covering: Vec<(u64, usize)>,
    /// (t, smallest valid λ) for t = 1..=k
    pub max_multiplicity: Vec<(usize, u64)>,
}

pub fn profile(code: &GrassCode, max_alpha: u64) -> Result<CodeProfile> {
    let alpha_cov = (1..=max_alpha.min(code.size()))
        .map(|a| alpha_covering(code, a).map(|c| (a, c)))
        .collect::<Result<Vec<_>>>()?;
    let mm = (1..=code.k)
        .map(|t| max_multiplicity(code, t).map(|l| (t, l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CodeProfile {
        q: code.q(),
        n: code.n,
        k: code.k,
        size: code.size(),
        distinct: code.distinct(),
        simple: code.is_simple(),
        alpha_covering: alpha_cov,
        max_multiplicity: mm,
    })
}
