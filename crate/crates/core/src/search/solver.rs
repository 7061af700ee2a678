//! Packing and covering over an incidence structure: candidates, each
//! touching a fixed list of constraints. A packing keeps every constraint
//! load at most its capacity; a cover brings every load up to a demand.
//! Used for subspaces (t-subspaces inside k-subspaces) and for plain sets.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub(crate) struct Incidence {
    pub cand_cons: Vec<Vec<u32>>,
    pub cons_cands: Vec<Vec<u32>>,
}

impl Incidence {
    pub fn new(cand_cons: Vec<Vec<u32>>, n_cons: usize) -> Self {
        let mut cons_cands = vec![Vec::new(); n_cons];
        for (c, cs) in cand_cons.iter().enumerate() {
            for &p in cs {
                cons_cands[p as usize].push(c as u32);
            }
        }
        Incidence { cand_cons, cons_cands }
    }

    pub fn n_cands(&self) -> usize {
        self.cand_cons.len()
    }

    pub fn n_cons(&self) -> usize {
        self.cons_cands.len()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub nodes: u64,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn new(nodes: u64, seconds: f64) -> Self {
        Limits {
            nodes,
            deadline: Instant::now().checked_add(Duration::from_secs_f64(seconds.max(0.0))),
        }
    }
}

pub(crate) struct Outcome {
    /// copies of each candidate
    pub counts: Vec<u32>,
    pub optimal: bool,
    pub exhausted: bool,
    pub explored: u64,
}

struct Budget {
    limits: Limits,
    explored: u64,
    hit: bool,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.explored += 1;
        if self.explored > self.limits.nodes {
            self.hit = true;
        } else if self.explored.is_multiple_of(1024) {
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.hit = true;
                }
            }
        }
        self.hit
    }
}

/// Greedy packing: repeatedly add the feasible candidate whose addition
/// gives the smallest maximum load, then the smallest total load over its
/// constraints. Ties go to the earlier candidate in `order`.
pub(crate) fn greedy_pack(inc: &Incidence, cap: u32, mult_cap: u32, order: &[u32]) -> Vec<u32> {
    let mut load = vec![0u32; inc.n_cons()];
    let mut counts = vec![0u32; inc.n_cands()];
    loop {
        let mut best: Option<((u32, u64), u32)> = None;
        for &c in order {
            if counts[c as usize] >= mult_cap {
                continue;
            }
            let cons = &inc.cand_cons[c as usize];
            if cons.iter().any(|&p| load[p as usize] >= cap) {
                continue;
            }
            let mx = cons.iter().map(|&p| load[p as usize] + 1).max().unwrap_or(0);
            let sum: u64 = cons.iter().map(|&p| load[p as usize] as u64).sum();
            if best.is_none_or(|(s, _)| (mx, sum) < s) {
                best = Some(((mx, sum), c));
            }
        }
        let Some((_, c)) = best else { break };
        counts[c as usize] += 1;
        for &p in &inc.cand_cons[c as usize] {
            load[p as usize] += 1;
        }
    }
    counts
}

/// Best greedy packing over `restarts` runs: run 0 in canonical order, later
/// runs in seeded random orders.
pub(crate) fn greedy_pack_restarts(
    inc: &Incidence,
    cap: u32,
    mult_cap: u32,
    seed: u64,
    restarts: u32,
    limits: Limits,
) -> (Vec<u32>, u64, bool) {
    let canonical: Vec<u32> = (0..inc.n_cands() as u32).collect();
    let mut best = greedy_pack(inc, cap, mult_cap, &canonical);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runs = 1u64;
    let mut cut = false;
    for _ in 1..restarts.max(1) {
        if limits.deadline.is_some_and(|d| Instant::now() >= d) || runs >= limits.nodes {
            cut = true;
            break;
        }
        let mut order = canonical.clone();
        order.shuffle(&mut rng);
        let got = greedy_pack(inc, cap, mult_cap, &order);
        runs += 1;
        if got.iter().sum::<u32>() > best.iter().sum::<u32>() {
            best = got;
        }
    }
    (best, runs, cut)
}

/// Greedy cover: add the candidate meeting the most unmet demand.
pub(crate) fn greedy_cover(inc: &Incidence, demand: u32) -> Option<Vec<u32>> {
    let mut def = vec![demand; inc.n_cons()];
    let mut counts = vec![0u32; inc.n_cands()];
    loop {
        if def.iter().all(|&d| d == 0) {
            return Some(counts);
        }
        let mut best: Option<(usize, u32)> = None;
        for c in 0..inc.n_cands() {
            if counts[c] > 0 {
                continue;
            }
            let gain = inc.cand_cons[c].iter().filter(|&&p| def[p as usize] > 0).count();
            if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, c as u32));
            }
        }
        let (_, c) = best?;
        counts[c as usize] = 1;
        for &p in &inc.cand_cons[c as usize] {
            def[p as usize] = def[p as usize].saturating_sub(1);
        }
    }
}

enum Undo {
    Res(u32),
    Cnt(u32, u32),
    Avail(u32),
    Used(u32),
}

/// Exact maximum packing. Branches on the open constraint with the fewest
/// remaining candidate copies: either one of those candidates goes in (the
/// first chosen one in index order) or none does and the remaining capacity
/// is wasted. Since every candidate touches `d` constraints, the final size
/// is (total capacity − waste)/d, and the waste that is already forced bounds
/// the best reachable size.
pub(crate) struct PackSearch<'a> {
    inc: &'a Incidence,
    d: u64,
    total_cap: u64,
    mult_cap: u32,
    res: Vec<u32>,
    cnt: Vec<u32>,
    avail: Vec<bool>,
    used: Vec<u32>,
    size: u64,
    trail: Vec<Undo>,
    best: u64,
    best_counts: Vec<u32>,
    target: u64,
    budget: Budget,
}

impl<'a> PackSearch<'a> {
    pub fn run(
        inc: &'a Incidence,
        cap: u32,
        mult_cap: u32,
        incumbent: Vec<u32>,
        upper: u64,
        force_first: bool,
        limits: Limits,
    ) -> Outcome {
        let d = inc.cand_cons.first().map_or(1, |c| c.len().max(1)) as u64;
        debug_assert!(inc.cand_cons.iter().all(|c| c.len() as u64 == d));
        let m = inc.n_cons();
        let cnt: Vec<u32> = inc.cons_cands.iter().map(|cs| cs.len() as u32 * mult_cap).collect();
        let best = incumbent.iter().map(|&x| x as u64).sum();
        let mut s = PackSearch {
            inc,
            d,
            total_cap: cap as u64 * m as u64,
            mult_cap,
            res: vec![cap; m],
            cnt,
            avail: vec![true; inc.n_cands()],
            used: vec![0; inc.n_cands()],
            size: 0,
            trail: Vec::new(),
            best,
            best_counts: incumbent,
            target: upper,
            budget: Budget {
                limits,
                explored: 0,
                hit: false,
            },
        };
        if s.best < s.target && inc.n_cands() > 0 {
            if force_first {
                s.include(0);
            }
            s.dfs();
        }
        let done = !s.budget.hit;
        Outcome {
            counts: s.best_counts,
            optimal: done || s.best >= s.target,
            exhausted: s.budget.hit && s.best < s.target,
            explored: s.budget.explored,
        }
    }

    fn copies_left(&self, c: usize) -> u32 {
        self.mult_cap - self.used[c]
    }

    fn set_cnt(&mut self, p: usize, v: u32) {
        self.trail.push(Undo::Cnt(p as u32, self.cnt[p]));
        self.cnt[p] = v;
    }

    fn remove(&mut self, c: usize) {
        if !self.avail[c] {
            return;
        }
        let left = self.copies_left(c);
        self.avail[c] = false;
        self.trail.push(Undo::Avail(c as u32));
        for i in 0..self.inc.cand_cons[c].len() {
            let p = self.inc.cand_cons[c][i] as usize;
            let v = self.cnt[p] - left;
            self.set_cnt(p, v);
        }
    }

    fn include(&mut self, c: usize) {
        self.used[c] += 1;
        self.size += 1;
        self.trail.push(Undo::Used(c as u32));
        let mut closed = Vec::new();
        for i in 0..self.inc.cand_cons[c].len() {
            let p = self.inc.cand_cons[c][i] as usize;
            self.res[p] -= 1;
            self.trail.push(Undo::Res(p as u32));
            let v = self.cnt[p] - 1;
            self.set_cnt(p, v);
            if self.res[p] == 0 {
                closed.push(p);
            }
        }
        if self.used[c] == self.mult_cap {
            // no copies left; cnt already reflects that
            self.avail[c] = false;
            self.trail.push(Undo::Avail(c as u32));
        }
        for p in closed {
            for j in 0..self.inc.cons_cands[p].len() {
                let c2 = self.inc.cons_cands[p][j] as usize;
                self.remove(c2);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Res(p) => self.res[p as usize] += 1,
                Undo::Cnt(p, v) => self.cnt[p as usize] = v,
                Undo::Avail(c) => self.avail[c as usize] = true,
                Undo::Used(c) => {
                    self.used[c as usize] -= 1;
                    self.size -= 1;
                }
            }
        }
    }

    fn dfs(&mut self) {
        if self.budget.tick() || self.best >= self.target {
            return;
        }
        let mut waste = 0u64;
        let mut pick: Option<(u32, usize)> = None;
        for p in 0..self.res.len() {
            let (r, c) = (self.res[p], self.cnt[p]);
            waste += r.saturating_sub(c) as u64;
            if r > 0 && c > 0 && pick.is_none_or(|(b, _)| c < b) {
                pick = Some((c, p));
            }
        }
        let reach = (self.total_cap - waste) / self.d;
        if reach <= self.best {
            return;
        }
        let Some((_, p)) = pick else {
            // every constraint is full or has no candidates left
            if self.size > self.best {
                self.best = self.size;
                self.best_counts = self.used.clone();
            }
            return;
        };
        let options: Vec<u32> = self.inc.cons_cands[p].iter().copied().filter(|&c| self.avail[c as usize]).collect();
        let outer = self.trail.len();
        for &c in &options {
            let mark = self.trail.len();
            self.include(c as usize);
            self.dfs();
            self.undo_to(mark);
            if self.budget.hit || self.best >= self.target {
                break;
            }
            self.remove(c as usize);
        }
        if !self.budget.hit && self.best < self.target {
            self.dfs();
        }
        self.undo_to(outer);
    }
}

/// Exact minimum cover with distinct candidates. Branches on the
/// constraint with the least slack between available candidates and unmet
/// demand; bound = max(⌈Σ unmet/d⌉, max unmet).
pub(crate) struct CoverSearch<'a> {
    inc: &'a Incidence,
    d: u64,
    def: Vec<u32>,
    cnt: Vec<u32>,
    avail: Vec<bool>,
    chosen: Vec<bool>,
    size: u64,
    best: u64,
    best_set: Option<Vec<bool>>,
    floor: u64,
    budget: Budget,
}

impl<'a> CoverSearch<'a> {
    pub fn run(inc: &'a Incidence, demand: u32, incumbent: Option<Vec<u32>>, force_first: bool, limits: Limits) -> Outcome {
        let d = inc.cand_cons.first().map_or(1, |c| c.len().max(1)) as u64;
        let m = inc.n_cons();
        let total = demand as u64 * m as u64;
        let floor = if demand == 0 { 0 } else { total.div_ceil(d).max(demand as u64) };
        let (best, best_set) = match incumbent {
            Some(c) => (c.iter().map(|&x| x as u64).sum(), Some(c.iter().map(|&x| x > 0).collect())),
            None => (u64::MAX, None),
        };
        let mut s = CoverSearch {
            inc,
            d,
            def: vec![demand; m],
            cnt: inc.cons_cands.iter().map(|c| c.len() as u32).collect(),
            avail: vec![true; inc.n_cands()],
            chosen: vec![false; inc.n_cands()],
            size: 0,
            best,
            best_set,
            floor,
            budget: Budget {
                limits,
                explored: 0,
                hit: false,
            },
        };
        if s.best > s.floor {
            if force_first && demand > 0 && inc.n_cands() > 0 {
                s.take(0);
            }
            s.dfs();
        }
        let counts = match &s.best_set {
            Some(set) => set.iter().map(|&b| b as u32).collect(),
            None => vec![0; inc.n_cands()],
        };
        Outcome {
            counts,
            optimal: s.best_set.is_some() && (!s.budget.hit || s.best <= s.floor),
            exhausted: s.budget.hit && s.best > s.floor,
            explored: s.budget.explored,
        }
    }

    fn take(&mut self, c: usize) -> Vec<usize> {
        self.chosen[c] = true;
        self.avail[c] = false;
        self.size += 1;
        let mut hit = Vec::new();
        for &p in &self.inc.cand_cons[c] {
            let p = p as usize;
            self.cnt[p] -= 1;
            if self.def[p] > 0 {
                self.def[p] -= 1;
                hit.push(p);
            }
        }
        hit
    }

    fn untake(&mut self, c: usize, hit: &[usize]) {
        self.chosen[c] = false;
        self.avail[c] = true;
        self.size -= 1;
        for &p in &self.inc.cand_cons[c] {
            self.cnt[p as usize] += 1;
        }
        for &p in hit {
            self.def[p] += 1;
        }
    }

    fn drop_cand(&mut self, c: usize) {
        self.avail[c] = false;
        for &p in &self.inc.cand_cons[c] {
            self.cnt[p as usize] -= 1;
        }
    }

    fn restore_cand(&mut self, c: usize) {
        self.avail[c] = true;
        for &p in &self.inc.cand_cons[c] {
            self.cnt[p as usize] += 1;
        }
    }

    fn dfs(&mut self) {
        if self.budget.tick() || self.best <= self.floor {
            return;
        }
        let mut sum = 0u64;
        let mut mx = 0u32;
        let mut pick: Option<(i64, usize)> = None;
        for p in 0..self.def.len() {
            let (df, c) = (self.def[p], self.cnt[p]);
            if df == 0 {
                continue;
            }
            if c < df {
                return;
            }
            sum += df as u64;
            mx = mx.max(df);
            let slack = c as i64 - df as i64;
            if pick.is_none_or(|(s, _)| slack < s) {
                pick = Some((slack, p));
            }
        }
        let Some((_, p)) = pick else {
            if self.size < self.best {
                self.best = self.size;
                self.best_set = Some(self.chosen.clone());
            }
            return;
        };
        let lb = self.size + sum.div_ceil(self.d).max(mx as u64);
        if lb >= self.best {
            return;
        }
        let options: Vec<usize> = self.inc.cons_cands[p].iter().map(|&c| c as usize).filter(|&c| self.avail[c]).collect();
        let mut dropped = Vec::new();
        for &c in &options {
            let hit = self.take(c);
            self.dfs();
            self.untake(c, &hit);
            if self.budget.hit || self.best <= self.floor {
                break;
            }
            self.drop_cand(c);
            dropped.push(c);
            if self.cnt[p] < self.def[p] {
                break;
            }
        }
        for c in dropped.into_iter().rev() {
            self.restore_cand(c);
        }
    }
}
