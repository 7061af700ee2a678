//! Brute-force reference computations shared by the integration tests.
//! Nothing here goes through the library's elimination, span or checker code.
#![allow(dead_code)]

use grasscov::codes::GrassCode;
use grasscov::gfq::{Elem, Field};
use grasscov::grassmann::{enumerate_grassmannian, Subspace, DEFAULT_ENUMERATION_BUDGET};
use rand::seq::SliceRandom;
use rand::Rng;

/// F_q from first principles: base-p digits (constant term first) as
/// polynomial coefficients, reduced by the library's published modulus.
#[derive(Clone, Debug)]
pub struct RefField {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    modulus: Vec<u32>,
}

impl RefField {
    pub fn from(f: &Field) -> RefField {
        RefField {
            p: f.characteristic(),
            m: f.degree(),
            q: f.order(),
            modulus: f.modulus().iter().map(|&c| c as u32).collect(),
        }
    }

    fn digits(&self, x: Elem) -> Vec<u32> {
        let mut x = x as u32;
        (0..self.m)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0u32, |acc, &c| acc * self.p + c) as Elem
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let (a, b) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            return ((a as u32 * b as u32) % self.p) as Elem;
        }
        let (a, b) = (self.digits(a), self.digits(b));
        let m = self.m as usize;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // modulus is monic of degree m: x^m = −(lower terms)
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..m {
                let sub = c * self.modulus[i] % self.p;
                let idx = top - m + i;
                prod[idx] = (prod[idx] + self.p - sub) % self.p;
            }
        }
        self.undigits(&prod[..m])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (0..self.q as Elem).find(|&b| self.mul(a, b) == 1)
    }

    pub fn rank(&self, rows: &[Vec<Elem>]) -> usize {
        let mut m: Vec<Vec<Elem>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, p);
            let inv = self.inv(m[rank][c]).unwrap();
            let pivot: Vec<Elem> = m[rank].iter().map(|&x| self.mul(x, inv)).collect();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            m[rank] = pivot;
            rank += 1;
        }
        rank
    }

    /// Every vector in the row span, by brute force over coefficient tuples.
    pub fn span(&self, rows: &[Vec<Elem>], n: usize) -> Vec<Vec<Elem>> {
        let total = (self.q as usize).pow(rows.len() as u32);
        let mut out: Vec<Vec<Elem>> = (0..total)
            .map(|mut idx| {
                let mut v = vec![0; n];
                for r in rows {
                    let c = (idx % self.q as usize) as Elem;
                    idx /= self.q as usize;
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = self.add(*x, self.mul(c, y));
                    }
                }
                v
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn rows_of(s: &Subspace) -> Vec<Vec<Elem>> {
    s.basis().row_vecs()
}

pub fn stacked_rank(rf: &RefField, spaces: &[&Subspace]) -> usize {
    let rows: Vec<Vec<Elem>> = spaces.iter().flat_map(|s| rows_of(s)).collect();
    if rows.is_empty() {
        0
    } else {
        rf.rank(&rows)
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Gaussian binomial by the product formula in u128.
pub fn qbinom(n: u32, k: u32, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Codeword slots: word index repeated by multiplicity.
pub fn slot_list(code: &GrassCode) -> Vec<&Subspace> {
    code.words()
        .iter()
        .flat_map(|w| std::iter::repeat_n(&w.space, w.mult as usize))
        .collect()
}

/// Smallest span dimension over all α-subsets of codeword slots.
pub fn ref_alpha_covering(rf: &RefField, code: &GrassCode, alpha: usize) -> usize {
    let slots = slot_list(code);
    subsets(slots.len(), alpha)
        .iter()
        .map(|s| stacked_rank(rf, &s.iter().map(|&i| slots[i]).collect::<Vec<_>>()))
        .min()
        .unwrap_or(usize::MAX)
}

/// Largest number of codeword slots containing a common t-subspace.
pub fn ref_max_multiplicity(rf: &RefField, field: &Field, code: &GrassCode, t: usize) -> u64 {
    let k = code.k();
    enumerate_grassmannian(field, code.n(), t, DEFAULT_ENUMERATION_BUDGET)
        .unwrap()
        .iter()
        .map(|ts| {
            code.words()
                .iter()
                .filter(|w| stacked_rank(rf, &[&w.space, ts]) == k)
                .map(|w| w.mult as u64)
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0)
}

pub fn ref_min_distance(rf: &RefField, code: &GrassCode) -> Option<usize> {
    let ws = code.words();
    let k = code.k();
    let mut best = None::<usize>;
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            let d = stacked_rank(rf, &[&ws[i].space, &ws[j].space]) - k;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// `size` distinct random codewords of G_q(n,k).
pub fn random_simple_code(field: &Field, n: usize, k: usize, size: usize, rng: &mut impl Rng) -> GrassCode {
    let mut all = enumerate_grassmannian(field, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap();
    all.shuffle(rng);
    all.truncate(size);
    GrassCode::from_subspaces(field, n, k, all).unwrap()
}

/// Random codewords with multiplicities in 1..=max_mult.
pub fn random_multiset_code(field: &Field, n: usize, k: usize, distinct: usize, max_mult: u32, rng: &mut impl Rng) -> GrassCode {
    let mut all = enumerate_grassmannian(field, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap();
    all.shuffle(rng);
    let mut code = GrassCode::new(field, n, k).unwrap();
    for s in all.into_iter().take(distinct) {
        code.push(s, rng.gen_range(1..=max_mult)).unwrap();
    }
    code
}

pub fn random_rows(q: u32, rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<Vec<Elem>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..q) as Elem).collect())
        .collect()
}
