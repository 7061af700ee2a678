//! Desarguesian spreads: F_{q^n} built as F_q[x]/(f), the nonzero elements
//! of the subfield F_{q^k} form a subgroup, and its cosets (with 0 added) are
//! k-dimensional F_q-subspaces partitioning F_{q^n}.

use crate::codes::GrassCode;
use crate::error::{Error, Result};
use crate::gfq::{make_field, Elem, Field};
use crate::grassmann::Subspace;

/// Arithmetic in F_q[x]/(modulus); elements are coefficient vectors of length n.
struct Ext {
    f: Field,
    modulus: Vec<Elem>, // monic, degree n, little-endian
    n: usize,
}

impl Ext {
    fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.f;
        let mut prod = vec![0 as Elem; 2 * self.n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for d in (self.n..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                for (i, &m) in self.modulus.iter().enumerate() {
                    let idx = d - self.n + i;
                    prod[idx] = f.sub(prod[idx], f.mul(c, m));
                }
            }
        }
        prod.truncate(self.n);
        prod
    }

    fn pow(&self, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn one(&self) -> Vec<Elem> {
        let mut v = vec![0; self.n];
        v[0] = 1;
        v
    }
}

/// Remainder of `a` modulo monic `b` over F_q.
fn poly_rem(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomials of degree `d` in lexicographic order of their lower
/// coefficients (read as base-q digits).
fn monic(q: u32, d: usize) -> impl Iterator<Item = Vec<Elem>> {
    let count = (q as u64).pow(d as u32);
    (0..count).map(move |mut x| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push((x % q as u64) as Elem);
            x /= q as u64;
        }
        v.push(1);
        v
    })
}

fn irreducible(f: &Field, p: &[Elem]) -> bool {
    let n = p.len() - 1;
    (1..=n / 2).all(|d| monic(f.order(), d).all(|g| poly_rem(f, p, &g).iter().any(|&c| c != 0)))
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// A k-spread of F_q^n with (q^n−1)/(q^k−1) codewords.
pub fn spread_construct(n: usize, k: usize, q: u32) -> Result<GrassCode> {
    if k == 0 || k > n || !n.is_multiple_of(k) {
        return Err(Error::NotDivisible { n, k });
    }
    let f = make_field(q)?;
    let order = (q as u64)
        .checked_pow(n as u32)
        .filter(|&v| v <= 1 << 40)
        .ok_or_else(|| Error::Unsupported(format!("q^n = {q}^{n} is too large for the spread construction")))?
        - 1;
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        monic(q, n)
            .find(|p| irreducible(&f, p))
            .expect("irreducible polynomials exist in every degree")
    };
    let ext = Ext { f: f.clone(), modulus, n };
    let factors = prime_factors(order);
    let one = ext.one();
    let gamma = (1..=order)
        .map(|mut x| {
            let mut v = vec![0 as Elem; n];
            for c in v.iter_mut() {
                *c = (x % q as u64) as Elem;
                x /= q as u64;
            }
            v
        })
        .find(|g| factors.iter().all(|&r| ext.pow(g, order / r) != one))
        .expect("the multiplicative group is cyclic");
    let sub = (q as u64).pow(k as u32) - 1;
    let s = order / sub;
    let beta = ext.pow(&gamma, s);
    let mut code = GrassCode::new(&f, n, k)?;
    let mut g = ext.one();
    for _ in 0..s {
        let mut rows = Vec::with_capacity(k);
        let mut v = g.clone();
        for _ in 0..k {
            rows.push(v.clone());
            v = ext.mul(&v, &beta);
        }
        let space = Subspace::from_rows(&f, n, &rows)?;
        debug_assert_eq!(space.dim(), k);
        code.push(space, 1)?;
        g = ext.mul(&g, &gamma);
    }
    Ok(code)
}
