use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared handle to a field context. Contexts are immutable once built.
pub type Field = Arc<FieldCtx>;

/// Field element encoding: the integer whose base-p digits are the
/// polynomial coefficients (least significant digit = constant term).
pub type Elem = u8;

/// Fixed moduli for the extension fields, little-endian coefficients,
/// leading 1 included. These are part of the file format: an element
/// encoding only means something relative to the modulus it was built with.
const MODULI: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

pub const MAX_Q: u32 = 256;

/// The finite field F_q, q = p^m <= 256, with full arithmetic tables.
pub struct FieldCtx {
    q: u32,
    p: u32,
    m: u32,
    modulus: Vec<u8>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    log: Vec<u16>,
    exp: Vec<Elem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        // one modulus per order, so the order identifies the field
        self.q == other.q
    }
}

impl Eq for FieldCtx {}

/// Builds (or fetches from the process-wide cache) the field of order `q`.
pub fn make_field(q: u32) -> Result<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&q) {
        return Ok(f.clone());
    }
    let f = Arc::new(FieldCtx::build(q)?);
    cache.lock().unwrap().insert(q, f.clone());
    Ok(f)
}

fn factor_prime_power(q: u32) -> Result<(u32, u32)> {
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::NotAPrimePower(q));
    }
    Ok((p, m))
}

// --- polynomials over F_p, little-endian coefficient vectors ---

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p * p - c * b[i] % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero element mod prime")
}

fn digits(x: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    let mut x = x;
    for _ in 0..m {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Irreducibility of a monic polynomial over F_p by trial division with
/// every monic polynomial of degree 1..=deg/2.
fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    fn build(q: u32) -> Result<FieldCtx> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::Unsupported(format!(
                "field order {q} outside 2..={MAX_Q}"
            )));
        }
        let (p, m) = factor_prime_power(q)?;
        let modulus: Vec<u8> = if m == 1 {
            Vec::new()
        } else {
            let entry = MODULI
                .iter()
                .find(|(pp, mm, _)| *pp == p && *mm == m)
                .ok_or_else(|| Error::Unsupported(format!("no modulus for {p}^{m}")))?;
            entry.2.to_vec()
        };
        if m > 1 {
            let f: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
            if !is_irreducible_mod_p(&f, p) {
                return Err(Error::Unsupported(format!(
                    "modulus for {p}^{m} is reducible"
                )));
            }
        }
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut neg = vec![0; qs];
        for a in 0..q {
            let da = digits(a, p, m);
            neg[a as usize] = undigits(&da.iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p) as Elem;
            for b in 0..q {
                let db = digits(b, p, m);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s, p) as Elem;
            }
        }
        let slow_mul = |a: u32, b: u32| -> u32 {
            if m == 1 {
                return a * b % p;
            }
            let da = digits(a, p, m);
            let db = digits(b, p, m);
            let mut prod = vec![0u32; (2 * m - 1) as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let f: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
            let mut r = poly_rem(&prod, &f, p);
            r.resize(m as usize, 0);
            undigits(&r, p)
        };
        // smallest generator of the multiplicative group
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1;
                for e in 1..=order {
                    x = slow_mul(x, g);
                    if x == 1 {
                        return e == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a field is cyclic");
        let mut exp = vec![0 as Elem; 2 * order as usize];
        let mut log = vec![0u16; qs];
        let mut x = 1u32;
        for e in 0..order {
            exp[e as usize] = x as Elem;
            exp[(e + order) as usize] = x as Elem;
            log[x as usize] = e as u16;
            x = slow_mul(x, generator);
        }
        let mut mul = vec![0 as Elem; qs * qs];
        let mut inv = vec![0 as Elem; qs];
        for a in 1..qs {
            inv[a] = exp[((order - log[a] as u32) % order) as usize];
            for b in 1..qs {
                mul[a * qs + b] = exp[log[a] as usize + log[b] as usize];
            }
        }
        Ok(FieldCtx {
            q,
            p,
            m,
            modulus,
            add,
            mul,
            neg,
            inv,
            log,
            exp,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Modulus coefficients (constant term first, leading 1 last); empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            None
        } else {
            Some(self.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Discrete log with respect to the table generator; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize] as u32)
    }

    /// `generator^e`.
    pub fn exp(&self, e: u32) -> Elem {
        self.exp[(e % (self.q - 1)) as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        match self.log(a) {
            None => 0,
            Some(l) => {
                let ord = (self.q - 1) as u64;
                self.exp(((l as u64 * (e % ord)) % ord) as u32)
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|x| x as Elem)
    }

    pub fn contains(&self, x: u32) -> bool {
        x < self.q
    }

    /// dst[j] -= c * src[j]
    #[inline]
    pub(crate) fn axpy_neg(&self, dst: &mut [Elem], src: &[Elem], c: Elem) {
        if c == 0 {
            return;
        }
        let qs = self.q as usize;
        let nc = self.neg[c as usize] as usize;
        let mrow = &self.mul[nc * qs..(nc + 1) * qs];
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.add[*d as usize * qs + mrow[s as usize] as usize];
            }
        }
    }

    #[inline]
    pub(crate) fn scale(&self, v: &mut [Elem], c: Elem) {
        let qs = self.q as usize;
        let mrow = &self.mul[c as usize * qs..(c as usize + 1) * qs];
        for x in v.iter_mut() {
            *x = mrow[*x as usize];
        }
    }

    /// Standard dot product.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}
