//! Subspaces of F_q^n in canonical (RREF) form, enumeration of G_q(n,k),
//! Gaussian binomials, the Grassmannian distance and orthogonal complements.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::gfq::{Echelon, Elem, Field, MatrixFq};

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// A subspace of F_q^n, stored by its unique RREF basis.
#[derive(Clone)]
pub struct Subspace {
    n: usize,
    basis: MatrixFq,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of an arbitrary generator matrix.
    pub fn from_generators(m: &MatrixFq) -> Subspace {
        let r = m.rref();
        let basis = r.matrix.truncate_rows(r.rank);
        Subspace {
            n: m.cols(),
            basis,
            pivots: r.pivots,
        }
    }

    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<Elem>]) -> Result<Subspace> {
        Ok(Self::from_generators(&MatrixFq::from_rows(field, n, rows)?))
    }

    /// Builds from a basis that is already k×n, full rank and in RREF.
    /// Fails if it is not.
    pub fn from_rref_basis(basis: MatrixFq) -> Result<Subspace> {
        let r = basis.rref();
        if r.rank != basis.rows() || r.matrix != basis {
            return Err(Error::InvalidArgs(
                "basis is not a full-rank matrix in reduced row echelon form".into(),
            ));
        }
        Ok(Subspace {
            n: basis.cols(),
            basis,
            pivots: r.pivots,
        })
    }

    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace {
            n,
            basis: MatrixFq::zeros(field, 0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Subspace {
            n,
            basis: MatrixFq::identity(field, n),
            pivots: (0..n).collect(),
        }
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.dim()).map(move |r| self.basis.row(r))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field().order() != other.field().order() || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.field().order(),
                self.n,
                other.field().order(),
                other.n
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Self::from_generators(&self.basis.stack(&other.basis)?))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        let mut e = Echelon::new(self.field(), self.n);
        e.insert_all(self.basis_rows());
        e.insert_all(other.basis_rows());
        Ok(self.dim() + other.dim() - e.rank())
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Self::from_generators(&self.basis.intersect_space(&other.basis)?))
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if self.n != other.n || other.dim() > self.dim() {
            return false;
        }
        let mut e = Echelon::new(self.field(), self.n);
        e.insert_all(self.basis_rows());
        other.basis_rows().all(|v| e.contains(v))
    }

    pub fn contains_vector(&self, v: &[Elem]) -> bool {
        let mut e = Echelon::new(self.field(), self.n);
        e.insert_all(self.basis_rows());
        e.contains(v)
    }

    /// `X^⊥` under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.field(), self.n);
        }
        Self::from_generators(&self.basis.null_space())
    }

    /// All `t`-dimensional subspaces of this subspace, in canonical order.
    /// Works on the k-dim coordinate space and maps through the basis.
    pub fn subspaces(&self, t: usize) -> Result<Vec<Subspace>> {
        let k = self.dim();
        if t > k {
            return Err(Error::InvalidArgs(format!("t={t} > dim {k}")));
        }
        let coords = enumerate_grassmannian(self.field(), k, t, DEFAULT_ENUMERATION_BUDGET)?;
        let mut out: Vec<Subspace> = coords
            .iter()
            .map(|c| {
                let m = c.basis.mul(&self.basis).expect("shapes agree");
                Subspace::from_generators(&m)
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Every vector of the subspace, by enumerating coefficient tuples.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let f = self.field();
        let q = f.order() as usize;
        let k = self.dim();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut v = vec![0 as Elem; self.n];
            let mut x = idx;
            for r in 0..k {
                let c = (x % q) as Elem;
                x /= q;
                if c != 0 {
                    for (j, &b) in self.basis.row(r).iter().enumerate() {
                        v[j] = f.add(v[j], f.mul(c, b));
                    }
                }
            }
            out.push(v);
        }
        out
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.n == other.n
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field().order().hash(state);
        self.n.hash(state);
        self.dim().hash(state);
        self.basis.entries().hash(state);
    }
}

impl Ord for Subspace {
    /// Canonical order: (field, n, k), then pivot columns, then RREF entries.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field().order(), self.n, self.dim())
            .cmp(&(other.field().order(), other.n, other.dim()))
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| self.basis.entries().cmp(other.basis.entries()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl serde::Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Subspace", 4)?;
        st.serialize_field("q", &self.field().order())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.dim())?;
        st.serialize_field("basis", &self.basis.row_vecs())?;
        st.end()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.basis.row_vecs())
    }
}

/// The Gaussian binomial coefficient `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidArgs(format!("k={k} > n={n}")));
    }
    if q < 2 {
        return Err(Error::InvalidArgs(format!("q={q} < 2")));
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((i + 1) as u32) - 1u32;
    }
    Ok(num / den)
}

/// `[n choose k]_q` as a u64, erroring on overflow.
pub fn gaussian_binomial_u64(n: usize, k: usize, q: u64) -> Result<u64> {
    gaussian_binomial(n, k, q)?
        .to_u64()
        .ok_or_else(|| Error::InvalidArgs(format!("[{n},{k}]_{q} overflows u64")))
}

/// Lexicographic k-combinations of 0..n.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Lazy canonical-order iterator over G_q(n,k): pivot sets in lexicographic
/// order, and for each, every assignment of the free RREF positions with the
/// last position varying fastest.
pub struct GrassmannIter {
    field: Field,
    n: usize,
    k: usize,
    pivot_iter: Box<dyn Iterator<Item = Vec<usize>> + Send>,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<Elem>,
    exhausted_pivot: bool,
}

impl GrassmannIter {
    pub fn new(field: &Field, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgs(format!("k={k} > n={n}")));
        }
        Ok(GrassmannIter {
            field: field.clone(),
            n,
            k,
            pivot_iter: Box::new(combinations(n, k)),
            pivots: Vec::new(),
            free: Vec::new(),
            counter: Vec::new(),
            exhausted_pivot: true,
        })
    }

    fn load_next_pivots(&mut self) -> bool {
        let Some(p) = self.pivot_iter.next() else {
            return false;
        };
        self.free = (0..self.k)
            .flat_map(|r| {
                let p = &p;
                (p[r] + 1..self.n)
                    .filter(move |c| !p.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        self.counter = vec![0; self.free.len()];
        self.pivots = p;
        self.exhausted_pivot = false;
        true
    }

    fn build(&self) -> Subspace {
        let mut m = MatrixFq::zeros(&self.field, self.k, self.n);
        for (r, &c) in self.pivots.iter().enumerate() {
            m.set(r, c, 1);
        }
        for (&(r, c), &v) in self.free.iter().zip(&self.counter) {
            m.set(r, c, v);
        }
        Subspace {
            n: self.n,
            basis: m,
            pivots: self.pivots.clone(),
        }
    }

    fn advance(&mut self) {
        let q = self.field.order();
        for i in (0..self.counter.len()).rev() {
            if (self.counter[i] as u32) + 1 < q {
                self.counter[i] += 1;
                return;
            }
            self.counter[i] = 0;
        }
        self.exhausted_pivot = true;
    }
}

impl Iterator for GrassmannIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.exhausted_pivot && !self.load_next_pivots() {
            return None;
        }
        let s = self.build();
        self.advance();
        Some(s)
    }
}

/// Every k-subspace of F_q^n exactly once, in canonical order. Refuses with
/// `BudgetExceeded` if `[n,k]_q` exceeds `budget`.
pub fn enumerate_grassmannian(field: &Field, n: usize, k: usize, budget: u64) -> Result<Vec<Subspace>> {
    let count = gaussian_binomial(n, k, field.order() as u64)?;
    if count > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            requested: count.to_string(),
            budget,
        });
    }
    Ok(GrassmannIter::new(field, n, k)?.collect())
}

/// `d_G(X,Y) = k − dim(X ∩ Y)`.
pub fn grassmann_distance(x: &Subspace, y: &Subspace) -> Result<usize> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distance between a {}-space and a {}-space",
            x.dim(),
            y.dim()
        )));
    }
    Ok(x.dim() - x.intersection_dim(y)?)
}

pub fn orthogonal_complement(x: &Subspace) -> Subspace {
    x.orthogonal_complement()
}
