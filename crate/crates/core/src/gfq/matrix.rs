use std::fmt;

use super::field::{Elem, Field};
use crate::error::{Error, Result};

/// Dense row-major matrix over F_q.
#[derive(Clone)]
pub struct MatrixFq {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Output of [`MatrixFq::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Reduced row echelon form, same shape as the input (zero rows last).
    pub matrix: MatrixFq,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for MatrixFq {}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFq(F_{}, {}x{}) [", self.field.order(), self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row(r))?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl serde::Serialize for MatrixFq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Matrix", 4)?;
        st.serialize_field("q", &self.field.order())?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("data", &self.row_vecs())?;
        st.end()
    }
}

impl MatrixFq {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| !field.contains(x as u32)) {
            return Err(Error::InvalidArgs(format!(
                "entry {bad} not in F_{}",
                field.order()
            )));
        }
        Ok(MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        assert!(self.field.contains(v as u32));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &MatrixFq) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let c = self.get(r, k);
                if c != 0 {
                    // dst += c * other.row(k)
                    f.axpy_neg(dst, other.row(k), f.neg(c));
                }
            }
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect()
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &MatrixFq) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    fn check_field(&self, other: &MatrixFq) -> Result<()> {
        if self.field.order() != other.field.order() {
            return Err(Error::DimensionMismatch(format!(
                "F_{} vs F_{}",
                self.field.order(),
                other.field.order()
            )));
        }
        Ok(())
    }

    /// Unique reduced row echelon form: leading ones, zeros above and below
    /// every pivot, zero rows at the bottom.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.data.swap(r * cols + j, pr * cols + j);
                }
            }
            let lead_inv = f.inv(m.get(r, c)).unwrap();
            f.scale(&mut m.data[r * cols..(r + 1) * cols], lead_inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let coef = m.get(i, c);
                    f.axpy_neg(&mut m.data[i * cols..(i + 1) * cols], &pivot_row, coef);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// The nonzero rows of the RREF: the canonical basis of the row space.
    pub fn row_basis(&self) -> MatrixFq {
        let Rref { matrix, rank, .. } = self.rref();
        matrix.truncate_rows(rank)
    }

    pub(crate) fn truncate_rows(mut self, rows: usize) -> MatrixFq {
        self.data.truncate(rows * self.cols);
        self.rows = rows;
        self
    }

    /// Canonical basis of `{x : M xᵀ = 0}`.
    pub fn null_space(&self) -> MatrixFq {
        let f = &self.field;
        let Rref {
            matrix, rank, pivots, ..
        } = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut data = Vec::with_capacity(free.len() * n);
        for &fc in &free {
            let mut v = vec![0 as Elem; n];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = f.neg(matrix.get(i, fc));
            }
            data.extend(v);
        }
        let basis = MatrixFq {
            field: f.clone(),
            rows: free.len(),
            cols: n,
            data,
        };
        basis.row_basis()
    }

    /// Canonical basis of the sum of the two row spaces.
    pub fn sum_space(&self, other: &MatrixFq) -> Result<MatrixFq> {
        Ok(self.stack(other)?.row_basis())
    }

    /// dim(rowspace A ∩ rowspace B) = dim A + dim B − dim(A + B).
    pub fn intersect_dim(&self, other: &MatrixFq) -> Result<usize> {
        let s = self.stack(other)?.rank();
        Ok(self.rank() + other.rank() - s)
    }

    /// Canonical basis of the intersection of the two row spaces,
    /// computed as ((A^⊥) + (B^⊥))^⊥.
    pub fn intersect_space(&self, other: &MatrixFq) -> Result<MatrixFq> {
        let s = self.null_space().sum_space(&other.null_space())?;
        Ok(s.null_space())
    }
}
