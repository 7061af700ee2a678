//! Bit-packed matrices over F_2 (one `u64` per row, bit j = column j) and an
//! incremental echelon accumulator used by the span-heavy checks.

use super::field::{Elem, Field};
use super::matrix::{MatrixFq, Rref};
use crate::error::{Error, Result};

pub const MAX_PACKED_COLS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedGf2Matrix {
    cols: usize,
    rows: Vec<u64>,
}

impl PackedGf2Matrix {
    pub fn from_matrix(m: &MatrixFq) -> Result<Self> {
        if m.field().order() != 2 {
            return Err(Error::Unsupported("packed form is F_2 only".into()));
        }
        if m.cols() > MAX_PACKED_COLS {
            return Err(Error::Unsupported(format!(
                "{} columns exceed the packed width",
                m.cols()
            )));
        }
        let rows = (0..m.rows()).map(|r| pack_row(m.row(r))).collect();
        Ok(PackedGf2Matrix {
            cols: m.cols(),
            rows,
        })
    }

    pub fn to_matrix(&self, f2: &Field) -> MatrixFq {
        let data = self
            .rows
            .iter()
            .flat_map(|&w| (0..self.cols).map(move |j| ((w >> j) & 1) as Elem))
            .collect();
        MatrixFq::new(f2, self.rows.len(), self.cols, data).expect("packed shape")
    }

    pub fn words(&self) -> &[u64] {
        &self.rows
    }

    pub fn rref(&self) -> (PackedGf2Matrix, usize, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let bit = 1u64 << c;
            let Some(pr) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let pivot = rows[r];
            for (i, w) in rows.iter_mut().enumerate() {
                if i != r && *w & bit != 0 {
                    *w ^= pivot;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            PackedGf2Matrix {
                cols: self.cols,
                rows,
            },
            r,
            pivots,
        )
    }

    /// Same shape and meaning as [`MatrixFq::rref`].
    pub fn rref_unpacked(&self, f2: &Field) -> Rref {
        let (m, rank, pivots) = self.rref();
        Rref {
            matrix: m.to_matrix(f2),
            rank,
            pivots,
        }
    }
}

pub(crate) fn pack_row(row: &[Elem]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |acc, (j, &b)| acc | ((b as u64 & 1) << j))
}

/// Echelon basis grown one vector at a time. Rows keep distinct pivots and
/// each row is reduced against all earlier ones, so reducing a new vector
/// in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Packed { rows: Vec<u64> },
    General { rows: Vec<Vec<Elem>>, pivots: Vec<usize> },
}

impl Echelon {
    pub fn new(field: &Field, cols: usize) -> Self {
        let repr = if field.order() == 2 && cols <= MAX_PACKED_COLS {
            Repr::Packed { rows: Vec::new() }
        } else {
            Repr::General {
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        };
        Echelon {
            field: field.clone(),
            cols,
            repr,
        }
    }

    pub fn rank(&self) -> usize {
        match &self.repr {
            Repr::Packed { rows } => rows.len(),
            Repr::General { rows, .. } => rows.len(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v`; returns whether the rank went up.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        match &mut self.repr {
            Repr::Packed { rows } => {
                let mut w = pack_row(v);
                for &r in rows.iter() {
                    let p = r.trailing_zeros();
                    if (w >> p) & 1 == 1 {
                        w ^= r;
                    }
                }
                if w == 0 {
                    false
                } else {
                    rows.push(w);
                    true
                }
            }
            Repr::General { rows, pivots } => {
                let f = &self.field;
                let mut w = v.to_vec();
                for (r, &p) in rows.iter().zip(pivots.iter()) {
                    let c = w[p];
                    f.axpy_neg(&mut w, r, c);
                }
                match w.iter().position(|&x| x != 0) {
                    None => false,
                    Some(p) => {
                        let inv = f.inv(w[p]).unwrap();
                        f.scale(&mut w, inv);
                        rows.push(w);
                        pivots.push(p);
                        true
                    }
                }
            }
        }
    }

    pub fn insert_all<'a>(&mut self, vs: impl IntoIterator<Item = &'a [Elem]>) {
        for v in vs {
            if self.rank() == self.cols {
                return;
            }
            self.insert(v);
        }
    }

    /// Whether `v` lies in the current span.
    pub fn contains(&self, v: &[Elem]) -> bool {
        let mut probe = self.clone();
        !probe.insert(v)
    }
}
