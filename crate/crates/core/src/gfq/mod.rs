//! Arithmetic in F_q (q ≤ 256) and exact linear algebra over it.

mod field;
mod matrix;
mod packed;

pub use field::{make_field, Elem, Field, FieldCtx, MAX_Q};
pub use matrix::{MatrixFq, Rref};
pub use packed::{Echelon, PackedGf2Matrix, MAX_PACKED_COLS};
