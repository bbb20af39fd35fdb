//! Exact linear algebra over a prime field.

mod echelon;
mod field;
mod matrix;

pub use echelon::IncrementalSpan;
pub use field::{Field, FieldElement, DEFAULT_MODULUS};
pub use matrix::{Flatten, MatrixF, VectorF};
