//! Finite-field scalars and dense matrices.

mod field;
mod matrix;
mod poly;

pub use field::{is_prime, Field, FieldElement, FieldError};
pub use matrix::{FieldMatrix, MatrixError};
