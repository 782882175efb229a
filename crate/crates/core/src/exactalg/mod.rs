//! Exact scalar arithmetic and the dense linear algebra every classifier
//! reduces to.

mod linalg;
mod scalar;

pub use linalg::{eigenspace, is_positive_definite, kernel, rref, Matrix, Subspace};
pub use scalar::{ParseScalarError, Scalar};
