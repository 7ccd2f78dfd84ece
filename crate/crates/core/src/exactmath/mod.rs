//! Exact scalar and matrix arithmetic over `Q` and `F_p`, plus integer-matrix
//! Smith normal forms for lattice and quotient-group computations.
//!
//! Everything here is dense and arbitrary precision: ranks decide Hom-space
//! dimensions downstream, so no floating point appears anywhere.

mod matrix;
mod scalar;
mod smith;

pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
