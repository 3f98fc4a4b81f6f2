//! Exact and enclosure arithmetic: Gaussian rationals, dyadic rationals,
//! outward-rounded complex boxes and the rigorous exponentials built on them.

mod cmatrix;
mod complex_box;
mod dyadic;
mod elementary;
mod gaussian;
mod interval;
mod matrix_box;

pub use cmatrix::CMatrix;
pub use complex_box::ComplexBox;
pub use dyadic::Dyadic;
pub use elementary::{cos_box, exp_box, sin_box};
pub(crate) use elementary::exp_raw;
pub use gaussian::{GaussianRational, ParseGaussianError};
pub use interval::Interval;
pub use matrix_box::{mat_exp, MatrixBox};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("divisor box contains zero")]
    DivisorContainsZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `box_add` in free-function form.
pub fn box_add(x: &ComplexBox, y: &ComplexBox) -> ComplexBox {
    x + y
}

/// `box_mul` in free-function form.
pub fn box_mul(x: &ComplexBox, y: &ComplexBox) -> ComplexBox {
    x * y
}

/// `box_div` in free-function form; rounds outward at `prec` bits.
pub fn box_div(x: &ComplexBox, y: &ComplexBox, prec: u32) -> Result<ComplexBox, ArithError> {
    x.div(y, prec)
}

/// Exact inverse, or [`ArithError::Singular`].
pub fn mat_inverse_exact(m: &CMatrix) -> Result<CMatrix, ArithError> {
    m.inverse()
}
