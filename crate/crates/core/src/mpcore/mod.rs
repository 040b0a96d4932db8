//! Arbitrary-precision numerical substrate: complex arithmetic on MPFR
//! floats, a radix-2 FFT and a matrix-free GMRES solver.

mod complex;
pub mod fft;
pub mod gmres;
mod vector;

use thiserror::Error;

pub use complex::{
    bits_for_digits, digits_for_bits, float_to_decimal, inner, norm2, pi, BigComplex,
    GUARD_DIGITS,
};
pub use fft::{fft, Direction, FftPlan};
pub use gmres::{gmres, gmres_from, GmresOptions, GmresOutcome};
pub use vector::{CoeffBlock, CoeffLayout, CoeffVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MpError {
    #[error("FFT length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("GMRES breakdown at step {iteration} with relative residual {residual:e}")]
    Breakdown { iteration: usize, residual: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}
