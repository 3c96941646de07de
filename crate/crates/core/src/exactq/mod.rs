//! Exact linear algebra over the rationals.

mod echelon;
mod matrix;
mod poly;
mod rational;
mod subspace;
mod vector;

pub use echelon::{kernel_from_rref, kernel_of_rows, RowReducer};
pub use matrix::{MatrixQ, PartialMap};
pub use poly::{char_poly, eigenspace, rational_spectrum, Poly, SpectrumError};
pub use rational::{ParseRationalError, Rational};
pub use subspace::SubspaceQ;
pub use vector::{Accumulator, Vector};

/// Shorthand for `Rational::new`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}
