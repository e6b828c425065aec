//! Exact rational linear algebra: matrices, canonical subspaces, kernels and
//! images, pullbacks and pushouts of linear maps, p-adic valuations and rational
//! spectra.
//!
//! Values are immutable once built and every operation is a pure function.

mod maps;
mod matrix;
pub mod rational;
mod spectrum;
mod subspace;
mod system;
mod valuation;

pub use maps::{pullback, pushout, LinearMap, Pullback, Pushout};
pub use matrix::RationalMatrix;
pub use rational::{deserialize_rational, format_rational, int, parse_rational, rat, serialize_rational, Rational};
pub use spectrum::{characteristic_polynomial, eval_poly, rational_roots, rational_spectrum, RationalSpectrum};
pub use subspace::{SpanningRows, Subspace};
pub use system::{sandwich_matrix, MatrixSystem, Unknown};
pub use valuation::{is_prime, padic_valuation, Valuation};

/// Reduced row-echelon form and rank.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, usize) {
    m.rref()
}

pub fn kernel(f: &LinearMap) -> Subspace {
    f.kernel()
}
