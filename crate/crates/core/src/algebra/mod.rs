//! Exact arithmetic over `Z_p`: scalars, matrices, Laurent polynomials.

pub mod format;
pub mod laurent;
pub mod matrix;
pub mod minpoly;
pub mod scalar;

pub use format::{SymbolDoc, SymbolTerm};
pub use laurent::{LaurentMat, ScalarLaurent};
pub use matrix::Mat;
pub use minpoly::MinPoly;
pub use scalar::{is_prime, Scalar, Zp};

/// Convolution product of two symbols.
pub fn lm_mul<S: Scalar>(a: &LaurentMat<S>, b: &LaurentMat<S>) -> Result<LaurentMat<S>, crate::Error> {
    a.try_mul(b)
}

pub fn lm_pow<S: Scalar>(f: &LaurentMat<S>, y: u64) -> LaurentMat<S> {
    f.pow(y)
}

pub fn lm_det<S: Scalar>(f: &LaurentMat<S>) -> ScalarLaurent<S> {
    f.det()
}

pub fn lm_invert<S: Scalar>(f: &LaurentMat<S>) -> Result<LaurentMat<S>, crate::Error> {
    f.invert()
}

pub fn annihilates<S: Scalar>(m: &MinPoly<S>, f: &LaurentMat<S>) -> bool {
    m.annihilates(f)
}
