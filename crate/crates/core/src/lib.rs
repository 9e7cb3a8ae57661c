//! Green functions, property B, `X_p` samples and substitution systems for
//! one-dimensional linear cellular automata over `Z_p`.
//!
//! Everything is exact. Symbols are matrix-valued Laurent polynomials; a CA
//! with symbol `Σ M_e u^e` maps a configuration `c` to
//! `F(c)_x = Σ_e M_e · c(x + e)`.
//!
//! The core types are generic over [`Scalar`]; the aliases below fix the
//! field for the common cases.

// Matrix and table code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod automata;
pub mod green;
pub mod obstruct;
pub mod propb;
pub mod subst;
pub mod xp;

pub use algebra::{LaurentMat, Mat, MinPoly, Scalar, ScalarLaurent, Zp};

pub type Gf2 = Zp<2>;
pub type Gf3 = Zp<3>;
pub type Gf5 = Zp<5>;
pub type Gf7 = Zp<7>;

pub type Symbol2 = LaurentMat<Gf2>;
pub type Matrix2 = Mat<Gf2>;
pub type Laurent2 = ScalarLaurent<Gf2>;
pub type MinPoly2 = MinPoly<Gf2>;
pub type LinearCA2 = automata::LinearCA<Gf2>;
pub type Automaton2 = automata::AutomatonDef<Gf2>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("symbol dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected modulus {expected}, found {found}")]
    ModulusMismatch { expected: u32, found: u32 },
    #[error("determinant is not a unit monomial")]
    NotInvertible,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
