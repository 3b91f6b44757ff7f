//! Exact rational arithmetic and sparse multivariate polynomials.
//!
//! Everything in the symbolic half of the crate is built on [`MultiPoly`]:
//! a sparse map from exponent vectors to [`Rat`] coefficients over a named,
//! weighted [`VarSet`]. Rational functions are kept as unreduced
//! numerator/denominator pairs and compared by cross-multiplication.

mod json;
mod parse;
mod poly;
mod ratfun;
mod varset;

pub use json::{PolyJson, TermJson};
pub use poly::{Monomial, MultiPoly, WeightReport};
pub use ratfun::RationalFunction;
pub use varset::VarSet;

use thiserror::Error;

/// Exact rational coefficient. `BigRational` keeps `gcd(num, den) = 1` and a
/// positive denominator after every operation.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live over different variable sets")]
    VarSetMismatch,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// Convenience constructor for small integer rationals.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
