//! Exact rational arithmetic: arbitrary-precision rationals, sparse
//! multivariate Laurent polynomials, normalized rational functions,
//! one-variable Laurent series, iterated constant terms, scaling limits,
//! and dense linear algebra over rational functions.
//!
//! Everything downstream reduces to this layer; it never approximates.

mod gcd;
pub(crate) mod linalg;
mod parse;
mod poly;
mod ratfun;
mod series;

pub use gcd::{div_exact, try_div_exact};
pub use parse::parse_ratfun;
pub use poly::{LaurentPoly, Mono, Sym};
pub use ratfun::RatFun;
pub use series::{
    constant_term_iterated, limit_leading, series_expand, xi_degree, ExpansionPoint,
    LaurentSeries,
};

use num::BigInt;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Errors from the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactAlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution sets {0} to zero but it occurs with a negative exponent")]
    ZeroToNegativePower(String),
    #[error("limit diverges: {0} has degree {1} in {2}, exceeding shift {3}")]
    DivergentLimit(String, i64, String, i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("term cap {cap} exceeded ({got} terms); raise KSHUFFLE_TERM_CAP")]
    TermCapExceeded { cap: usize, got: usize },
}

/// Maximum number of polynomial terms the series and residue engines will
/// produce in one intermediate value. Controlled by the `KSHUFFLE_TERM_CAP`
/// environment variable; unset means a generous default.
pub fn term_cap() -> usize {
    static CAP: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("KSHUFFLE_TERM_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(5_000_000)
    })
}

pub(crate) fn check_cap(got: usize) -> Result<(), ExactAlgError> {
    let cap = term_cap();
    if got > cap {
        Err(ExactAlgError::TermCapExceeded { cap, got })
    } else {
        Ok(())
    }
}
