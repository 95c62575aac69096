//! Exact univariate arithmetic over the rationals.
//!
//! [`Poly`] is a dense polynomial with `BigRational` coefficients and
//! [`RatFunc`] a quotient of two such polynomials kept in canonical form
//! (reduced, monic denominator).  Both render deterministically; `RatFunc`
//! additionally offers a factored display used for denominators that split
//! into integer-root linear factors, and Laurent expansion at infinity.

mod poly;
mod ratfunc;

pub use poly::Poly;
pub use ratfunc::{InfinitySeries, RatFunc};

use num::{BigInt, BigRational};

/// The integer `n` as an exact rational.
pub fn qint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The exact rational `n / d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn qrat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
