//! Scalar types: arbitrary-precision integers and rationals.
//!
//! `num_rational::BigRational` already maintains the invariants we need
//! (lowest terms, strictly positive denominator, exact arithmetic), so it is
//! used directly rather than wrapped.

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// `n/d` as a rational in lowest terms.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}
