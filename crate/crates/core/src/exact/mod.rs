//! Exact scalar arithmetic and truncation-aware formal Laurent/Puiseux series.
//!
//! Nothing in this module uses floating point. Rationals are arbitrary
//! precision; algebraic scalars live in explicitly tagged towers
//! `Q(ζ_m)(a^{1/n})` and are reduced modulo the tracked minimal polynomials
//! after every operation, so equality is decided structurally.

pub mod field;
pub mod json;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;

pub use field::Field;
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{Scalar, Tower};
pub use series::LaurentSeries;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact integer `k`-th root of a non-negative integer, if it exists.
pub(crate) fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `q = w^k` for a rational `w`, if such `w` exists (sign handled for odd `k`).
pub fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    if k == 1 {
        return Some(q.clone());
    }
    let neg = q.is_negative();
    if neg && k.is_multiple_of(2) {
        return None;
    }
    let n = exact_root(&q.numer().abs(), k)?;
    let d = exact_root(q.denom(), k)?;
    let w = Rational::new(n, d);
    Some(if neg { -w } else { w })
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-2/6").unwrap(), rat(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(rational_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root(&int(2), 2), None);
        assert_eq!(rational_root(&int(-4), 2), None);
    }
}
