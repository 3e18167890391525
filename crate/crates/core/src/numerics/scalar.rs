//! Scalar backends.
//!
//! Every matrix in the pipeline lives over one backend: exact rationals
//! ([`Rational`]) or `f64` with the equality rule
//! `|a - b| <= eps * max(1, |a|, |b|)`. The backend is the type parameter,
//! and tolerances are passed explicitly so the exact backend can ignore them.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::is_rational_square;

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Zero test: literal on the exact backend, `|a| <= eps` otherwise.
    fn is_zero_within(&self, eps: f64) -> bool;

    /// Equality test: literal on the exact backend, relative-or-absolute otherwise.
    fn approx_eq(&self, other: &Self, eps: f64) -> bool;

    /// Non-negative square root, if it exists in the backend.
    fn sqrt(&self, eps: f64) -> Option<Self>;

    /// Total order used for deterministic grouping and sorting.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// `p/q` on the exact backend, fixed-precision decimal otherwise.
    fn render(&self, digits: usize) -> String;

    /// Exact value, when the backend carries one.
    fn as_rational(&self) -> Option<Rational>;

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero_within(&self, _eps: f64) -> bool {
        Zero::is_zero(self)
    }

    fn approx_eq(&self, other: &Self, _eps: f64) -> bool {
        self == other
    }

    fn sqrt(&self, _eps: f64) -> Option<Self> {
        is_rational_square(self)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn render(&self, _digits: usize) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero_within(&self, eps: f64) -> bool {
        f64::abs(*self) <= eps
    }

    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        let scale = 1.0_f64.max(f64::abs(*self)).max(f64::abs(*other));
        f64::abs(self - other) <= eps * scale
    }

    fn sqrt(&self, eps: f64) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else if *self >= -eps {
            Some(0.0)
        } else {
            None
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }

    fn render(&self, digits: usize) -> String {
        let s = format!("{:.*}", digits, self);
        // "-0.000" and "0.000" must render the same.
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        None
    }
}

/// Convenience for building rationals in code and tests.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_equality_is_relative_for_large_values() {
        assert!(1.0e9_f64.approx_eq(&(1.0e9 + 1.0), 1e-8));
        assert!(!1.0_f64.approx_eq(&(1.0 + 1e-6), 1e-8));
        assert!(0.0_f64.approx_eq(&1e-9, 1e-8));
    }

    #[test]
    fn rendering() {
        assert_eq!(ratio(-3, 6).render(4), "-1/2");
        assert_eq!(ratio(8, 2).render(4), "4");
        assert_eq!((-1e-12_f64).render(6), "0.000000");
        assert_eq!(0.25_f64.render(3), "0.250");
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(Scalar::sqrt(&ratio(9, 4), 0.0), Some(ratio(3, 2)));
        assert_eq!(Scalar::sqrt(&ratio(2, 1), 0.0), None);
        assert_eq!(Scalar::sqrt(&-1e-12_f64, 1e-9), Some(0.0));
        assert_eq!(Scalar::sqrt(&-1.0_f64, 1e-9), None);
    }
}
