//! Scalar backends, tolerance policy and small number-theoretic helpers.

mod matrix;
mod scalar;

pub use matrix::Matrix;
pub use scalar::{ratio, Backend, Rational, Scalar};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerances for the float backend. Ignored by the exact backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancePolicy {
    /// Inner-product clustering radius.
    pub snap: f64,
    /// Zero test for moments, idempotent checks and theorem deviations.
    pub zero: f64,
    /// Decimal digits when rendering float values.
    pub digits: usize,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            snap: 1e-9,
            zero: 1e-8,
            digits: 12,
        }
    }
}

impl TolerancePolicy {
    pub fn new(snap: f64, zero: f64, digits: usize) -> Result<Self> {
        if !(snap > 0.0 && zero > 0.0) {
            return Err(Error::OutOfRange(format!(
                "tolerances must be positive (snap = {snap}, zero = {zero})"
            )));
        }
        Ok(TolerancePolicy { snap, zero, digits })
    }

    pub fn with_snap(self, snap: f64) -> Result<Self> {
        Self::new(snap, self.zero, self.digits)
    }
}

/// Distinct representatives (ascending) and the representative index of every input.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<S> {
    pub representatives: Vec<S>,
    pub assignment: Vec<usize>,
}

/// Groups nearby values.
///
/// Sorted values are chained while consecutive gaps are `<= eps_snap`; each
/// chain becomes one cluster represented by the midpoint of its extremes.
/// A chain wider than `2 * eps_snap`, or two chains separated by at most
/// `2 * eps_snap`, cannot be resolved and yields [`Error::AmbiguousCluster`].
/// On the exact backend only equal values merge.
pub fn cluster_values<S: Scalar>(values: &[S], eps_snap: f64) -> Result<Clustering<S>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let exact = S::is_exact();
    let merge = |gap: &S| {
        if exact {
            gap.is_zero_within(0.0)
        } else {
            gap.to_f64() <= eps_snap
        }
    };

    // chains of indices into `order`
    let mut chains: Vec<(usize, usize)> = Vec::new();
    for (pos, &idx) in order.iter().enumerate() {
        match chains.last_mut() {
            Some((_, end)) if merge(&(values[idx].clone() - values[order[*end]].clone())) => {
                *end = pos;
            }
            _ => chains.push((pos, pos)),
        }
    }

    let two = S::from_i64(2);
    let mut representatives = Vec::with_capacity(chains.len());
    let mut assignment = vec![0; values.len()];
    for (c, &(start, end)) in chains.iter().enumerate() {
        let lo = &values[order[start]];
        let hi = &values[order[end]];
        if !exact {
            if (hi.clone() - lo.clone()).to_f64() > 2.0 * eps_snap {
                return Err(Error::AmbiguousCluster {
                    low: lo.to_f64(),
                    high: hi.to_f64(),
                });
            }
            if c > 0 {
                let prev_hi = &values[order[chains[c - 1].1]];
                if (lo.clone() - prev_hi.clone()).to_f64() <= 2.0 * eps_snap {
                    return Err(Error::AmbiguousCluster {
                        low: prev_hi.to_f64(),
                        high: lo.to_f64(),
                    });
                }
            }
        }
        representatives.push((lo.clone() + hi.clone()) / two.clone());
        for &idx in &order[start..=end] {
            assignment[idx] = c;
        }
    }

    Ok(Clustering {
        representatives,
        assignment,
    })
}

/// Non-negative rational square root of `q`, if one exists.
pub fn is_rational_square(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let exact_root = |v: &BigInt| {
        let r = v.sqrt();
        (&r * &r == *v).then_some(r)
    };
    // BigRational is always kept reduced with a positive denominator.
    let num = exact_root(q.numer())?;
    let den = exact_root(q.denom())?;
    Some(Rational::new(num, den))
}

/// Binomial coefficient `C(a, b)`; zero when `b < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for k in 0..b {
        acc = acc * BigInt::from(a - k) / BigInt::from(k + 1);
    }
    acc
}

/// `k!` for `k >= 0`.
pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

pub(crate) fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}
