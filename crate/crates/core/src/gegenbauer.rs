//! Gegenbauer polynomials `Q̃_l` attached to `S^{n-1}`, normalized so that
//! `Q̃_l(1)` is the dimension of the space of degree-`l` harmonic polynomials.
//!
//! Coefficients are exact rationals in the monomial basis, generated by
//! the three-term recurrence
//!
//! ```text
//! (l+1)/(n+2l) Q̃_{l+1}(x) = x Q̃_l(x) - (n+l-3)/(n+2l-4) Q̃_{l-1}(x)
//! ```
//!
//! seeded with `Q̃_0 = 1`, `Q̃_1 = n x`. Evaluation on either backend goes
//! through the cached coefficients with Horner's rule.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{binomial, int, ratio, Rational, Scalar};

/// Standalone cap when no point set suggests one.
pub const DEFAULT_CAP: usize = 24;

/// Dimension of the space of degree-`l` harmonic polynomials in `n` variables.
pub fn harm_dim(n: usize, l: usize) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let (n, l) = (n as i64, l as i64);
    Ok(binomial(n + l - 1, l) - binomial(n + l - 3, l - 2))
}

/// Monomial coefficients, lowest degree first.
pub type Poly = Vec<Rational>;

#[derive(Debug, Clone)]
pub struct GegenbauerBasis {
    n: usize,
    cap: usize,
    polys: Vec<Poly>,
    // expansions[λ][l] = f_{λ,l}
    expansions: Vec<Vec<Rational>>,
}

impl GegenbauerBasis {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let nn = n as i64;
        let mut polys: Vec<Poly> = vec![vec![int(1)]];
        if cap >= 1 {
            polys.push(vec![int(0), int(nn)]);
        }
        for l in 1..cap {
            let li = l as i64;
            // (n+l-3)/(n+2l-4) is 0/0 at n = 2, l = 1; its limit is 1.
            let back = if nn + 2 * li - 4 == 0 {
                int(1)
            } else {
                ratio(nn + li - 3, nn + 2 * li - 4)
            };
            let lead = ratio(nn + 2 * li, li + 1);
            let cur = &polys[l];
            let prev = &polys[l - 1];
            let mut next = vec![int(0); l + 2];
            for (d, c) in cur.iter().enumerate() {
                next[d + 1] += c;
            }
            for (d, c) in prev.iter().enumerate() {
                next[d] -= &back * c;
            }
            for c in next.iter_mut() {
                *c *= &lead;
            }
            polys.push(next);
        }

        let mut expansions = Vec::with_capacity(cap + 1);
        for lambda in 0..=cap {
            let mut rest: Poly = vec![int(0); lambda + 1];
            rest[lambda] = int(1);
            let mut f = vec![int(0); lambda + 1];
            for l in (0..=lambda).rev() {
                let coef = &rest[l] / &polys[l][l];
                if !coef.is_zero() {
                    for (d, c) in polys[l].iter().enumerate() {
                        rest[d] -= &coef * c;
                    }
                }
                f[l] = coef;
            }
            debug_assert!(rest.iter().all(Zero::is_zero));
            expansions.push(f);
        }

        Ok(GegenbauerBasis {
            n,
            cap,
            polys,
            expansions,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check(&self, l: usize) -> Result<()> {
        if l > self.cap {
            Err(Error::CapExceeded {
                requested: l,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    /// Monomial coefficients of `Q̃_l`.
    pub fn poly(&self, l: usize) -> Result<&Poly> {
        self.check(l)?;
        Ok(&self.polys[l])
    }

    pub fn eval<S: Scalar>(&self, l: usize, x: &S) -> Result<S> {
        Ok(horner(self.poly(l)?, x))
    }

    /// `f_{λ,0..λ}` with `x^λ = Σ_l f_{λ,l} Q̃_l(x)`.
    pub fn monomial_expansion(&self, lambda: usize) -> Result<&[Rational]> {
        self.check(lambda)?;
        Ok(&self.expansions[lambda])
    }

    /// Coefficients `q_k(i, j)` of `Q̃_i Q̃_j = Σ_k q_k(i, j) Q̃_k`.
    ///
    /// Only the nonzero coefficients within `|i-j| ..= i+j` of the right
    /// parity are returned.
    pub fn linearization(&self, i: usize, j: usize) -> Result<BTreeMap<usize, Rational>> {
        self.check(i + j)?;
        let product = poly_mul(&self.polys[i], &self.polys[j]);
        let mut coeffs = vec![int(0); i + j + 1];
        for (d, c) in product.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, f) in self.expansions[d].iter().enumerate() {
                coeffs[l] += c * f;
            }
        }
        Ok(coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }

    /// Coefficients of `F_{λ,μ} = Σ_{l ≤ min(λ,μ)} f_{λ,l} f_{μ,l} Q̃_l`.
    pub fn product_poly(&self, lambda: usize, mu: usize) -> Result<BTreeMap<usize, Rational>> {
        self.check(lambda.max(mu))?;
        let a = &self.expansions[lambda];
        let b = &self.expansions[mu];
        Ok((0..=lambda.min(mu))
            .map(|l| (l, &a[l] * &b[l]))
            .filter(|(_, c)| !c.is_zero())
            .collect())
    }
}

pub(crate) fn horner<S: Scalar>(coeffs: &[Rational], x: &S) -> S {
    coeffs.iter().rev().fold(S::zero(), |acc, c| {
        acc * x.clone() + S::from_rational(c)
    })
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Poly {
    let mut out = vec![int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// True if every coefficient of `poly` with parity different from `l` vanishes.
pub fn has_parity(poly: &[Rational], l: usize) -> bool {
    poly.iter()
        .enumerate()
        .all(|(d, c)| d % 2 == l % 2 || c.is_zero())
}

/// Smallest coefficient across all linearizations with `i + j <= max_sum`.
pub fn min_linearization_coefficient(basis: &GegenbauerBasis, max_sum: usize) -> Result<Rational> {
    let mut min: Option<Rational> = None;
    for i in 0..=max_sum {
        for j in 0..=(max_sum - i) {
            for (_, c) in basis.linearization(i, j)? {
                if min.as_ref().is_none_or(|m| &c < m) {
                    min = Some(c);
                }
            }
        }
    }
    Ok(min.unwrap_or_else(|| int(0)))
}
