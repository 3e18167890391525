use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::appendix::appendix1_parameters;
use crate::numerics::Rational;

/// A parameter point `(n, N)` with `α = 1/m` that passes every feasibility test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityCandidate {
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub m: u64,
    pub multiplicities: Vec<u64>,
    /// Smallest Krein number, rendered exactly.
    pub krein_min: String,
    pub rational: bool,
    pub integral: bool,
    pub nonnegative: bool,
    /// Informational: every `p_{ij}^k` is a non-negative integer.
    /// Not part of the emission filter.
    pub intersection_integral: bool,
}

/// `N = n(n+2)(m²-1)/(3m² - n - 2)` when it is a positive integer.
fn solve_n(n: u64, m: u64) -> Option<u64> {
    let num = BigInt::from(n) * BigInt::from(n + 2) * BigInt::from(m * m - 1);
    let den = BigInt::from(3 * m * m) - BigInt::from(n + 2);
    if !den.is_positive() || !num.is_positive() || !(&num % &den).is_zero() {
        return None;
    }
    (num / den).to_u64()
}

/// Tests one grid cell.
pub fn scan_cell(n: u64, m: u64) -> Option<FeasibilityCandidate> {
    let big_n = solve_n(n, m)?;
    let params = appendix1_parameters(n, big_n).ok()?;
    let rational = params.alpha() == Some(Rational::new(1.into(), m.into()));
    let tables = params.tables()?;
    let mults: Vec<Rational> = tables.q.row(0).to_vec();
    let integral = mults.iter().all(|x| x.is_integer() && x.is_positive())
        && mults.iter().sum::<Rational>() == Rational::from_integer((2 * big_n).into());
    let krein = params.krein();
    let krein_min = krein
        .iter()
        .flatten()
        .flatten()
        .filter_map(|q| q.to_rational())
        .min()?;
    let nonnegative = !krein_min.is_negative();
    if !(rational && integral && nonnegative) {
        return None;
    }
    let intersection_integral = tables
        .intersection
        .iter()
        .all(|b| (0..b.rows()).all(|i| b.row(i).iter().all(|x| x.is_integer() && !x.is_negative())));
    Some(FeasibilityCandidate {
        n,
        big_n,
        m,
        multiplicities: mults.iter().filter_map(|x| x.to_integer().to_u64()).collect(),
        krein_min: if krein_min.is_integer() {
            krein_min.numer().to_string()
        } else {
            format!("{}/{}", krein_min.numer(), krein_min.denom())
        },
        rational,
        integral,
        nonnegative,
        intersection_integral,
    })
}

/// All candidates over the grid, ordered by `(m, n)`.
pub fn feasibility_scan(
    n_range: std::ops::RangeInclusive<u64>,
    m_range: std::ops::RangeInclusive<u64>,
) -> Vec<FeasibilityCandidate> {
    let cells: Vec<(u64, u64)> = m_range
        .flat_map(|m| n_range.clone().map(move |n| (n, m)))
        .collect();
    cells
        .par_iter()
        .filter_map(|&(n, m)| scan_cell(n, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_points() {
        assert_eq!(solve_n(4, 2), Some(12));
        assert_eq!(solve_n(16, 4), Some(144));
        let c = scan_cell(4, 2).unwrap();
        assert_eq!(c.multiplicities, vec![1, 4, 9, 8, 2]);
        assert!(c.intersection_integral);
        assert!(!scan_cell(5, 2).unwrap().intersection_integral);
        let c = scan_cell(16, 4).unwrap();
        assert_eq!(c.multiplicities, vec![1, 16, 135, 128, 8]);
    }

    #[test]
    fn m_one_is_empty() {
        assert!(feasibility_scan(3..=50, 1..=1).is_empty());
    }
}
