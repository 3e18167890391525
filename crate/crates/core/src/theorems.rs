//! Checkers for the structure theorem on antipodal designs with `t >= 2s - 3`.
//!
//! Each clause compares computed parameters against a closed form and
//! records the worst deviation together with concrete witnesses.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::gegenbauer::GegenbauerBasis;
use crate::numerics::{binomial, factorial, Rational, Scalar};
use crate::pointset::{
    canonical_ordering, is_antipodal, spectrum, strength, DistanceSpectrum,
    InnerProductSpectrum, PointSet,
};
use crate::scheme::SchemeParameters;

/// Witnesses kept per clause.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisRecord {
    pub dimension: usize,
    pub size: usize,
    pub degree: usize,
    pub strength: usize,
    pub antipodal: bool,
    /// `t >= 2s - 3`.
    pub strength_bound: bool,
    pub applicable: bool,
}

/// Hypothesis record plus what was computed to decide it.
#[derive(Debug, Clone)]
pub struct Applicability<S> {
    pub record: HypothesisRecord,
    pub raw_spectrum: DistanceSpectrum<S>,
    /// Canonically ordered `A(X) ∪ {1}` when `X` is antipodal.
    pub spectrum: Option<InnerProductSpectrum<S>>,
    pub basis: GegenbauerBasis,
}

/// Degree, strength (searched up to `2s + 1`) and antipodality of `X`.
pub fn check_applicability<S: Scalar>(x: &PointSet<S>) -> Result<Applicability<S>> {
    let raw = spectrum(x)?;
    let s = raw.degree();
    let basis = GegenbauerBasis::new(x.dim(), 2 * s + 4)?;
    let t = strength(x, &basis, 2 * s + 1)?;
    let antipodal = is_antipodal(x).antipodal;
    let spectrum = if antipodal {
        Some(canonical_ordering(&raw.values, true, x.policy().snap)?)
    } else {
        None
    };
    let strength_bound = t + 3 >= 2 * s;
    Ok(Applicability {
        record: HypothesisRecord {
            dimension: x.dim(),
            size: x.len(),
            degree: s,
            strength: t,
            antipodal,
            strength_bound,
            applicable: antipodal && strength_bound && s >= 2,
        },
        raw_spectrum: raw,
        spectrum,
        basis,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
    /// Largest `|computed - expected|`, rendered in the backend.
    pub deviation: String,
    pub witnesses: Vec<String>,
    pub note: Option<String>,
}

struct Tracker<'a, S> {
    eps: f64,
    digits: usize,
    worst: S,
    witnesses: Vec<String>,
    failures: usize,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<S: Scalar> Tracker<'_, S> {
    fn new(eps: f64, digits: usize) -> Self {
        Tracker {
            eps,
            digits,
            worst: S::zero(),
            witnesses: Vec::new(),
            failures: 0,
            _marker: std::marker::PhantomData,
        }
    }

    fn compare(&mut self, label: impl FnOnce() -> String, computed: &S, expected: &S) {
        let dev = (computed.clone() - expected.clone()).abs();
        if dev.total_cmp(&self.worst).is_gt() {
            self.worst = dev.clone();
        }
        if !dev.is_zero_within(self.eps) {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(format!(
                    "{}: computed {}, expected {}",
                    label(),
                    computed.render(self.digits),
                    expected.render(self.digits)
                ));
            }
        }
    }

    fn finish(self, clause: &'static str, note: Option<String>) -> ClauseResult {
        ClauseResult {
            clause,
            passed: self.failures == 0,
            deviation: self.worst.render(self.digits),
            witnesses: self.witnesses,
            note,
        }
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `P_1(i) = (-1)^i`, and `B_1` is the block matrix of `[[0,1],[1,0]]`
/// blocks with a trailing `1` when `s` is even.
pub fn check_p1_signs<S: Scalar>(params: &SchemeParameters<S>, eps: f64, digits: usize) -> ClauseResult {
    let mut t = Tracker::new(eps, digits);
    let w = params.degree() + 1;
    for i in 0..w {
        t.compare(|| format!("P_1({i})"), &params.p[(i, 1)], &S::from_i64(sign(i)));
    }
    let b1 = &params.intersection[1];
    for j in 0..w {
        for k in 0..w {
            let partner = if j == w - 1 && w % 2 == 1 { j } else { j ^ 1 };
            let want = S::from_i64(i64::from(k == partner));
            t.compare(|| format!("B_1[{j}][{k}]"), &b1[(j, k)], &want);
        }
    }
    t.finish("p1_signs", None)
}

/// `Q_j(2i+1) = (-1)^j Q_j(2i)`, and `Q_j(s) = 0` for odd `j` when `s` is even.
pub fn check_q_parity<S: Scalar>(params: &SchemeParameters<S>, eps: f64, digits: usize) -> ClauseResult {
    let mut t = Tracker::new(eps, digits);
    let s = params.degree();
    for j in 0..=s {
        for i in 0..=s {
            if 2 * i + 1 > s {
                break;
            }
            let want = params.q[(2 * i, j)].clone() * S::from_i64(sign(j));
            t.compare(|| format!("Q_{j}({})", 2 * i + 1), &params.q[(2 * i + 1, j)], &want);
        }
        if s.is_multiple_of(2) && j % 2 == 1 {
            t.compare(|| format!("Q_{j}({s})"), &params.q[(s, j)], &S::zero());
        }
    }
    t.finish("q_parity", None)
}

/// Closed-form multiplicities, using `C(n+i-3, i-2)` in the generic range.
pub fn expected_multiplicities(n: usize, s: usize, size: usize) -> Vec<Rational> {
    let (n, s) = (n as i64, s as i64);
    let half = Rational::new(BigInt::from(size), BigInt::from(2));
    let mut out: Vec<Rational> = (0..=s - 2)
        .map(|i| Rational::from_integer(binomial(n + i - 1, i) - binomial(n + i - 3, i - 2)))
        .collect();
    out.push(&half - Rational::from_integer(binomial(n + s - 4, s - 3)));
    out.push(half - Rational::from_integer(binomial(n + s - 3, s - 2)));
    out
}

pub fn check_multiplicities<S: Scalar>(
    params: &SchemeParameters<S>,
    n: usize,
    size: usize,
    eps: f64,
    digits: usize,
) -> ClauseResult {
    let mut t = Tracker::new(eps, digits);
    let expected = expected_multiplicities(n, params.degree(), size);
    for (i, (m, e)) in params.multiplicities.iter().zip(&expected).enumerate() {
        t.compare(|| format!("m_{i}"), m, &S::from_rational(e));
    }
    t.finish(
        "multiplicities",
        Some("generic range uses C(n+i-3, i-2); the variant C(n+i-3, s-2) is not used".into()),
    )
}

/// `q_{ij}^μ = 0` whenever `i + j + μ` is odd.
pub fn check_krein_parity<S: Scalar>(params: &SchemeParameters<S>, eps: f64, digits: usize) -> ClauseResult {
    let mut t = Tracker::new(eps, digits);
    let w = params.degree() + 1;
    for i in 0..w {
        for j in 0..w {
            for mu in 0..w {
                if (i + j + mu) % 2 == 1 {
                    t.compare(|| format!("q_{i}{j}^{mu}"), params.krein.get(i, j, mu), &S::zero());
                }
            }
        }
    }
    t.finish(
        "krein_parity",
        Some("vanishing condition is i+j+mu odd; the variant i+j+mu = 0 is not used".into()),
    )
}

/// Expected `B_1^*` (row `i`, column `j` holds `q_{1i}^j`), exact.
pub fn expected_b1star(n: usize, s: usize, size: usize) -> Vec<Vec<Rational>> {
    let w = s + 1;
    let mut b = vec![vec![Rational::from_integer(0.into()); w]; w];
    let q = |a: i64, c: i64| Rational::new(a.into(), c.into());
    let (ni, si) = (n as i64, s as i64);
    let fact = |k: i64| factorial(k as u64);
    let size = BigInt::from(size);

    for i in 1..s {
        b[i][i - 1] = if i == 1 {
            q(ni, 1)
        } else {
            let ii = i as i64;
            q(ni * (ni + ii - 3), ni + 2 * ii - 4)
        };
    }
    for i in 1..s.saturating_sub(1) {
        let ii = i as i64;
        b[i - 1][i] = q(ni * ii, ni + 2 * ii - 2);
    }
    let denom = fact(si - 2) * fact(ni - 1) * &size - BigInt::from(2 * (si - 2)) * fact(ni + si - 4);
    if denom != BigInt::from(0) {
        let b_last = fact(si - 2) * fact(ni) * &size - BigInt::from(2 * ni) * fact(ni + si - 3);
        let c_last = BigInt::from(2 * ni * (ni - 1)) * fact(ni + si - 4);
        b[s][s - 1] = Rational::new(b_last, denom.clone());
        b[s - 2][s - 1] = Rational::new(c_last, denom);
    }
    b[s - 1][s] = q(ni, 1);
    b
}

/// `B_1^*` tri-diagonal with the closed-form band.
pub fn check_b1star<S: Scalar>(
    params: &SchemeParameters<S>,
    n: usize,
    size: usize,
    eps: f64,
    digits: usize,
) -> ClauseResult {
    let mut t = Tracker::new(eps, digits);
    let s = params.degree();
    let expected = expected_b1star(n, s, size);
    for (i, row) in expected.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            t.compare(|| format!("B1*[{i}][{j}]"), &params.dual[(i, j)], &S::from_rational(e));
        }
    }
    t.finish(
        "b1star",
        Some("entries are matched by band position; row i, column j holds q_1i^j".into()),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub hypotheses: HypothesisRecord,
    pub clauses: Vec<ClauseResult>,
    pub all_passed: bool,
}

/// Runs all five clauses.
pub fn check_all<S: Scalar>(
    params: &SchemeParameters<S>,
    hypotheses: &HypothesisRecord,
    eps: f64,
    digits: usize,
) -> TheoremReport {
    let (n, size) = (hypotheses.dimension, hypotheses.size);
    let clauses = vec![
        check_p1_signs(params, eps, digits),
        check_q_parity(params, eps, digits),
        check_multiplicities(params, n, size, eps, digits),
        check_krein_parity(params, eps, digits),
        check_b1star(params, n, size, eps, digits),
    ];
    TheoremReport {
        hypotheses: hypotheses.clone(),
        all_passed: clauses.iter().all(|c| c.passed),
        clauses,
    }
}
