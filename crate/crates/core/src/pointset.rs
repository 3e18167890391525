//! Finite subsets of the unit sphere: Gram data, inner-product spectrum,
//! antipodality, strength and distance distribution.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gegenbauer::{harm_dim, GegenbauerBasis};
use crate::numerics::{cluster_values, Rational, Scalar, TolerancePolicy};

/// Points on `S^{n-1}` with their Gram matrix.
///
/// Construction rejects points off the sphere (exactly, or by more than
/// `policy.zero` on the float backend) and coincident points.
#[derive(Debug, Clone)]
pub struct PointSet<S> {
    dim: usize,
    points: Vec<Vec<S>>,
    policy: TolerancePolicy,
    gram: Vec<S>,
}

impl<S: Scalar> PointSet<S> {
    pub fn new(dim: usize, points: Vec<Vec<S>>, policy: TolerancePolicy) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let gram = gram_matrix(&points);
        let size = points.len();
        let one = S::one();
        for i in 0..size {
            let g = &gram[i * size + i];
            let ok = if S::is_exact() {
                *g == one
            } else {
                (g.to_f64() - 1.0).abs() <= policy.zero
            };
            if !ok {
                return Err(Error::NotUnitNorm {
                    index: i,
                    norm_sq: g.render(policy.digits),
                });
            }
        }
        for i in 0..size {
            for j in (i + 1)..size {
                let g = &gram[i * size + j];
                let dup = if S::is_exact() {
                    *g == one
                } else {
                    g.to_f64() >= 1.0 - policy.snap
                };
                if dup {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(PointSet {
            dim,
            points,
            policy,
            gram,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn policy(&self) -> &TolerancePolicy {
        &self.policy
    }

    pub fn with_policy(mut self, policy: TolerancePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn gram(&self, x: usize, y: usize) -> &S {
        &self.gram[x * self.len() + y]
    }

    pub fn gram_row(&self, x: usize) -> &[S] {
        let n = self.len();
        &self.gram[x * n..(x + 1) * n]
    }

    /// Inner products sorted ascending (the multiset of Gram entries).
    pub fn sorted_gram(&self) -> Vec<S> {
        let mut g = self.gram.clone();
        g.sort_by(|a, b| a.total_cmp(b));
        g
    }
}

impl PointSet<Rational> {
    /// The same points on the float backend.
    pub fn to_float(&self) -> Result<PointSet<f64>> {
        let points = self
            .points
            .iter()
            .map(|p| p.iter().map(Scalar::to_f64).collect())
            .collect();
        PointSet::new(self.dim, points, self.policy)
    }
}

fn gram_matrix<S: Scalar>(points: &[Vec<S>]) -> Vec<S> {
    let n = points.len();
    let upper: Vec<Vec<S>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| dot(&points[i], &points[j]))
                .collect::<Vec<S>>()
        })
        .collect();
    let mut gram = vec![S::zero(); n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + off;
            gram[j * n + i] = v.clone();
            gram[i * n + j] = v;
        }
    }
    gram
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// The set `A(X)` of inner products between distinct points, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum<S> {
    pub values: Vec<S>,
}

impl<S> DistanceSpectrum<S> {
    /// `s = |A(X)|`.
    pub fn degree(&self) -> usize {
        self.values.len()
    }
}

pub fn spectrum<S: Scalar>(x: &PointSet<S>) -> Result<DistanceSpectrum<S>> {
    let n = x.len();
    let mut off_diag = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        off_diag.extend_from_slice(&x.gram_row(i)[i + 1..]);
    }
    let clusters = cluster_values(&off_diag, x.policy.snap)?;
    Ok(DistanceSpectrum {
        values: clusters.representatives,
    })
}

/// Antipodality flag and the antipode of every point, where present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antipodality {
    pub antipodal: bool,
    pub pairing: Vec<Option<usize>>,
}

impl Antipodality {
    pub fn pair_count(&self) -> usize {
        self.pairing.iter().flatten().count() / 2
    }
}

pub fn is_antipodal<S: Scalar>(x: &PointSet<S>) -> Antipodality {
    let minus_one = -S::one();
    let pairing: Vec<Option<usize>> = (0..x.len())
        .map(|i| {
            x.gram_row(i).iter().position(|g| {
                if S::is_exact() {
                    *g == minus_one
                } else {
                    (g.to_f64() + 1.0).abs() <= x.policy.snap
                }
            })
        })
        .collect();
    Antipodality {
        antipodal: pairing.iter().all(Option::is_some),
        pairing,
    }
}

/// `Σ_{x,y ∈ X} Q̃_k(x·y)` for `k = 0..=k_max`.
///
/// By the addition formula this is the squared norm of the degree-`k`
/// moment vector: non-negative, and zero exactly when `X` annihilates
/// `Harm_k`. Equal Gram values are grouped and summed in sorted order,
/// so the float result does not depend on thread count.
pub fn moment_sums<S: Scalar>(
    x: &PointSet<S>,
    basis: &GegenbauerBasis,
    k_max: usize,
) -> Result<Vec<S>> {
    if k_max > basis.cap() {
        return Err(Error::CapExceeded {
            requested: k_max,
            cap: basis.cap(),
        });
    }
    let sorted = x.sorted_gram();
    let mut groups: Vec<(S, i64)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((last, count)) if last.total_cmp(&v) == Ordering::Equal => *count += 1,
            _ => groups.push((v, 1)),
        }
    }
    (0..=k_max)
        .map(|k| {
            groups.iter().try_fold(S::zero(), |acc, (v, count)| {
                Ok(acc + S::from_i64(*count) * basis.eval(k, v)?)
            })
        })
        .collect()
}

/// Largest `t <= t_max` such that `X` is a spherical `t`-design.
pub fn strength<S: Scalar>(x: &PointSet<S>, basis: &GegenbauerBasis, t_max: usize) -> Result<usize> {
    let sums = moment_sums(x, basis, t_max)?;
    let size_sq = (x.len() * x.len()) as f64;
    for (k, sum) in sums.iter().enumerate().skip(1) {
        let h = harm_dim(x.dim(), k)?;
        let threshold = x.policy.zero * size_sq * h.to_string().parse::<f64>().unwrap_or(f64::MAX);
        if !sum.is_zero_within(threshold) {
            return Ok(k - 1);
        }
    }
    Ok(t_max)
}

/// `α_0 = 1, α_1 = -1, α_2, …, α_s` with sign pairs `α_{2i+1} = -α_{2i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductSpectrum<S> {
    alphas: Vec<S>,
}

impl<S: Scalar> InnerProductSpectrum<S> {
    /// Wraps an already ordered list; no validation.
    pub fn from_ordered(alphas: Vec<S>) -> Self {
        InnerProductSpectrum { alphas }
    }

    pub fn alphas(&self) -> &[S] {
        &self.alphas
    }

    pub fn degree(&self) -> usize {
        self.alphas.len() - 1
    }

    /// Index of the spectrum value matching `g`, nearest within `eps` on floats.
    pub fn class_of(&self, g: &S, eps: f64) -> Option<usize> {
        if S::is_exact() {
            return self.alphas.iter().position(|a| a == g);
        }
        self.alphas
            .iter()
            .enumerate()
            .map(|(i, a)| (i, (a.clone() - g.clone()).abs().to_f64()))
            .filter(|&(_, d)| d <= eps)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }
}

/// Orders an antipodal `A(X)` as `(1, -1, -a_1, a_1, -a_2, a_2, …[, 0])`
/// with `a_1 > a_2 > … > 0`.
///
/// Within a sign pair the negative value comes first; this is the
/// ordering under which the parameter tables of the degree-4 families
/// are stated.
pub fn canonical_ordering<S: Scalar>(
    values: &[S],
    antipodal: bool,
    eps_snap: f64,
) -> Result<InnerProductSpectrum<S>> {
    if !antipodal {
        return Err(Error::NotAntipodalSpectrum(
            "point set is not antipodal".into(),
        ));
    }
    let same = |a: &S, b: &S| {
        if S::is_exact() {
            a == b
        } else {
            (a.clone() - b.clone()).abs().to_f64() <= 2.0 * eps_snap
        }
    };
    let minus_one = -S::one();
    let zero = S::zero();
    let minus_pos = values
        .iter()
        .position(|v| same(v, &minus_one))
        .ok_or_else(|| Error::NotAntipodalSpectrum("-1 is not an inner product".into()))?;

    let mut zero_value = None;
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if i == minus_pos {
            continue;
        }
        if same(v, &zero) {
            if zero_value.is_some() {
                return Err(Error::NotAntipodalSpectrum("two values near zero".into()));
            }
            zero_value = Some(v.clone());
        } else if *v > zero {
            positives.push(v.clone());
        } else {
            negatives.push(Some(v.clone()));
        }
    }
    positives.sort_by(|a, b| b.total_cmp(a));

    let mut alphas = vec![S::one(), values[minus_pos].clone()];
    for p in positives {
        let partner = negatives
            .iter_mut()
            .find(|q| q.as_ref().is_some_and(|q| same(&-q.clone(), &p)))
            .and_then(Option::take)
            .ok_or_else(|| {
                Error::NotAntipodalSpectrum(format!("{} has no negative partner", p.render(12)))
            })?;
        alphas.push(partner);
        alphas.push(p);
    }
    if let Some(q) = negatives.into_iter().flatten().next() {
        return Err(Error::NotAntipodalSpectrum(format!(
            "{} has no positive partner",
            q.render(12)
        )));
    }
    if let Some(z) = zero_value {
        alphas.push(z);
    }
    Ok(InnerProductSpectrum { alphas })
}

pub(crate) fn classify_all<S: Scalar>(
    x: &PointSet<S>,
    spectrum: &InnerProductSpectrum<S>,
) -> Result<Vec<u8>> {
    let n = x.len();
    let eps = x.policy.snap;
    let rows: Vec<Result<Vec<u8>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            x.gram_row(i)
                .iter()
                .enumerate()
                .map(|(j, g)| {
                    let class = if i == j { Some(0) } else { spectrum.class_of(g, eps) };
                    match class {
                        Some(c) if (i == j) == (c == 0) => Ok(c as u8),
                        _ => Err(Error::UnclassifiedPair {
                            x: i,
                            y: j,
                            value: g.render(x.policy.digits),
                        }),
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n * n);
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

/// Per-point counts `|{y : x·y = α_i}|` and whether they agree for all `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDistribution {
    pub per_point: Vec<Vec<usize>>,
    pub invariant: bool,
}

pub fn distance_distribution<S: Scalar>(
    x: &PointSet<S>,
    spectrum: &InnerProductSpectrum<S>,
) -> Result<DistanceDistribution> {
    let classes = classify_all(x, spectrum)?;
    let n = x.len();
    let width = spectrum.alphas().len();
    let per_point: Vec<Vec<usize>> = classes
        .chunks(n)
        .map(|row| {
            let mut counts = vec![0; width];
            for &c in row {
                counts[c as usize] += 1;
            }
            counts
        })
        .collect();
    let invariant = per_point.windows(2).all(|w| w[0] == w[1]);
    Ok(DistanceDistribution {
        per_point,
        invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    fn policy() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn square() -> PointSet<Rational> {
        let pts = vec![
            vec![int(1), int(0)],
            vec![int(-1), int(0)],
            vec![int(0), int(1)],
            vec![int(0), int(-1)],
        ];
        PointSet::new(2, pts, policy()).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        let off = vec![vec![ratio(1, 2), ratio(1, 2)]];
        assert!(matches!(
            PointSet::new(2, off, policy()),
            Err(Error::NotUnitNorm { index: 0, .. })
        ));
        let dup = vec![vec![int(1), int(0)], vec![int(1), int(0)]];
        assert!(matches!(
            PointSet::new(2, dup, policy()),
            Err(Error::DuplicatePoint(0, 1))
        ));
        let ragged = vec![vec![int(1), int(0)], vec![int(1)]];
        assert!(matches!(
            PointSet::new(2, ragged, policy()),
            Err(Error::DimensionMismatch { index: 1, .. })
        ));
        assert!(matches!(
            PointSet::<f64>::new(3, vec![], policy()),
            Err(Error::EmptyPointSet)
        ));
        let float_off = vec![vec![1.0 + 1e-6, 0.0]];
        assert!(PointSet::new(2, float_off, policy()).is_err());
    }

    #[test]
    fn square_spectrum_and_pairing() {
        let x = square();
        let sp = spectrum(&x).unwrap();
        assert_eq!(sp.values, vec![int(-1), int(0)]);
        let anti = is_antipodal(&x);
        assert!(anti.antipodal);
        assert_eq!(anti.pairing, vec![Some(1), Some(0), Some(3), Some(2)]);
        let ordered = canonical_ordering(&sp.values, true, 1e-9).unwrap();
        assert_eq!(ordered.alphas(), &[int(1), int(-1), int(0)]);
    }

    #[test]
    fn canonical_ordering_pairs_negative_first() {
        let vals = vec![int(-1), ratio(-1, 2), int(0), ratio(1, 2)];
        let ordered = canonical_ordering(&vals, true, 1e-9).unwrap();
        assert_eq!(
            ordered.alphas(),
            &[int(1), int(-1), ratio(-1, 2), ratio(1, 2), int(0)]
        );
        let two_pairs = vec![ratio(1, 3), int(-1), ratio(-1, 3), ratio(-2, 3), ratio(2, 3)];
        let ordered = canonical_ordering(&two_pairs, true, 1e-9).unwrap();
        assert_eq!(
            ordered.alphas(),
            &[int(1), int(-1), ratio(-2, 3), ratio(2, 3), ratio(-1, 3), ratio(1, 3)]
        );
    }

    #[test]
    fn canonical_ordering_rejects_non_antipodal() {
        assert!(matches!(
            canonical_ordering(&[int(-1), int(0)], false, 1e-9),
            Err(Error::NotAntipodalSpectrum(_))
        ));
        assert!(matches!(
            canonical_ordering(&[ratio(-1, 2), int(0)], true, 1e-9),
            Err(Error::NotAntipodalSpectrum(_))
        ));
        assert!(matches!(
            canonical_ordering(&[int(-1), ratio(1, 2)], true, 1e-9),
            Err(Error::NotAntipodalSpectrum(_))
        ));
    }

    #[test]
    fn float_class_lookup_picks_nearest() {
        let sp = InnerProductSpectrum::from_ordered(vec![1.0, -1.0, -0.5, 0.5, 0.0]);
        assert_eq!(sp.class_of(&(0.5 + 1e-12), 1e-9), Some(3));
        assert_eq!(sp.class_of(&0.25, 1e-9), None);
    }

    #[test]
    fn square_is_a_three_design() {
        let x = square();
        let basis = GegenbauerBasis::new(2, 8).unwrap();
        assert_eq!(strength(&x, &basis, 7).unwrap(), 3);
        let dd = distance_distribution(&x, &canonical_ordering(&spectrum(&x).unwrap().values, true, 1e-9).unwrap()).unwrap();
        assert!(dd.invariant);
        assert_eq!(dd.per_point[0], vec![1, 1, 2]);
        assert!(matches!(
            strength(&x, &basis, 9),
            Err(Error::CapExceeded { .. })
        ));
    }
}
