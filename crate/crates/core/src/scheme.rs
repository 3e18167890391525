//! Association scheme of an antipodal design: distance classes, exhaustive
//! triple counting, primitive idempotents, eigenmatrices and Krein numbers.
//!
//! Everything above the class matrix works in the `(s+1)`-dimensional
//! Bose-Mesner algebra with basis `D_0, …, D_s` and structure constants
//! `p_{ij}^k`; no `|X| × |X|` matrix is formed after triple counting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result, SchemeWitness};
use crate::gegenbauer::GegenbauerBasis;
use crate::numerics::{Matrix, Scalar, TolerancePolicy};
use crate::pointset::{classify_all, InnerProductSpectrum, PointSet};

/// Seed for the generic element that splits the residual idempotent.
#[allow(clippy::unusual_byte_groupings)]
pub const SPLIT_SEED: u64 = 0x5eed_0f_d1a6;

/// `|X| × |X|` matrix of class indices: entry `i` iff `x·y = α_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    size: usize,
    degree: usize,
    data: Vec<u8>,
}

impl ClassMatrix {
    /// Validates symmetry, a zero diagonal and class range `0..=degree`.
    pub fn from_raw(size: usize, degree: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::InvalidClassMatrix(format!(
                "expected {} entries, got {}",
                size * size,
                data.len()
            )));
        }
        if degree > u8::MAX as usize - 1 {
            return Err(Error::InvalidClassMatrix("too many classes".into()));
        }
        for x in 0..size {
            for y in 0..size {
                let c = data[x * size + y];
                if c as usize > degree {
                    return Err(Error::InvalidClassMatrix(format!(
                        "class {c} at ({x}, {y}) exceeds degree {degree}"
                    )));
                }
                if (x == y) != (c == 0) {
                    return Err(Error::InvalidClassMatrix(format!(
                        "class 0 must be exactly the diagonal; found {c} at ({x}, {y})"
                    )));
                }
                if c != data[y * size + x] {
                    return Err(Error::InvalidClassMatrix(format!(
                        "asymmetric at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(ClassMatrix { size, degree, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of nontrivial classes `s`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        self.data[x * self.size + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.data[x * self.size..(x + 1) * self.size]
    }

    /// Moves the pair `{x, y}` to another nontrivial class.
    pub fn relabel_pair(&mut self, x: usize, y: usize, class: usize) -> Result<()> {
        if x == y || class == 0 || class > self.degree {
            return Err(Error::InvalidClassMatrix(format!(
                "cannot relabel ({x}, {y}) to class {class}"
            )));
        }
        self.data[x * self.size + y] = class as u8;
        self.data[y * self.size + x] = class as u8;
        Ok(())
    }

    /// Whether class 1 pairs every point with exactly one other.
    pub fn class_one_is_matching(&self) -> bool {
        (0..self.size).all(|x| self.row(x).iter().filter(|&&c| c == 1).count() == 1)
    }
}

pub fn build_classes<S: Scalar>(
    x: &PointSet<S>,
    spectrum: &InnerProductSpectrum<S>,
) -> Result<ClassMatrix> {
    let data = classify_all(x, spectrum)?;
    ClassMatrix::from_raw(x.len(), spectrum.degree(), data)
}

/// Valencies and intersection numbers of a symmetric association scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociationScheme {
    order: usize,
    degree: usize,
    valencies: Vec<u64>,
    // p[(k * w + i) * w + j] = p_{ij}^k
    numbers: Vec<u64>,
}

impl AssociationScheme {
    /// `|X|`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valencies
    }

    /// `p_{ij}^k`.
    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        let w = self.degree + 1;
        self.numbers[(k * w + i) * w + j]
    }

    /// `B_i` with `B_i(j, k) = p_{ij}^k`.
    pub fn intersection_matrix<S: Scalar>(&self, i: usize) -> Matrix<S> {
        let w = self.degree + 1;
        Matrix::from_fn(w, w, |j, k| S::from_i64(self.p(i, j, k) as i64))
    }

    /// Checks the standard identities; returns the first violated one.
    pub fn check_identities(&self) -> std::result::Result<(), String> {
        let w = self.degree + 1;
        let k = &self.valencies;
        for a in 0..w {
            for b in 0..w {
                for c in 0..w {
                    if self.p(0, b, c) != u64::from(b == c) {
                        return Err(format!("p_0{b}^{c} != delta"));
                    }
                    if self.p(a, b, c) != self.p(b, a, c) {
                        return Err(format!("p_{a}{b}^{c} != p_{b}{a}^{c}"));
                    }
                    if k[c] * self.p(a, b, c) != k[a] * self.p(c, b, a) {
                        return Err(format!("k_{c} p_{a}{b}^{c} != k_{a} p_{c}{b}^{a}"));
                    }
                }
                if (0..w).map(|j| self.p(a, j, b)).sum::<u64>() != k[a] {
                    return Err(format!("sum_j p_{a}j^{b} != k_{a}"));
                }
            }
        }
        if k.iter().sum::<u64>() != self.order as u64 {
            return Err("valencies do not sum to |X|".into());
        }
        Ok(())
    }
}

/// Exhaustive triple counting.
///
/// For every ordered pair `(x, y)` the table
/// `|{z : class(x,z) = i, class(z,y) = j}|` is compared against the table of
/// the first pair (row-major) in the same class. Any disagreement is a
/// [`Error::NotAScheme`] carrying the first offending pair.
pub fn intersection_numbers(classes: &ClassMatrix) -> Result<AssociationScheme> {
    let n = classes.size();
    let w = classes.degree() + 1;

    let table = |x: usize, y: usize, counts: &mut [u64]| {
        counts.iter_mut().for_each(|c| *c = 0);
        for (&a, &b) in classes.row(x).iter().zip(classes.row(y)) {
            counts[a as usize * w + b as usize] += 1;
        }
    };

    // per class: first pair seen and its triple counts
    type Reference = Option<((usize, usize), Vec<u64>)>;
    let mut reference: Vec<Reference> = vec![None; w];
    let mut missing = w;
    'outer: for x in 0..n {
        for y in 0..n {
            let c = classes.class(x, y);
            if reference[c].is_none() {
                let mut counts = vec![0; w * w];
                table(x, y, &mut counts);
                reference[c] = Some(((x, y), counts));
                missing -= 1;
                if missing == 0 {
                    break 'outer;
                }
            }
        }
    }
    if let Some(k) = reference.iter().position(Option::is_none) {
        return Err(Error::InvalidClassMatrix(format!("class {k} is empty")));
    }
    let reference: Vec<((usize, usize), Vec<u64>)> = reference.into_iter().flatten().collect();

    let witnesses: Vec<Option<SchemeWitness>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut counts = vec![0; w * w];
            for y in 0..n {
                let c = classes.class(x, y);
                table(x, y, &mut counts);
                let (pair, expected) = &reference[c];
                if let Some(idx) = (0..w * w).find(|&idx| counts[idx] != expected[idx]) {
                    return Some(SchemeWitness {
                        reference: *pair,
                        offending: (x, y),
                        class: c,
                        indices: (idx / w, idx % w),
                        expected: expected[idx],
                        found: counts[idx],
                    });
                }
            }
            None
        })
        .collect();
    if let Some(w) = witnesses.into_iter().flatten().next() {
        return Err(Error::NotAScheme(Box::new(w)));
    }

    let mut numbers = vec![0; w * w * w];
    for (k, (_, counts)) in reference.iter().enumerate() {
        numbers[k * w * w..(k + 1) * w * w].copy_from_slice(counts);
    }
    let valencies = (0..w).map(|i| reference[0].1[i * w + i]).collect();
    Ok(AssociationScheme {
        order: n,
        degree: w - 1,
        valencies,
        numbers,
    })
}

/// The Bose-Mesner algebra in the basis `D_0, …, D_s`.
#[derive(Debug, Clone)]
pub struct BoseMesner<S> {
    width: usize,
    constants: Vec<S>,
}

impl<S: Scalar> BoseMesner<S> {
    pub fn new(scheme: &AssociationScheme) -> Self {
        let w = scheme.degree() + 1;
        let mut constants = Vec::with_capacity(w * w * w);
        for i in 0..w {
            for j in 0..w {
                for k in 0..w {
                    constants.push(S::from_i64(scheme.p(i, j, k) as i64));
                }
            }
        }
        BoseMesner {
            width: w,
            constants,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let w = self.width;
        let mut out = vec![S::zero(); w];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero_within(0.0) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero_within(0.0) {
                    continue;
                }
                let ab = ai.clone() * bj.clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.constants[(i * w + j) * w + k];
                    if !c.is_zero_within(0.0) {
                        *o = o.clone() + ab.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn basis(&self, j: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.width];
        v[j] = S::one();
        v
    }
}

fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

fn vec_approx_eq<S: Scalar>(a: &[S], b: &[S], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| x.approx_eq(y, eps))
}

/// Index of the entry with the largest magnitude.
fn pivot<S: Scalar>(a: &[S]) -> usize {
    (0..a.len())
        .max_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
        .unwrap_or(0)
}

/// Rank of a set of vectors by elimination.
fn rank<S: Scalar>(mut rows: Vec<Vec<S>>, eps: f64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len())
            .max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs()))
            .filter(|&p| !rows[p][c].is_zero_within(eps))
        else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero_within(0.0) {
                let f = rows[i][c].clone() / rows[r][c].clone();
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        r += 1;
    }
    r
}

/// How the last two idempotents were told apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualRule {
    /// Residual was already primitive.
    Single,
    /// `P_1(s-1) = (-1)^(s-1)`.
    P1Sign,
    /// Both residual pieces had the same `P_1`; ordered by descending rank.
    DescendingRank,
}

/// Record of how the primitive idempotents were ordered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentOrdering {
    /// `E_0 … E_{g-1}` come from Gegenbauer polynomials.
    pub gegenbauer: usize,
    pub residual_rule: ResidualRule,
    /// Coefficients `c_j` of the generic element `Σ c_j D_j` used for the split.
    pub generic_coefficients: Vec<i64>,
}

/// Primitive idempotents as coefficient vectors: `E_i = Σ_j e_i[j] D_j`.
#[derive(Debug, Clone)]
pub struct Idempotents<S> {
    pub vectors: Vec<Vec<S>>,
    pub ordering: IdempotentOrdering,
}

/// Eigenvalue `λ` with `a·e = λ e`, if `e` is an eigenvector.
fn eigenvalue_on<S: Scalar>(algebra: &BoseMesner<S>, a: &[S], e: &[S], eps: f64) -> Option<S> {
    let prod = algebra.mul(a, e);
    let k = pivot(e);
    if e[k].is_zero_within(0.0) {
        return None;
    }
    let lambda = prod[k].clone() / e[k].clone();
    vec_approx_eq(&prod, &scale(e, &lambda), eps).then_some(lambda)
}

/// Primitive idempotents `E_0 … E_s` of the Bose-Mesner algebra.
///
/// `E_i = (1/|X|) Σ_j Q̃_i(α_j) D_j` for `i <= s-2`; the residual
/// `I - Σ E_i` is split by diagonalizing a generic element on it.
pub fn idempotents<S: Scalar>(
    spectrum: &InnerProductSpectrum<S>,
    scheme: &AssociationScheme,
    basis: &GegenbauerBasis,
    policy: &TolerancePolicy,
) -> Result<Idempotents<S>> {
    let s = scheme.degree();
    let w = s + 1;
    let eps = policy.zero;
    let order = S::from_i64(scheme.order() as i64);
    let algebra = BoseMesner::<S>::new(scheme);
    let gegenbauer = s.max(2) - 1;

    let mut vectors: Vec<Vec<S>> = Vec::with_capacity(w);
    for i in 0..gegenbauer {
        let e = spectrum
            .alphas()
            .iter()
            .map(|a| Ok(basis.eval(i, a)? / order.clone()))
            .collect::<Result<Vec<S>>>()?;
        vectors.push(e);
    }
    for (i, e) in vectors.iter().enumerate() {
        for (j, f) in vectors.iter().enumerate().take(i + 1) {
            let prod = algebra.mul(e, f);
            let want = if i == j { e.clone() } else { vec![S::zero(); w] };
            if !vec_approx_eq(&prod, &want, eps) {
                return Err(Error::NotIdempotent {
                    index: i,
                    reason: format!("E_{i} E_{j} != delta E_{i}"),
                });
            }
        }
    }

    let residual = vectors
        .iter()
        .fold(algebra.basis(0), |acc, e| sub(&acc, e));
    let ideal: Vec<Vec<S>> = (0..w)
        .map(|j| algebra.mul(&residual, &algebra.basis(j)))
        .collect();
    let dim = rank(ideal, eps);
    let mut generic_coefficients = Vec::new();

    let residual_rule = match dim {
        1 => {
            vectors.push(residual);
            ResidualRule::Single
        }
        2 => {
            let (a, b, coeffs) = split_residual(&algebra, &residual, eps)?;
            generic_coefficients = coeffs;
            let d1 = algebra.basis(1);
            let target = if (s - 1).is_multiple_of(2) { S::one() } else { -S::one() };
            let sign_of = |e: &[S]| eigenvalue_on(&algebra, &d1, e, eps);
            let (pa, pb) = (sign_of(&a), sign_of(&b));
            match (pa, pb) {
                (Some(pa), Some(pb)) if pa.approx_eq(&target, eps) && pb.approx_eq(&-target.clone(), eps) => {
                    vectors.push(a);
                    vectors.push(b);
                    ResidualRule::P1Sign
                }
                (Some(pa), Some(pb)) if pb.approx_eq(&target, eps) && pa.approx_eq(&-target.clone(), eps) => {
                    vectors.push(b);
                    vectors.push(a);
                    ResidualRule::P1Sign
                }
                _ => {
                    // ranks are |X| e(0)
                    if a[0].total_cmp(&b[0]).is_ge() {
                        vectors.push(a);
                        vectors.push(b);
                    } else {
                        vectors.push(b);
                        vectors.push(a);
                    }
                    ResidualRule::DescendingRank
                }
            }
        }
        d => {
            return Err(Error::SplitFailure(format!(
                "residual spans {d} primitive idempotents, expected 2"
            )))
        }
    };

    // full consistency: orthogonal idempotents summing to the identity
    let total = vectors
        .iter()
        .fold(vec![S::zero(); w], |acc, e| {
            acc.iter().zip(e).map(|(x, y)| x.clone() + y.clone()).collect()
        });
    if !vec_approx_eq(&total, &algebra.basis(0), eps) {
        return Err(Error::SplitFailure("idempotents do not sum to I".into()));
    }
    for (i, e) in vectors.iter().enumerate() {
        let rank = e[0].clone() * order.clone();
        if rank.to_f64() < 0.5 || (rank.to_f64() - rank.to_f64().round()).abs() > eps * rank.to_f64().max(1.0) {
            return Err(Error::NotIdempotent {
                index: i,
                reason: format!("rank {} is not a positive integer", rank.render(policy.digits)),
            });
        }
        for (j, f) in vectors.iter().enumerate() {
            let prod = algebra.mul(e, f);
            let want = if i == j { e.clone() } else { vec![S::zero(); w] };
            if !vec_approx_eq(&prod, &want, eps) {
                return Err(Error::NotIdempotent {
                    index: i,
                    reason: format!("E_{i} E_{j} != delta E_{i}"),
                });
            }
        }
    }

    Ok(Idempotents {
        vectors,
        ordering: IdempotentOrdering {
            gegenbauer,
            residual_rule,
            generic_coefficients,
        },
    })
}

const SPLIT_ATTEMPTS: usize = 16;

/// Splits a rank-two residual idempotent `R` into `E_a + E_b`.
///
/// `T = R·A` for a generic `A` satisfies `T² = σT - πR`; its two
/// eigenvalues `θ_a ≠ θ_b` give `E_a = (T - θ_b R)/(θ_a - θ_b)`.
fn split_residual<S: Scalar>(
    algebra: &BoseMesner<S>,
    residual: &[S],
    eps: f64,
) -> Result<(Vec<S>, Vec<S>, Vec<i64>)> {
    let w = algebra.width();
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    for _ in 0..SPLIT_ATTEMPTS {
        let coeffs: Vec<i64> = (0..w).map(|_| rng.gen_range(1..=97)).collect();
        let generic: Vec<S> = coeffs.iter().map(|&c| S::from_i64(c)).collect();
        let t = algebra.mul(residual, &generic);
        let t2 = algebra.mul(&t, &t);

        // t2 = sigma t - pi r, from the best-conditioned pair of coordinates
        let mut best: Option<(usize, usize, S)> = None;
        for a in 0..w {
            for b in (a + 1)..w {
                let det = t[a].clone() * residual[b].clone() - t[b].clone() * residual[a].clone();
                if best.as_ref().is_none_or(|(_, _, d)| det.abs().total_cmp(&d.abs()).is_gt()) {
                    best = Some((a, b, det));
                }
            }
        }
        let Some((a, b, det)) = best else {
            return Err(Error::SplitFailure("algebra too small".into()));
        };
        if det.is_zero_within(eps) {
            continue;
        }
        let sigma = (t2[a].clone() * residual[b].clone() - t2[b].clone() * residual[a].clone()) / det.clone();
        let pi = (t[b].clone() * t2[a].clone() - t[a].clone() * t2[b].clone()) / det;
        let check: Vec<S> = t
            .iter()
            .zip(residual)
            .map(|(x, r)| sigma.clone() * x.clone() - pi.clone() * r.clone())
            .collect();
        if !vec_approx_eq(&t2, &check, eps) {
            return Err(Error::SplitFailure(
                "generic element has no quadratic minimal polynomial on the residual".into(),
            ));
        }
        let two = S::from_i64(2);
        let disc = sigma.clone() * sigma.clone() - S::from_i64(4) * pi;
        if disc.is_zero_within(eps) {
            continue;
        }
        let root = disc.sqrt(eps).ok_or_else(|| {
            Error::SplitFailure(format!(
                "residual eigenvalues are not in the backend (discriminant {})",
                disc.render(12)
            ))
        })?;
        let theta_a = (sigma.clone() + root.clone()) / two.clone();
        let theta_b = (sigma - root) / two;
        let gap = theta_a.clone() - theta_b.clone();
        let ea = scale(&sub(&t, &scale(residual, &theta_b)), &(S::one() / gap));
        let eb = sub(residual, &ea);
        return Ok((ea, eb, coeffs));
    }
    Err(Error::SplitFailure(format!(
        "no separating generic element in {SPLIT_ATTEMPTS} attempts"
    )))
}

/// `P` (rows: idempotents, columns: classes), `Q` (rows: classes,
/// columns: idempotents) and multiplicities `m_i = Q_i(0)`.
#[derive(Debug, Clone)]
pub struct Eigenmatrices<S: Scalar> {
    pub p: Matrix<S>,
    pub q: Matrix<S>,
    pub multiplicities: Vec<S>,
}

pub fn eigenmatrices<S: Scalar>(
    scheme: &AssociationScheme,
    idempotents: &Idempotents<S>,
    policy: &TolerancePolicy,
) -> Result<Eigenmatrices<S>> {
    let algebra = BoseMesner::<S>::new(scheme);
    let w = algebra.width();
    let eps = policy.zero;
    let order = S::from_i64(scheme.order() as i64);
    let e = &idempotents.vectors;

    let mut p = Matrix::zeros(w, w);
    for i in 0..w {
        for j in 0..w {
            p[(i, j)] = eigenvalue_on(&algebra, &algebra.basis(j), &e[i], eps).ok_or_else(|| {
                Error::NonDiagonalizable(format!("E_{i} is not an eigenvector of D_{j}"))
            })?;
        }
    }
    let q = Matrix::from_fn(w, w, |l, i| e[i][l].clone() * order.clone());
    let multiplicities: Vec<S> = (0..w).map(|i| q[(0, i)].clone()).collect();

    let pq = p.mul(&q);
    if !pq.approx_eq(&Matrix::identity(w).scale(&order), eps) {
        return Err(Error::NonDiagonalizable("PQ != |X| I".into()));
    }
    // sum_l p_{1j}^l P_l(mu) = P_j(mu) P_1(mu)
    for mu in 0..w {
        for j in 0..w {
            let lhs = (0..w).fold(S::zero(), |acc, l| {
                acc + S::from_i64(scheme.p(1, j, l) as i64) * p[(mu, l)].clone()
            });
            let rhs = p[(mu, j)].clone() * p[(mu, 1)].clone();
            if !lhs.approx_eq(&rhs, eps) {
                return Err(Error::NonDiagonalizable(format!(
                    "B_1 relation fails at (j, mu) = ({j}, {mu})"
                )));
            }
        }
    }
    Ok(Eigenmatrices {
        p,
        q,
        multiplicities,
    })
}

/// Krein numbers `q_{ij}^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinArray<S> {
    width: usize,
    data: Vec<S>,
}

impl<S: Scalar> KreinArray<S> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.data[(i * self.width + j) * self.width + k]
    }

    pub fn min(&self) -> S {
        self.data
            .iter()
            .min_by(|a, b| a.total_cmp(b))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Nested `[i][j][k]` layout.
    pub fn to_nested(&self) -> Vec<Vec<Vec<S>>> {
        let w = self.width;
        (0..w)
            .map(|i| (0..w).map(|j| (0..w).map(|k| self.get(i, j, k).clone()).collect()).collect())
            .collect()
    }
}

/// Solves `Q_i(l) Q_j(l) = Σ_μ q_{ij}^μ Q_μ(l)` for every `i <= j`.
pub fn krein_numbers<S: Scalar>(q: &Matrix<S>, policy: &TolerancePolicy) -> Result<KreinArray<S>> {
    let w = q.rows();
    let pairs: Vec<(usize, usize)> = (0..w).flat_map(|i| (i..w).map(move |j| (i, j))).collect();
    let rhs = Matrix::from_fn(w, pairs.len(), |l, c| {
        let (i, j) = pairs[c];
        q[(l, i)].clone() * q[(l, j)].clone()
    });
    let sol = q.solve(&rhs, policy.zero * 1e-4)?;
    let mut data = vec![S::zero(); w * w * w];
    for (c, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..w {
            let v = sol[(k, c)].clone();
            if !S::is_exact() && v.to_f64() < -policy.zero {
                return Err(Error::NegativeKrein {
                    i,
                    j,
                    k,
                    value: v.render(policy.digits),
                });
            }
            if S::is_exact() && v < S::zero() {
                return Err(Error::NegativeKrein {
                    i,
                    j,
                    k,
                    value: v.render(policy.digits),
                });
            }
            data[(i * w + j) * w + k] = v.clone();
            data[(j * w + i) * w + k] = v;
        }
    }
    Ok(KreinArray { width: w, data })
}

/// `B_1^*` with `B_1^*(i, j) = q_{1i}^j`.
pub fn dual_intersection_matrix<S: Scalar>(krein: &KreinArray<S>) -> Matrix<S> {
    let w = krein.width();
    Matrix::from_fn(w, w, |i, j| krein.get(1, i, j).clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QPolynomialCheck {
    pub tridiagonal: bool,
    /// Idempotent order under which the check was made.
    pub ordering: Vec<usize>,
}

/// Whether `B_1^*` is tri-diagonal under the idempotent order as computed.
pub fn q_polynomial_ordering<S: Scalar>(krein: &KreinArray<S>, eps: f64) -> QPolynomialCheck {
    let b = dual_intersection_matrix(krein);
    let w = b.rows();
    let tridiagonal = (0..w).all(|i| {
        (0..w).all(|j| i.abs_diff(j) <= 1 || b[(i, j)].is_zero_within(eps))
    });
    QPolynomialCheck {
        tridiagonal,
        ordering: (0..w).collect(),
    }
}

/// All parameters of the scheme under the canonical orderings.
#[derive(Debug, Clone)]
pub struct SchemeParameters<S: Scalar> {
    pub valencies: Vec<u64>,
    pub p: Matrix<S>,
    pub q: Matrix<S>,
    pub multiplicities: Vec<S>,
    pub krein: KreinArray<S>,
    /// `B_0 … B_s`.
    pub intersection: Vec<Matrix<S>>,
    pub dual: Matrix<S>,
    pub ordering: IdempotentOrdering,
    pub q_polynomial: QPolynomialCheck,
}

impl<S: Scalar> SchemeParameters<S> {
    pub fn compute(
        spectrum: &InnerProductSpectrum<S>,
        scheme: &AssociationScheme,
        basis: &GegenbauerBasis,
        policy: &TolerancePolicy,
    ) -> Result<Self> {
        let idem = idempotents(spectrum, scheme, basis, policy)?;
        let eig = eigenmatrices(scheme, &idem, policy)?;
        let krein = krein_numbers(&eig.q, policy)?;
        let dual = dual_intersection_matrix(&krein);
        let q_polynomial = q_polynomial_ordering(&krein, policy.zero);
        let intersection = (0..=scheme.degree())
            .map(|i| scheme.intersection_matrix(i))
            .collect();
        Ok(SchemeParameters {
            valencies: scheme.valencies().to_vec(),
            p: eig.p,
            q: eig.q,
            multiplicities: eig.multiplicities,
            krein,
            intersection,
            dual,
            ordering: idem.ordering,
            q_polynomial,
        })
    }

    pub fn degree(&self) -> usize {
        self.valencies.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, Rational};

    #[test]
    fn two_antipodal_points() {
        let x = PointSet::new(1, vec![vec![int(1)], vec![int(-1)]], TolerancePolicy::default());
        // dimension 1 is a valid point set even though Gegenbauer needs n >= 2
        let x = x.unwrap();
        let sp = InnerProductSpectrum::from_ordered(vec![int(1), int(-1)]);
        let c = build_classes(&x, &sp).unwrap();
        assert_eq!(c.row(0), &[0, 1]);
        assert_eq!(c.row(1), &[1, 0]);
        assert!(c.class_one_is_matching());
    }

    #[test]
    fn class_matrix_validation() {
        assert!(ClassMatrix::from_raw(2, 1, vec![0, 1, 1, 0]).is_ok());
        assert!(ClassMatrix::from_raw(2, 1, vec![0, 1, 0, 0]).is_err());
        assert!(ClassMatrix::from_raw(2, 1, vec![1, 1, 1, 0]).is_err());
        assert!(ClassMatrix::from_raw(2, 1, vec![0, 2, 2, 0]).is_err());
        let mut c = ClassMatrix::from_raw(2, 1, vec![0, 1, 1, 0]).unwrap();
        assert!(c.relabel_pair(0, 0, 1).is_err());
        assert!(c.relabel_pair(0, 1, 2).is_err());
    }

    #[test]
    fn square_scheme() {
        // classes of the square: 0 diag, 1 antipode, 2 orthogonal
        let data = vec![0, 1, 2, 2, 1, 0, 2, 2, 2, 2, 0, 1, 2, 2, 1, 0];
        let c = ClassMatrix::from_raw(4, 2, data).unwrap();
        let scheme = intersection_numbers(&c).unwrap();
        assert_eq!(scheme.valencies(), &[1, 1, 2]);
        assert_eq!(scheme.p(2, 2, 2), 0);
        assert_eq!(scheme.p(2, 2, 0), 2);
        assert_eq!(scheme.p(2, 2, 1), 2);
        scheme.check_identities().unwrap();
        let b1: Matrix<Rational> = scheme.intersection_matrix(1);
        assert_eq!(
            b1,
            Matrix::from_rows(vec![
                vec![int(0), int(1), int(0)],
                vec![int(1), int(0), int(0)],
                vec![int(0), int(0), int(1)],
            ])
        );
    }

    #[test]
    fn non_scheme_is_caught_with_witness() {
        // path-like 4-cycle relabelled: classes no longer regular
        let data = vec![0, 1, 2, 2, 1, 0, 2, 1, 2, 2, 0, 1, 2, 1, 1, 0];
        let c = ClassMatrix::from_raw(4, 2, data).unwrap();
        match intersection_numbers(&c) {
            Err(Error::NotAScheme(w)) => assert_ne!(w.expected, w.found),
            other => panic!("expected NotAScheme, got {other:?}"),
        }
    }
}
