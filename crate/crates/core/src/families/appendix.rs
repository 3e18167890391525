//! Closed-form parameter tables of the degree-4, strength-5 schemes.
//!
//! The general table is parametrized by `(n, N)` with `|X| = 2N`; entries
//! are rational combinations of `1` and `w = √((n+2)(N-n)/(3N-n²-2n))`,
//! where `w = 1/α`. The MUB table is the special case `n = 4^r`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::surd::Surd;
use crate::error::{Error, Result};
use crate::numerics::{int, is_rational_square, Matrix, Rational, Scalar};

/// `B_0 … B_4`, `P`, `Q` and `B_1^*` in the conventions of the scheme module.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTables<S: Scalar> {
    pub intersection: Vec<Matrix<S>>,
    pub p: Matrix<S>,
    pub q: Matrix<S>,
    pub dual: Matrix<S>,
}

/// Serializable rendering of [`ParameterTables`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedTables {
    pub intersection: Vec<Vec<Vec<String>>>,
    pub p: Vec<Vec<String>>,
    pub q: Vec<Vec<String>>,
    pub dual: Vec<Vec<String>>,
}

pub(crate) fn render_matrix<S: Scalar>(m: &Matrix<S>, digits: usize) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.render(digits)).collect())
        .collect()
}

impl<S: Scalar> ParameterTables<S> {
    pub fn render(&self, digits: usize) -> RenderedTables {
        RenderedTables {
            intersection: self.intersection.iter().map(|b| render_matrix(b, digits)).collect(),
            p: render_matrix(&self.p, digits),
            q: render_matrix(&self.q, digits),
            dual: render_matrix(&self.dual, digits),
        }
    }

    /// Entries that differ by more than `eps` (exactly, on the rational backend),
    /// as `name[i][j]: ours vs theirs`.
    pub fn mismatches(&self, other: &Self, eps: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.intersection.len() != other.intersection.len() {
            out.push("intersection: count mismatch".into());
        }
        let mut cmp = |name: String, a: &Matrix<S>, b: &Matrix<S>| {
            if a.rows() != b.rows() || a.cols() != b.cols() {
                out.push(format!("{name}: shape mismatch"));
                return;
            }
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    if !a[(i, j)].approx_eq(&b[(i, j)], eps) {
                        out.push(format!(
                            "{name}[{i}][{j}]: {} vs {}",
                            a[(i, j)].render(12),
                            b[(i, j)].render(12)
                        ));
                    }
                }
            }
        };
        for (k, (a, b)) in self.intersection.iter().zip(&other.intersection).enumerate() {
            cmp(format!("B{k}"), a, b);
        }
        cmp("P".into(), &self.p, &other.p);
        cmp("Q".into(), &self.q, &other.q);
        cmp("B1*".into(), &self.dual, &other.dual);
        out
    }

    pub fn to_float(&self) -> ParameterTables<f64> {
        let f = |m: &Matrix<S>| m.map(|x| x.to_f64());
        ParameterTables {
            intersection: self.intersection.iter().map(f).collect(),
            p: f(&self.p),
            q: f(&self.q),
            dual: f(&self.dual),
        }
    }
}

pub type SurdMatrix = Vec<Vec<Surd>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Appendix1Parameters {
    pub n: u64,
    pub big_n: u64,
    /// `w² = (n+2)(N-n)/(3N-n²-2n)`.
    pub radicand: Rational,
    /// `α² = 1/w²`.
    pub alpha_squared: Rational,
    pub intersection: Vec<SurdMatrix>,
    pub p: SurdMatrix,
    pub q: SurdMatrix,
    pub dual: SurdMatrix,
}

fn surd_mul(a: &SurdMatrix, b: &SurdMatrix, radicand: &Rational) -> SurdMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Surd::rational(int(0), radicand), |acc, k| {
                        acc + a[i][k].clone() * b[k][j].clone()
                    })
                })
                .collect()
        })
        .collect()
}

impl Appendix1Parameters {
    /// `α`, when it is rational.
    pub fn alpha(&self) -> Option<Rational> {
        is_rational_square(&self.alpha_squared)
    }

    pub fn is_rational(&self) -> bool {
        is_rational_square(&self.radicand).is_some()
    }

    pub fn order(&self) -> u64 {
        2 * self.big_n
    }

    /// The tables as exact rationals, if `α` is rational.
    pub fn tables(&self) -> Option<ParameterTables<Rational>> {
        let conv = |m: &SurdMatrix| -> Option<Matrix<Rational>> {
            let rows = m
                .iter()
                .map(|r| r.iter().map(Surd::to_rational).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?;
            Some(Matrix::from_rows(rows))
        };
        Some(ParameterTables {
            intersection: self.intersection.iter().map(conv).collect::<Option<Vec<_>>>()?,
            p: conv(&self.p)?,
            q: conv(&self.q)?,
            dual: conv(&self.dual)?,
        })
    }

    /// Row 0 of `Q`.
    pub fn multiplicities(&self) -> Vec<Surd> {
        self.q[0].clone()
    }

    /// `q_{ij}^k = (1/|X|) Σ_l P_l(k) Q_i(l) Q_j(l)`, indexed `[i][j][k]`.
    pub fn krein(&self) -> Vec<Vec<Vec<Surd>>> {
        let w = self.p.len();
        let inv = Rational::new(BigInt::from(1), BigInt::from(self.order()));
        (0..w)
            .map(|i| {
                (0..w)
                    .map(|j| {
                        (0..w)
                            .map(|k| {
                                (0..w)
                                    .fold(Surd::rational(int(0), &self.radicand), |acc, l| {
                                        acc + self.p[k][l].clone()
                                            * self.q[l][i].clone()
                                            * self.q[l][j].clone()
                                    })
                                    .scale(&inv)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Whether every Krein number is non-negative (exactly).
    pub fn krein_nonnegative(&self) -> bool {
        self.krein()
            .iter()
            .flatten()
            .flatten()
            .all(|q| q.signum() != Ordering::Less)
    }

    /// `PQ = QP = 2N·I`, exactly.
    pub fn duality_holds(&self) -> bool {
        let w = self.p.len();
        let target = |i: usize, j: usize| {
            Surd::rational(
                if i == j { int(self.order()) } else { int(0) },
                &self.radicand,
            )
        };
        [surd_mul(&self.p, &self.q, &self.radicand), surd_mul(&self.q, &self.p, &self.radicand)]
            .iter()
            .all(|m| (0..w).all(|i| (0..w).all(|j| m[i][j] == target(i, j))))
    }
}

/// Evaluates the general degree-4 table at `(n, N)`.
pub fn appendix1_parameters(n: u64, big_n: u64) -> Result<Appendix1Parameters> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} < 3")));
    }
    let lo = n * (n + 1) / 2;
    let hi = n * (n + 1) * (n + 2) / 6;
    if big_n <= lo || big_n > hi {
        return Err(Error::OutOfRange(format!(
            "N = {big_n} outside ({lo}, {hi}] for n = {n}"
        )));
    }
    let nn = int(n);
    let bn = int(big_n);
    let one = int(1);
    let two = int(2);
    let d = int(3) * &bn - &nn * &nn - &two * &nn;
    let d2 = &d * &d;
    let n_minus = &bn - &nn;
    let e = &two * &bn - &nn * &nn - &nn; // 2N - n² - n
    let f = &two * &bn - &nn * &nn - &two * &nn; // 2N - n² - 2n
    let radicand = (&nn + &two) * &n_minus / &d;
    let alpha_squared = &one / &radicand;

    let c = |q: Rational| Surd::rational(q, &radicand);
    let w = |b: Rational| Surd::root(b, &radicand);
    let zero = || c(int(0));
    let unit = || c(int(1));

    let k = &n_minus * &n_minus * (&nn + &two) / (&nn * &d);
    let g = &n_minus
        * (&bn * &bn * &nn + int(8) * &bn * &bn - int(9) * &nn * &nn * &bn - int(18) * &nn * &bn
            + int(2) * nn.pow(4)
            + int(8) * nn.pow(3)
            + int(8) * &nn * &nn)
        / (&two * &nn * &d2);
    let h = (&bn - &two * &nn) / (&two * &nn);
    let l = &bn * &bn * (&nn - &one) * &e / (&nn * &d2);
    let m = &bn * &n_minus * &n_minus * (&nn + &two) / (&two * &nn * &d2);
    let r = &n_minus * &n_minus * (&nn + &two) * &f / (&nn * &d2);
    let v = &two * &bn * (&nn - &one) * &e / (&nn * &d);
    let y = &two * &bn * (&nn - &one) * &e * &f / (&nn * &d2);
    let z = &two
        * (int(4) * &bn * &bn * &nn - int(4) * nn.pow(3) * &bn + int(6) * &nn * &nn * &bn
            + nn.pow(5)
            - int(5) * nn.pow(3)
            - int(10) * &bn * &bn
            + int(10) * &nn * &bn
            - &two * &nn * &nn)
        * &bn
        / (&nn * &d2);

    let gmh = c(g.clone()) - w(h.clone());
    let gph = c(g) + w(h);

    let identity: SurdMatrix = (0..5)
        .map(|i| (0..5).map(|j| if i == j { unit() } else { zero() }).collect())
        .collect();
    let perm = |cols: [usize; 5]| -> SurdMatrix {
        (0..5)
            .map(|i| (0..5).map(|j| if cols[i] == j { unit() } else { zero() }).collect())
            .collect()
    };
    let b1 = perm([1, 0, 3, 2, 4]);
    let b2 = vec![
        vec![zero(), zero(), unit(), zero(), zero()],
        vec![zero(), zero(), zero(), unit(), zero()],
        vec![c(k.clone()), zero(), gmh.clone(), gph.clone(), c(m.clone())],
        vec![zero(), c(k.clone()), gph.clone(), gmh.clone(), c(m.clone())],
        vec![zero(), zero(), c(l.clone()), c(l.clone()), c(r.clone())],
    ];
    let b3 = vec![
        vec![zero(), zero(), zero(), unit(), zero()],
        vec![zero(), zero(), unit(), zero(), zero()],
        vec![zero(), c(k.clone()), gph.clone(), gmh.clone(), c(m.clone())],
        vec![c(k.clone()), zero(), gmh, gph, c(m)],
        vec![zero(), zero(), c(l.clone()), c(l.clone()), c(r.clone())],
    ];
    let b4 = vec![
        vec![zero(), zero(), zero(), zero(), unit()],
        vec![zero(), zero(), zero(), zero(), unit()],
        vec![zero(), zero(), c(l.clone()), c(l.clone()), c(r.clone())],
        vec![zero(), zero(), c(l.clone()), c(l), c(r)],
        vec![c(v.clone()), c(v.clone()), c(y.clone()), c(y), c(z)],
    ];

    let nd = &nn * &d;
    let p1 = &n_minus / &nn;
    let p2 = &n_minus * &f / &nd;
    let p24 = -(&two * &bn * &e / &nd);
    let p42 = -((&nn + &two) * &n_minus / &d);
    let p44 = &two * (&nn - &one) * &bn / &d;
    let p = vec![
        vec![unit(), unit(), c(k.clone()), c(k), c(v)],
        vec![unit(), c(-one.clone()), w(-p1.clone()), w(p1), zero()],
        vec![unit(), unit(), c(p2.clone()), c(p2), c(p24)],
        vec![unit(), c(-one.clone()), w(one.clone()), w(-one.clone()), zero()],
        vec![unit(), unit(), c(p42.clone()), c(p42), c(p44)],
    ];

    // n/w = (n/w²)·w
    let nu = &nn / &radicand;
    let m2 = (&nn + &two) * (&nn - &one) / &two;
    let m3 = n_minus.clone();
    let m4 = &e / &two;
    let q22 = (&nn - &one) * &f / (&two * &n_minus);
    let q24 = -(&e * &nn / (&two * &n_minus));
    let q = vec![
        vec![unit(), c(nn.clone()), c(m2.clone()), c(m3.clone()), c(m4.clone())],
        vec![unit(), c(-nn.clone()), c(m2), c(-m3), c(m4)],
        vec![unit(), w(-nu.clone()), c(q22.clone()), w(nu.clone()), c(q24.clone())],
        vec![unit(), w(nu.clone()), c(q22), w(-nu), c(q24)],
        vec![unit(), zero(), c(-(&nn + &two) / &two), zero(), c(&nn / &two)],
    ];

    let dual = vec![
        vec![zero(), unit(), zero(), zero(), zero()],
        vec![c(nn.clone()), zero(), c(&two * &nn / (&nn + &two)), zero(), zero()],
        vec![
            zero(),
            c(&nn - &one),
            zero(),
            c((&nn - &one) * &nn * &nn / (&two * &n_minus)),
            zero(),
        ],
        vec![zero(), zero(), c(&nn * &nn / (&nn + &two)), zero(), c(nn.clone())],
        vec![zero(), zero(), zero(), c(&e * &nn / (&two * &n_minus)), zero()],
    ];

    Ok(Appendix1Parameters {
        n,
        big_n,
        radicand,
        alpha_squared,
        intersection: vec![identity, b1, b2, b3, b4],
        p,
        q,
        dual,
    })
}

/// The MUB-family table at `n = 4^r`, `|X| = 2^{4r} + 2^{2r+1}`.
///
/// The four column-4 entries of `B_2` and `B_3` are `t⁴/4 = 2^{4r-2}`
/// (the triple count `p_{i4}^j` at `r = 1` is 4, not 8).
pub fn appendix2_parameters(r: u32) -> Result<ParameterTables<Rational>> {
    if r == 0 || r > 16 {
        return Err(Error::OutOfRange(format!("r = {r} outside 1..=16")));
    }
    let t = int(BigInt::from(2).pow(r));
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    let t4 = &t2 * &t2;
    let one = int(1);
    let two = int(2);
    let z = || int(0);
    let o = || int(1);
    let half_t4 = &t4 / &two;
    let quarter_t4 = &t4 / int(4);
    let lo = &t / int(4) * (&t2 - &two) * (&t - &one);
    let hi = &t / int(4) * (&t2 - &two) * (&t + &one);
    let u = &t2 - &one;

    let identity = Matrix::<Rational>::identity(5);
    let b1 = Matrix::from_rows(vec![
        vec![z(), o(), z(), z(), z()],
        vec![o(), z(), z(), z(), z()],
        vec![z(), z(), z(), o(), z()],
        vec![z(), z(), o(), z(), z()],
        vec![z(), z(), z(), z(), o()],
    ]);
    let b2 = Matrix::from_rows(vec![
        vec![z(), z(), o(), z(), z()],
        vec![z(), z(), z(), o(), z()],
        vec![half_t4.clone(), z(), lo.clone(), hi.clone(), quarter_t4.clone()],
        vec![z(), half_t4.clone(), hi.clone(), lo.clone(), quarter_t4.clone()],
        vec![z(), z(), u.clone(), u.clone(), z()],
    ]);
    let b3 = Matrix::from_rows(vec![
        vec![z(), z(), z(), o(), z()],
        vec![z(), z(), o(), z(), z()],
        vec![z(), half_t4.clone(), hi.clone(), lo.clone(), quarter_t4.clone()],
        vec![half_t4.clone(), z(), lo, hi, quarter_t4],
        vec![z(), z(), u.clone(), u.clone(), z()],
    ]);
    let b4 = Matrix::from_rows(vec![
        vec![z(), z(), z(), z(), o()],
        vec![z(), z(), z(), z(), o()],
        vec![z(), z(), u.clone(), u.clone(), z()],
        vec![z(), z(), u.clone(), u.clone(), z()],
        vec![&two * &u, &two * &u, z(), z(), &two * (&t2 - &two)],
    ]);
    let p = Matrix::from_rows(vec![
        vec![o(), o(), half_t4.clone(), half_t4.clone(), &two * &u],
        vec![o(), -o(), -(&t3 / &two), &t3 / &two, z()],
        vec![o(), o(), z(), z(), -two.clone()],
        vec![o(), -o(), t.clone(), -t.clone(), z()],
        vec![o(), o(), -t2.clone(), -t2.clone(), &two * &u],
    ]);
    let m2 = &u * (&t2 / &two + &one);
    let q = Matrix::from_rows(vec![
        vec![o(), t2.clone(), m2.clone(), half_t4.clone(), &t2 / &two],
        vec![o(), -t2.clone(), m2, -half_t4, &t2 / &two],
        vec![o(), -t.clone(), z(), t.clone(), -o()],
        vec![o(), t.clone(), z(), -t.clone(), -o()],
        vec![o(), z(), -(&t2 / &two) - &one, z(), &t2 / &two],
    ]);
    let dual = Matrix::from_rows(vec![
        vec![z(), o(), z(), z(), z()],
        vec![t2.clone(), z(), &t2 / (&t2 / &two + &one), z(), z()],
        vec![z(), u.clone(), z(), u, z()],
        vec![z(), z(), &t4 / (&t2 + &two), z(), t2.clone()],
        vec![z(), z(), z(), o(), z()],
    ]);
    debug_assert!(!dual[(0, 1)].is_zero());
    Ok(ParameterTables {
        intersection: vec![identity, b1, b2, b3, b4],
        p,
        q,
        dual,
    })
}
