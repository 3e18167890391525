//! Concrete point sets and the parametric tables for degree-4 designs.

mod appendix;
mod mub;
mod scan;
mod surd;

pub use appendix::{
    appendix1_parameters, appendix2_parameters, Appendix1Parameters, ParameterTables,
    RenderedTables, SurdMatrix,
};
pub use mub::{mub_design_from_bases, real_mub_bases, real_mub_design};
pub use scan::{feasibility_scan, scan_cell, FeasibilityCandidate};
pub use surd::Surd;

use crate::error::{Error, Result};
use crate::numerics::{int, ratio, Rational, TolerancePolicy};
use crate::pointset::PointSet;

/// `±e_1, …, ±e_n`.
pub fn cross_polytope(n: usize) -> Result<PointSet<Rational>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut points = Vec::with_capacity(2 * n);
    for i in 0..n {
        for sign in [1, -1] {
            points.push((0..n).map(|j| int(if i == j { sign } else { 0 })).collect());
        }
    }
    PointSet::new(n, points, TolerancePolicy::default())
}

/// The 12 vertices `(0, ±1, ±φ)` and cyclic shifts, normalized.
pub fn icosahedron() -> PointSet<f64> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let norm = (1.0 + phi * phi).sqrt();
    let mut points = Vec::with_capacity(12);
    for shift in 0..3 {
        for (a, b) in [(1.0, phi), (1.0, -phi), (-1.0, phi), (-1.0, -phi)] {
            let mut p = [0.0, a / norm, b / norm];
            p.rotate_right(shift);
            points.push(p.to_vec());
        }
    }
    PointSet::new(3, points, TolerancePolicy::default()).expect("icosahedron is a valid point set")
}

/// `±e_i` together with `(±1/2, ±1/2, ±1/2, ±1/2)`.
pub fn twenty_four_cell() -> PointSet<Rational> {
    let mut points: Vec<Vec<Rational>> = Vec::with_capacity(24);
    for i in 0..4 {
        for sign in [1, -1] {
            points.push((0..4).map(|j| int(if i == j { sign } else { 0 })).collect());
        }
    }
    for signs in 0..16u32 {
        points.push(
            (0..4)
                .map(|j| ratio(if signs >> j & 1 == 1 { -1 } else { 1 }, 2))
                .collect(),
        );
    }
    PointSet::new(4, points, TolerancePolicy::default()).expect("24-cell is a valid point set")
}

/// Regular simplex with `n + 1` vertices on `S^{n-1}`.
pub fn simplex(n: usize) -> Result<PointSet<f64>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let nf = n as f64;
    // e_1, …, e_n and a·(1, …, 1) form a regular simplex with edge √2
    let a = (1.0 - (nf + 1.0).sqrt()) / nf;
    let centroid = (1.0 + a) / (nf + 1.0);
    let mut points: Vec<Vec<f64>> = (0..=n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = if i == n { a } else if i == j { 1.0 } else { 0.0 };
                    v - centroid
                })
                .collect()
        })
        .collect();
    for p in &mut points {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        p.iter_mut().for_each(|x| *x /= norm);
    }
    PointSet::new(n, points, TolerancePolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::is_antipodal;

    #[test]
    fn generator_sizes() {
        assert_eq!(cross_polytope(3).unwrap().len(), 6);
        assert_eq!(icosahedron().len(), 12);
        assert_eq!(twenty_four_cell().len(), 24);
        assert_eq!(simplex(5).unwrap().len(), 6);
        assert!(cross_polytope(1).is_err());
    }

    #[test]
    fn antipodality() {
        assert!(is_antipodal(&cross_polytope(5).unwrap()).antipodal);
        assert!(is_antipodal(&icosahedron()).antipodal);
        assert!(!is_antipodal(&simplex(3).unwrap()).antipodal);
    }

    #[test]
    fn simplex_gram() {
        let s = simplex(4).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { -0.25 };
                assert!((s.gram(i, j) - want).abs() < 1e-12);
            }
        }
    }
}
