//! Real mutually unbiased bases in dimension `4^r` from binary quadratic forms.
//!
//! For `m = 2r` bits, take a set of `2^{m-1}` alternating `m × m` binary
//! matrices whose pairwise differences are all nonsingular. Each member
//! `B` gives the basis `v_a(x) = (-1)^{q_B(x) + a·x} / 2^r`, where `q_B` is
//! the quadratic form with the upper triangle of `B`. Together with the
//! standard basis these are `2^{2r-1} + 1` mutually unbiased bases.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{int, Rational, Scalar, TolerancePolicy};
use crate::pointset::PointSet;

/// Alternating matrix over GF(2), stored as a bitmask over pairs `i < j`.
type Alternating = u32;

fn pair_index(m: usize, i: usize, j: usize) -> usize {
    // row-major over the strict upper triangle
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

fn entry(mask: Alternating, m: usize, i: usize, j: usize) -> bool {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i != j && mask >> pair_index(m, i, j) & 1 == 1
}

/// Rank over GF(2).
fn rank_gf2(mask: Alternating, m: usize) -> usize {
    let mut rows: Vec<u32> = (0..m)
        .map(|i| (0..m).fold(0, |acc, j| acc | (u32::from(entry(mask, m, i, j)) << j)))
        .collect();
    let mut rank = 0;
    for bit in 0..m {
        if let Some(p) = (rank..m).find(|&r| rows[r] >> bit & 1 == 1) {
            rows.swap(rank, p);
            for r in 0..m {
                if r != rank && rows[r] >> bit & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
    }
    rank
}

/// First (in lexicographic order) set of `2^{m-1}` alternating matrices,
/// containing zero, whose pairwise differences are all nonsingular.
///
/// A linear space with this property cannot exist for `m >= 4`: the
/// Pfaffian is a quadratic form, isotropic on any 3-dimensional subspace.
fn kerdock_set(m: usize) -> Option<Vec<Alternating>> {
    let pairs = m * (m - 1) / 2;
    let nonsingular: Vec<Alternating> = (1..1u32 << pairs)
        .filter(|&a| rank_gf2(a, m) == m)
        .collect();
    let target = 1usize << (m - 1);

    fn extend(
        set: &mut Vec<Alternating>,
        candidates: &[Alternating],
        target: usize,
        m: usize,
    ) -> bool {
        if set.len() == target {
            return true;
        }
        if set.len() + candidates.len() < target {
            return false;
        }
        for (idx, &c) in candidates.iter().enumerate() {
            if set.iter().all(|&v| rank_gf2(v ^ c, m) == m) {
                set.push(c);
                if extend(set, &candidates[idx + 1..], target, m) {
                    return true;
                }
                set.pop();
            }
        }
        false
    }

    let mut set = vec![0];
    extend(&mut set, &nonsingular, target, m).then_some(set)
}

fn quadratic_form(mask: Alternating, m: usize, x: usize) -> bool {
    let mut acc = false;
    for i in 0..m {
        for j in (i + 1)..m {
            if x >> i & 1 == 1 && x >> j & 1 == 1 && entry(mask, m, i, j) {
                acc = !acc;
            }
        }
    }
    acc
}

/// The `2^{2r-1} + 1` bases of `ℝ^{4^r}`, standard basis first.
pub fn real_mub_bases(r: u32) -> Result<Vec<Vec<Vec<Rational>>>> {
    if !(1..=2).contains(&r) {
        return Err(Error::ConstructionUnavailable(format!(
            "real MUBs are implemented for r in 1..=2, got r = {r}"
        )));
    }
    let m = 2 * r as usize;
    let n = 1usize << m;
    let space = kerdock_set(m).ok_or_else(|| {
        Error::ConstructionUnavailable(format!("no Kerdock set found for m = {m}"))
    })?;
    let scale = Rational::new(BigInt::from(1), BigInt::from(1u64 << r));
    let mut bases = vec![(0..n)
        .map(|i| (0..n).map(|j| int(i64::from(i == j))).collect())
        .collect()];
    for &b in &space {
        let basis = (0..n)
            .map(|a| {
                (0..n)
                    .map(|x| {
                        let odd = quadratic_form(b, m, x) ^ ((a & x).count_ones() % 2 == 1);
                        if odd {
                            -scale.clone()
                        } else {
                            scale.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        bases.push(basis);
    }
    Ok(bases)
}

/// Checks orthonormality within each basis and `|u·v|² = 1/n` across bases,
/// then returns the `±` closure of all basis vectors.
pub fn mub_design_from_bases<S: Scalar>(
    dim: usize,
    bases: &[Vec<Vec<S>>],
    policy: TolerancePolicy,
) -> Result<PointSet<S>> {
    let dot = |a: &[S], b: &[S]| {
        a.iter()
            .zip(b)
            .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    };
    let inv_n = S::one() / S::from_i64(dim as i64);
    for (bi, basis) in bases.iter().enumerate() {
        if basis.len() != dim {
            return Err(Error::ConstructionUnavailable(format!(
                "basis {bi} has {} vectors, expected {dim}",
                basis.len()
            )));
        }
        for (vi, v) in basis.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    index: vi,
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        for (bj, other) in bases.iter().enumerate().skip(bi) {
            for (vi, u) in basis.iter().enumerate() {
                for (vj, v) in other.iter().enumerate() {
                    let g = dot(u, v);
                    let (want, what) = if bi != bj {
                        (inv_n.clone(), "unbiased")
                    } else if vi == vj {
                        (S::one(), "unit")
                    } else {
                        (S::zero(), "orthogonal")
                    };
                    let got = if bi != bj { g.clone() * g } else { g };
                    if !got.approx_eq(&want, policy.zero) {
                        return Err(Error::ConstructionUnavailable(format!(
                            "vectors {vi} of basis {bi} and {vj} of basis {bj} are not {what}"
                        )));
                    }
                }
            }
        }
    }
    let mut points = Vec::with_capacity(2 * dim * bases.len());
    for basis in bases {
        for v in basis {
            points.push(v.clone());
            points.push(v.iter().map(|x| -x.clone()).collect());
        }
    }
    PointSet::new(dim, points, policy)
}

/// The `±` closure of [`real_mub_bases`]: `2^{4r} + 2^{2r+1}` points in `ℝ^{4^r}`.
pub fn real_mub_design(r: u32) -> Result<PointSet<Rational>> {
    let bases = real_mub_bases(r)?;
    mub_design_from_bases(1 << (2 * r), &bases, TolerancePolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfaffian_agrees_with_rank() {
        // 4×4: nonsingular iff b01·b23 + b02·b13 + b03·b12 = 1
        for mask in 0..64u32 {
            let b = |i, j| u32::from(entry(mask, 4, i, j));
            let pf = (b(0, 1) * b(2, 3) + b(0, 2) * b(1, 3) + b(0, 3) * b(1, 2)) % 2;
            assert_eq!(pf == 1, rank_gf2(mask, 4) == 4, "mask {mask:06b}");
        }
    }

    #[test]
    fn kerdock_sets_exist() {
        assert_eq!(kerdock_set(2).unwrap(), vec![0, 1]);
        let s = kerdock_set(4).unwrap();
        assert_eq!(s.len(), 8);
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                assert_eq!(rank_gf2(a ^ b, 4), 4);
            }
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(real_mub_design(1).unwrap().len(), 24);
        assert!(matches!(real_mub_design(3), Err(Error::ConstructionUnavailable(_))));
        assert!(matches!(real_mub_design(0), Err(Error::ConstructionUnavailable(_))));
    }

    #[test]
    fn biased_bases_rejected() {
        let e = |i: usize| (0..2).map(|j| int(i64::from(i == j))).collect::<Vec<_>>();
        let std = vec![e(0), e(1)];
        let res = mub_design_from_bases(2, &[std.clone(), std], TolerancePolicy::default());
        assert!(res.is_err());
    }
}
