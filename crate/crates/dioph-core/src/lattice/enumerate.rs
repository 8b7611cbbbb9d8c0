//! Exact enumeration of lattice points in weighted boxes.
//!
//! The search runs over LLL-reduced coordinates with a Schnorr-Euchner
//! style recursion on the box-normalised quadratic form. Rational proxy
//! radii (sound upper bounds) define the search ellipsoid; every candidate
//! is then filtered against the true radii with exact comparisons, so the
//! proxy precision never affects correctness.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::lll::{gram_schmidt, identity_transform, lll_reduce, transformed_gram};
use super::{IntegerLattice, LatticeLimits, WeightedBox};
use crate::exact::{Int, Rational, Real};
use crate::{Error, Result};

const PROXY_BITS: u32 = 24;

/// Nonzero lattice vectors inside the box, sorted lexicographically.
#[derive(Clone, Debug)]
pub struct EnumerationOutcome {
    pub points: Vec<Vec<Int>>,
    pub truncated: bool,
}

/// Ensures an instance stays inside one quadratic field so that every
/// comparison made during the search is exact and total.
fn check_single_field(bx: &WeightedBox) -> Result<()> {
    let mut root: Option<u64> = None;
    for f in bx.faces() {
        for c in &f.form {
            if let Some(d) = c.root_of() {
                match root {
                    None => root = Some(d),
                    Some(r) if r == d => {}
                    Some(r) => {
                        return Err(Error::validation(alloc::format!(
                            "box mixes quadratic fields Q(sqrt({r})) and Q(sqrt({d}))"
                        )))
                    }
                }
            }
        }
    }
    Ok(())
}

/// All nonzero v in the lattice satisfying every face constraint of the box
/// (strictness respected), up to `limits.max_points`.
pub fn enumerate_box(
    lat: &IntegerLattice,
    bx: &WeightedBox,
    limits: &LatticeLimits,
) -> Result<EnumerationOutcome> {
    let d = lat.dim();
    if d > limits.max_dim {
        return Err(Error::ResourceCap(alloc::format!(
            "dimension {d} exceeds the configured limit {}",
            limits.max_dim
        )));
    }
    if bx.dim() != d {
        return Err(Error::validation("box and lattice dimensions differ"));
    }
    check_single_field(bx)?;

    // Fast path: standard lattice against an axis-aligned box.
    if let Some(ranges) = axis_fast_path(lat, bx)? {
        return axis_enumerate(lat, bx, &ranges, limits);
    }

    let (trans, gram) = box_reduced_basis_with_gram(lat, bx)?;
    let (mu, q) = gram_schmidt(&gram)?;
    let radius_sq = Real::from_int(d as i64);

    let mut coeffs = vec![Int::zero(); d];
    let mut points: Vec<Vec<Int>> = Vec::new();
    let mut nodes = 0u64;
    let mut truncated = false;
    se_recurse(
        d,
        d,
        &mu,
        &q,
        &radius_sq,
        &mut coeffs,
        &mut |cs: &[Int]| -> Result<bool> {
            // Map reduced coefficients to an ambient integer vector.
            if cs.iter().all(|c| c.is_zero()) {
                return Ok(true);
            }
            let v = apply_transform(cs, &trans, lat.basis());
            if bx.contains(&v)? {
                points.push(v);
                if points.len() > limits.max_points {
                    truncated = true;
                    return Ok(false);
                }
            }
            Ok(true)
        },
        &mut nodes,
        limits.max_nodes,
    )?;
    if truncated {
        points.pop();
    }
    points.sort();
    points.dedup();
    Ok(EnumerationOutcome { points, truncated })
}

/// The integer basis of the lattice reduced with respect to the box
/// geometry, with its Gram matrix in the normalised inner product.
pub(super) fn box_reduced_basis_with_gram(
    lat: &IntegerLattice,
    bx: &WeightedBox,
) -> Result<(Vec<Vec<Int>>, Vec<Vec<Real>>)> {
    let d = lat.dim();
    // G[l][k] = f_k . basis_l / proxy_r_k
    let mut norm_map = vec![vec![Real::zero(); d]; d];
    for l in 0..d {
        for k in 0..d {
            let val = bx.form_value(k, &lat.basis()[l])?;
            let proxy = proxy_radius(bx, k);
            norm_map[l][k] = val.mul_rational(&proxy.recip());
        }
    }
    let mut q0 = vec![vec![Real::zero(); d]; d];
    for i in 0..d {
        for j in 0..=i {
            let mut acc = Real::zero();
            for k in 0..d {
                acc = acc.add(&norm_map[i][k].mul(&norm_map[j][k])?)?;
            }
            q0[i][j] = acc.clone();
            q0[j][i] = acc;
        }
    }
    let mut trans = identity_transform(d);
    let gram = lll_reduce(&q0, &mut trans)?;
    debug_assert_eq!(gram, transformed_gram(&q0, &trans).unwrap());
    Ok((trans, gram))
}

fn proxy_radius(bx: &WeightedBox, k: usize) -> Rational {
    bx.faces()[k].radius.to_interval(PROXY_BITS).hi.to_rational()
}

/// row . basis for an integer coefficient row.
pub(super) fn apply_transform_public(row: &[Int], basis: &[Vec<Int>]) -> Vec<Int> {
    let d = basis[0].len();
    let mut v = vec![Int::zero(); d];
    for (c, brow) in row.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (vi, b) in v.iter_mut().zip(brow) {
            *vi += c * b;
        }
    }
    v
}

fn apply_transform(cs: &[Int], trans: &[Vec<Int>], basis: &[Vec<Int>]) -> Vec<Int> {
    let d = basis[0].len();
    let mut v = vec![Int::zero(); d];
    for (c, trow) in cs.iter().zip(trans) {
        if c.is_zero() {
            continue;
        }
        for (t, brow) in trow.iter().zip(basis) {
            if t.is_zero() {
                continue;
            }
            let scale = c * t;
            for (vi, b) in v.iter_mut().zip(brow) {
                *vi += &scale * b;
            }
        }
    }
    v
}

/// Depth-first Schnorr-Euchner enumeration over levels d-1 .. 0. The valid
/// integers at each level form a contiguous interval, scanned outward from
/// the rounded centre with exact comparisons only.
#[allow(clippy::too_many_arguments)]
fn se_recurse(
    level: usize,
    d: usize,
    mu: &[Vec<Real>],
    q: &[Real],
    remaining: &Real,
    coeffs: &mut Vec<Int>,
    emit: &mut dyn FnMut(&[Int]) -> Result<bool>,
    nodes: &mut u64,
    max_nodes: u64,
) -> Result<bool> {
    if level == 0 {
        return emit(coeffs);
    }
    let i = level - 1;
    // shift = sum_{j > i} mu_{j,i} x_j
    let mut shift = Real::zero();
    for j in (i + 1)..d {
        if coeffs[j].is_zero() {
            continue;
        }
        shift = shift.add(&mu[j][i].mul_rational(&Rational::from(coeffs[j].clone())))?;
    }
    let center = shift.neg();
    let t0 = center.round_nearest();
    // Scan upward from t0, then downward from t0 - 1.
    for direction in 0..2 {
        let mut t = if direction == 0 { t0.clone() } else { &t0 - 1 };
        loop {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(Error::ResourceCap("enumeration node budget exhausted".into()));
            }
            let offset = Real::Rat(Rational::from(t.clone())).add(&shift)?;
            let used = offset.mul(&offset)?.mul(&q[i])?;
            if used.try_cmp(remaining)? == core::cmp::Ordering::Greater {
                break;
            }
            coeffs[i] = t.clone();
            let rem_next = remaining.sub(&used)?;
            if !se_recurse(level - 1, d, mu, q, &rem_next, coeffs, emit, nodes, max_nodes)? {
                return Ok(false);
            }
            coeffs[i] = Int::zero();
            if direction == 0 {
                t += 1;
            } else {
                t -= 1;
            }
        }
    }
    Ok(true)
}

/// Detects the standard-lattice + axis-box situation, where direct ranges
/// beat the general machinery.
fn axis_fast_path(lat: &IntegerLattice, bx: &WeightedBox) -> Result<Option<Vec<(Int, Int)>>> {
    use num_traits::One;
    if lat.determinant() != &Int::one() {
        return Ok(None);
    }
    let d = lat.dim();
    for (i, row) in lat.basis().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if (i == j && x != &Int::one()) || (i != j && !x.is_zero()) {
                return Ok(None);
            }
        }
    }
    let mut ranges = Vec::with_capacity(d);
    for (k, f) in bx.faces().iter().enumerate() {
        let mut unit = None;
        for (j, c) in f.form.iter().enumerate() {
            if !c.is_zero() {
                if unit.is_some() || c != &Real::one() || j != k {
                    return Ok(None);
                }
                unit = Some(j);
            }
        }
        if unit != Some(k) {
            return Ok(None);
        }
        // |v_k| <= r (or < r): integer range bound floor(r), adjusted for
        // strictness when r is exactly an integer.
        let r = &f.radius;
        let mut bound = r.floor()?;
        if f.strict {
            if let Some(exact) = r.as_exact_rational() {
                if exact.is_integer() && Rational::from(bound.clone()) == exact {
                    bound -= 1;
                }
            }
        }
        ranges.push((-bound.clone(), bound));
    }
    Ok(Some(ranges))
}

fn axis_enumerate(
    _lat: &IntegerLattice,
    bx: &WeightedBox,
    ranges: &[(Int, Int)],
    limits: &LatticeLimits,
) -> Result<EnumerationOutcome> {
    // Guard the total volume before looping.
    let mut total = 1u128;
    for (lo, hi) in ranges {
        let width = hi - lo + 1;
        let w = u128::try_from(&width)
            .map_err(|_| Error::ResourceCap("axis range exceeds budget".into()))?;
        total = total
            .checked_mul(w)
            .ok_or_else(|| Error::ResourceCap("axis enumeration volume overflow".into()))?;
        if total > limits.max_nodes as u128 {
            return Err(Error::ResourceCap("axis enumeration volume exceeds budget".into()));
        }
    }
    let d = ranges.len();
    let mut points = Vec::new();
    let mut truncated = false;
    let mut v: Vec<Int> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    'outer: loop {
        if v.iter().any(|x| !x.is_zero()) {
            // The integer ranges are exact for axis faces, so no membership
            // re-check is needed.
            debug_assert!(bx.contains(&v)?);
            points.push(v.clone());
            if points.len() > limits.max_points {
                truncated = true;
                points.pop();
                break 'outer;
            }
        }
        // Odometer increment.
        let mut idx = d;
        loop {
            if idx == 0 {
                break 'outer;
            }
            idx -= 1;
            if v[idx] < ranges[idx].1 {
                v[idx] += 1;
                for j in (idx + 1)..d {
                    v[j] = ranges[j].0.clone();
                }
                break;
            }
        }
    }
    points.sort();
    Ok(EnumerationOutcome { points, truncated })
}
