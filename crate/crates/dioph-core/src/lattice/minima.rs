//! Exact successive minima with Minkowski certification.

use alloc::vec::Vec;

use crate::exact::{Int, Magnitude, Rational};
use crate::{Error, Result};

use super::enumerate::box_reduced_basis_with_gram;
use super::{enumerate_box, IntegerLattice, LatticeLimits, RankTracker, WeightedBox};

/// Minkowski minima of a lattice against a box, with independent witnesses.
///
/// Minima are computed with respect to the closure of the body (the
/// standard convention: the infimum is unchanged by the boundary), so
/// strictness flags on the box do not affect the lambda values.
#[derive(Clone, Debug)]
pub struct MinimaReport {
    pub dim: usize,
    /// lambda_1 <= ... <= lambda_d, exact.
    pub lambdas: Vec<Magnitude>,
    /// Witness k lies in the closed lambda_k-dilate; witnesses are
    /// linearly independent.
    pub witnesses: Vec<Vec<Int>>,
    pub lattice_det: Int,
    pub box_volume: Magnitude,
}

impl MinimaReport {
    /// Product of the minima.
    pub fn minima_product(&self) -> Magnitude {
        self.lambdas
            .iter()
            .fold(Magnitude::one(), |acc, l| acc.mul(l))
    }

    /// Exact Minkowski second-theorem sandwich:
    /// (2^d / d!) det <= Vol(B) prod lambda <= 2^d det.
    pub fn minkowski_check(&self) -> Result<bool> {
        let d = self.dim as u32;
        let two_d = Rational::from(Int::from(2).pow(d));
        let factorial: Int = (1..=self.dim as u64).map(Int::from).product();
        let det = Rational::from(self.lattice_det.clone());
        let lower = Magnitude::from_rational_abs(&(&two_d * &det / Rational::from(factorial)));
        let upper = Magnitude::from_rational_abs(&(&two_d * &det));
        let mid = self.box_volume.mul(&self.minima_product());
        Ok(lower.try_cmp(&mid)? != core::cmp::Ordering::Greater
            && mid.try_cmp(&upper)? != core::cmp::Ordering::Greater)
    }
}

/// Computes all d successive minima exactly by enumerating the closed
/// dilate that is guaranteed (via the reduced basis) to contain d
/// independent vectors, then greedily selecting rank-raising points in
/// order of increasing dilation.
pub fn successive_minima(
    lat: &IntegerLattice,
    bx: &WeightedBox,
    limits: &LatticeLimits,
) -> Result<MinimaReport> {
    let d = lat.dim();
    if bx.dim() != d {
        return Err(Error::validation("box and lattice dimensions differ"));
    }
    if d > limits.max_dim {
        return Err(Error::ResourceCap(alloc::format!(
            "dimension {d} exceeds the configured limit {}",
            limits.max_dim
        )));
    }
    // A dilation cap: the largest dilation among the box-reduced basis rows
    // bounds lambda_d from above, since those rows are independent.
    let (trans, _) = box_reduced_basis_with_gram(lat, bx)?;
    let mut cap = Magnitude::zero();
    for row in &trans {
        let v = super::enumerate::apply_transform_public(row, lat.basis());
        cap = cap.max(&bx.dilation_of(&v)?)?;
    }
    if cap.is_zero() {
        return Err(Error::internal("degenerate dilation cap"));
    }
    let dilated = bx.dilate_closed(&cap);
    let out = enumerate_box(lat, &dilated, limits)?;
    if out.truncated {
        return Err(Error::ResourceCap(
            "minima enumeration exceeded the point budget".into(),
        ));
    }
    // Sort candidates by exact dilation, then lexicographically.
    let mut scored: Vec<(Magnitude, Vec<Int>)> = Vec::with_capacity(out.points.len());
    for p in out.points {
        let mu = bx.dilation_of(&p)?;
        scored.push((mu, p));
    }
    sort_scored(&mut scored)?;

    let mut tracker = RankTracker::new(d);
    let mut lambdas = Vec::with_capacity(d);
    let mut witnesses = Vec::with_capacity(d);
    for (mu, p) in scored {
        if tracker.rank() == d {
            break;
        }
        if tracker.try_add(&p) {
            lambdas.push(mu);
            witnesses.push(p);
        }
    }
    if lambdas.len() != d {
        return Err(Error::internal(
            "successive minima: fewer independent vectors than the dimension",
        ));
    }
    let report = MinimaReport {
        dim: d,
        lambdas,
        witnesses,
        lattice_det: lat.determinant().clone(),
        box_volume: bx.volume()?,
    };
    if !report.minkowski_check()? {
        return Err(Error::internal("Minkowski sandwich violated"));
    }
    Ok(report)
}

/// Merge sort on (dilation, point) pairs with fallible comparison.
fn sort_scored(items: &mut Vec<(Magnitude, Vec<Int>)>) -> Result<()> {
    let n = items.len();
    if n <= 1 {
        return Ok(());
    }
    let mut right = items.split_off(n / 2);
    sort_scored(items)?;
    sort_scored(&mut right)?;
    let mut merged = Vec::with_capacity(n);
    let mut a = items.drain(..).peekable();
    let mut b = right.into_iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => {
                let ord = x.0.try_cmp(&y.0)?.then_with(|| x.1.cmp(&y.1));
                if ord != core::cmp::Ordering::Greater {
                    merged.push(a.next().unwrap());
                } else {
                    merged.push(b.next().unwrap());
                }
            }
            (Some(_), None) => merged.push(a.next().unwrap()),
            (None, Some(_)) => merged.push(b.next().unwrap()),
            (None, None) => break,
        }
    }
    drop(a);
    *items = merged;
    Ok(())
}
