//! Integer-lattice machinery: congruence sublattices, weighted boxes, exact
//! enumeration and successive minima with Minkowski certification.

mod enumerate;
mod gamma;
mod hnf;
mod lll;
mod minima;

pub use enumerate::{enumerate_box, EnumerationOutcome};
pub use gamma::{
    dirichlet_lattice, gamma_conditions_hold, gamma_lattice, prime_power_exponent,
};
pub(crate) use gamma::{residual_system, DivisibilityMode};
pub use hnf::{hnf_coordinates, hnf_square, left_kernel};
pub use minima::{successive_minima, MinimaReport};

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::exact::{Int, Magnitude, Rational, Real};
use crate::{Error, Result};

/// Resource limits for enumeration-backed operations.
#[derive(Clone, Debug)]
pub struct LatticeLimits {
    /// Hard cap on the ambient dimension; enumeration is exponential.
    pub max_dim: usize,
    /// Maximum number of points an enumeration may return.
    pub max_points: usize,
    /// Maximum number of search-tree nodes visited.
    pub max_nodes: u64,
}

impl Default for LatticeLimits {
    fn default() -> Self {
        LatticeLimits { max_dim: 10, max_points: 400_000, max_nodes: 40_000_000 }
    }
}

/// A full-rank sublattice of Z^d, stored by its canonical HNF basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    dim: usize,
    basis: Vec<Vec<Int>>,
    det: Int,
}

impl IntegerLattice {
    pub fn standard(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut row = vec![Int::zero(); dim];
                row[i] = Int::one();
                row
            })
            .collect();
        IntegerLattice { dim, basis, det: Int::one() }
    }

    pub fn from_basis(rows: Vec<Vec<Int>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::validation("lattice basis must be square and non-empty"));
        }
        let basis = hnf_square(rows)?;
        let det = basis.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        Ok(IntegerLattice { dim, basis, det })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical (HNF) basis rows.
    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    /// |det|, which equals the index in Z^d.
    pub fn determinant(&self) -> &Int {
        &self.det
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.dim && hnf_coordinates(&self.basis, v).is_some()
    }

    /// Coordinates of v in the canonical basis, if v is a lattice point.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        hnf_coordinates(&self.basis, v)
    }
}

/// A homogeneous congruence system c . z = 0 (mod M) over Z^d.
#[derive(Clone, Debug, Default)]
pub struct CongruenceSystem {
    pub rows: Vec<(Vec<Int>, Int)>,
}

impl CongruenceSystem {
    pub fn new() -> Self {
        CongruenceSystem { rows: Vec::new() }
    }

    pub fn push(&mut self, coeffs: Vec<Int>, modulus: Int) {
        debug_assert!(modulus >= Int::one());
        self.rows.push((coeffs, modulus));
    }

    pub fn holds(&self, v: &[Int]) -> bool {
        self.rows.iter().all(|(c, m)| {
            let dot: Int = c.iter().zip(v).map(|(a, b)| a * b).sum();
            (dot % m).is_zero()
        })
    }
}

/// The sublattice {z in Z^d : every congruence holds}, via an integer
/// kernel computation on the stacked system.
pub fn congruences_to_lattice(sys: &CongruenceSystem, d: usize) -> Result<IntegerLattice> {
    let live: Vec<&(Vec<Int>, Int)> = sys
        .rows
        .iter()
        .filter(|(_, m)| !m.is_one())
        .collect();
    if live.is_empty() {
        return Ok(IntegerLattice::standard(d));
    }
    let k = live.len();
    // z satisfies the system iff (z, y) kills [C | -D]^T for some y, with
    // D = diag(moduli); D is invertible, so projection to z is bijective.
    let mut a: Vec<Vec<Int>> = Vec::with_capacity(d + k);
    for i in 0..d {
        let mut row = vec![Int::zero(); k];
        for (j, (c, _)) in live.iter().enumerate() {
            if c.len() != d {
                return Err(Error::validation("congruence row has wrong dimension"));
            }
            row[j] = c[i].clone();
        }
        a.push(row);
    }
    for (j, (_, m)) in live.iter().enumerate() {
        let mut row = vec![Int::zero(); k];
        row[j] = -m.clone();
        a.push(row);
    }
    let kernel = left_kernel(&a);
    if kernel.len() != d {
        return Err(Error::internal("congruence kernel has unexpected rank"));
    }
    let basis = kernel.into_iter().map(|mut r| {
        r.truncate(d);
        r
    });
    IntegerLattice::from_basis(basis.collect())
}

/// One face of a weighted box: |form . v| < radius (strict) or <= (weak).
#[derive(Clone, Debug)]
pub struct BoxFace {
    pub form: Vec<Real>,
    pub radius: Magnitude,
    pub strict: bool,
}

/// A symmetric convex body cut out by d independent linear forms with
/// per-face radii. Axis-aligned boxes use unit forms.
#[derive(Clone, Debug)]
pub struct WeightedBox {
    faces: Vec<BoxFace>,
}

impl WeightedBox {
    pub fn new(faces: Vec<BoxFace>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::validation("a box needs at least one face"));
        }
        let d = faces.len();
        if faces.iter().any(|f| f.form.len() != d) {
            return Err(Error::validation("box forms must be square"));
        }
        for f in &faces {
            if f.radius.is_zero() {
                return Err(Error::validation("box radii must be positive"));
            }
        }
        Ok(WeightedBox { faces })
    }

    /// Axis-aligned box with the given per-coordinate radii.
    pub fn axis(radii: Vec<(Magnitude, bool)>) -> Result<Self> {
        let d = radii.len();
        let faces = radii
            .into_iter()
            .enumerate()
            .map(|(i, (radius, strict))| {
                let mut form = vec![Real::zero(); d];
                form[i] = Real::one();
                BoxFace { form, radius, strict }
            })
            .collect();
        WeightedBox::new(faces)
    }

    pub fn dim(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[BoxFace] {
        &self.faces
    }

    pub fn form_value(&self, k: usize, v: &[Int]) -> Result<Real> {
        let mut acc = Real::zero();
        for (c, x) in self.faces[k].form.iter().zip(v) {
            acc = acc.add(&c.mul_rational(&Rational::from(x.clone())))?;
        }
        Ok(acc)
    }

    /// Strictness-aware membership of an integer vector.
    pub fn contains(&self, v: &[Int]) -> Result<bool> {
        for k in 0..self.faces.len() {
            let val = Magnitude::from_real_abs(&self.form_value(k, v)?);
            let ord = val.try_cmp(&self.faces[k].radius)?;
            let ok = if self.faces[k].strict {
                ord == core::cmp::Ordering::Less
            } else {
                ord != core::cmp::Ordering::Greater
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// max_k |f_k . v| / r_k: the smallest closed dilation containing v.
    pub fn dilation_of(&self, v: &[Int]) -> Result<Magnitude> {
        let mut best = Magnitude::zero();
        for k in 0..self.faces.len() {
            let val = Magnitude::from_real_abs(&self.form_value(k, v)?);
            let scaled = val.div(&self.faces[k].radius)?;
            best = best.max(&scaled)?;
        }
        Ok(best)
    }

    /// The closed lambda-dilate (all faces weak).
    pub fn dilate_closed(&self, lambda: &Magnitude) -> WeightedBox {
        WeightedBox {
            faces: self
                .faces
                .iter()
                .map(|f| BoxFace {
                    form: f.form.clone(),
                    radius: f.radius.mul(lambda),
                    strict: false,
                })
                .collect(),
        }
    }

    /// Volume: prod(2 r_k) / |det forms|.
    pub fn volume(&self) -> Result<Magnitude> {
        let mut vol = Magnitude::one();
        let two = Rational::from(Int::from(2));
        for f in &self.faces {
            vol = vol.mul(&f.radius).mul(&Magnitude::from_rational_abs(&two));
        }
        let det = forms_determinant(&self.faces)?;
        if det.is_zero() {
            return Err(Error::validation("box forms are singular"));
        }
        vol.div(&Magnitude::from_real_abs(&det))
    }
}

/// Exact determinant of the d x d matrix whose rows are the face forms.
fn forms_determinant(faces: &[BoxFace]) -> Result<Real> {
    let d = faces.len();
    let mut m: Vec<Vec<Real>> = faces.iter().map(|f| f.form.clone()).collect();
    let mut det = Real::one();
    for col in 0..d {
        let Some(p) = (col..d).find(|&i| !m[i][col].is_zero()) else {
            return Ok(Real::zero());
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot)?;
        for i in (col + 1)..d {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].div(&pivot)?;
            for j in col..d {
                let s = factor.mul(&m[col][j])?;
                m[i][j] = m[i][j].sub(&s)?;
            }
        }
    }
    Ok(det)
}

/// Exact rank-tracking over Q for greedy independent selection.
pub(crate) struct RankTracker {
    rows: Vec<Vec<Rational>>,
    dim: usize,
}

impl RankTracker {
    pub fn new(dim: usize) -> Self {
        RankTracker { rows: Vec::new(), dim }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds v if it increases the rank; returns whether it did.
    pub fn try_add(&mut self, v: &[Int]) -> bool {
        let mut row: Vec<Rational> = v.iter().map(|x| Rational::from(x.clone())).collect();
        for existing in &self.rows {
            let lead = existing.iter().position(|x| !x.is_zero()).unwrap();
            if !row[lead].is_zero() {
                let factor = &row[lead] / &existing[lead];
                for j in 0..self.dim {
                    let s = &existing[j] * &factor;
                    row[j] -= s;
                }
            }
        }
        if row.iter().all(|x| x.is_zero()) {
            return false;
        }
        self.rows.push(row);
        // Keep rows sorted by leading index so elimination stays triangular.
        self.rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap());
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_from_i64;

    fn iv(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn empty_system_is_zd() {
        let l = congruences_to_lattice(&CongruenceSystem::new(), 2).unwrap();
        assert_eq!(l.determinant(), &Int::one());
        assert!(l.contains(&iv(&[1, 0])));
    }

    #[test]
    fn coordinate_congruences() {
        // (1,0) mod 2 and (0,1) mod 2: (2Z)^2, det 4
        let mut sys = CongruenceSystem::new();
        sys.push(iv(&[1, 0]), Int::from(2));
        sys.push(iv(&[0, 1]), Int::from(2));
        let l = congruences_to_lattice(&sys, 2).unwrap();
        assert_eq!(l.determinant(), &Int::from(4));
        assert!(l.contains(&iv(&[2, 0])));
        assert!(!l.contains(&iv(&[1, 0])));
    }

    #[test]
    fn mixed_congruences_match_brute_force() {
        // (1,3) mod 8, (1,0) mod 2, (0,1) mod 2: solutions in [0,8)^2
        let mut sys = CongruenceSystem::new();
        sys.push(iv(&[1, 3]), Int::from(8));
        sys.push(iv(&[1, 0]), Int::from(2));
        sys.push(iv(&[0, 1]), Int::from(2));
        let l = congruences_to_lattice(&sys, 2).unwrap();
        // Brute-force oracle: count solutions in [0,8) x [0,8).
        let mut count = 0u64;
        for a in 0..8i64 {
            for b in 0..8i64 {
                if (a + 3 * b) % 8 == 0 && a % 2 == 0 && b % 2 == 0 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 4);
        // Index = 64 / 4 = 16.
        assert_eq!(l.determinant(), &Int::from(16));
        // Membership agrees with the congruence predicate on a window.
        for a in -8..8i64 {
            for b in -8..8i64 {
                let v = iv(&[a, b]);
                assert_eq!(l.contains(&v), sys.holds(&v), "({a},{b})");
            }
        }
    }

    #[test]
    fn axis_box_membership_and_dilation() {
        let b = WeightedBox::axis(alloc::vec![
            (Magnitude::from_rational_abs(&rational_from_i64(1, 1)), false),
            (Magnitude::from_rational_abs(&rational_from_i64(1, 2)), false),
        ])
        .unwrap();
        assert!(b.contains(&iv(&[1, 0])).unwrap());
        assert!(!b.contains(&iv(&[1, 1])).unwrap());
        let lam = b.dilation_of(&iv(&[1, 1])).unwrap();
        assert_eq!(lam.as_exact_rational(), Some(rational_from_i64(2, 1)));
        let vol = b.volume().unwrap();
        assert_eq!(vol.as_exact_rational(), Some(rational_from_i64(2, 1)));
    }

    #[test]
    fn strict_faces() {
        let b = WeightedBox::axis(alloc::vec![(
            Magnitude::from_rational_abs(&rational_from_i64(1, 1)),
            true
        )])
        .unwrap();
        assert!(!b.contains(&iv(&[1])).unwrap());
        assert!(b.contains(&iv(&[0])).unwrap());
    }

    #[test]
    fn rank_tracker() {
        let mut rt = RankTracker::new(3);
        assert!(rt.try_add(&iv(&[1, 2, 3])));
        assert!(rt.try_add(&iv(&[0, 1, 1])));
        assert!(!rt.try_add(&iv(&[2, 5, 7]))); // 2*r1 + r2
        assert!(rt.try_add(&iv(&[0, 0, 5])));
        assert_eq!(rt.rank(), 3);
    }
}
