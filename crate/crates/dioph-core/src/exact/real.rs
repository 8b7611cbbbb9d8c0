//! Exact real numbers: rationals and real quadratic irrationals a + b*sqrt(d).
//!
//! Keeping real-place values inside a quadratic field makes every sign,
//! floor and comparison decidable in exact arithmetic. Values from two
//! different quadratic fields are never equal unless both are rational, so
//! cross-field comparisons terminate by interval refinement.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, RealInterval};
use super::rational::{Int, Nat, Rational};
use crate::{Error, Result};

/// Escalation cap for cross-field interval separation. Comparisons of
/// unequal algebraic numbers separate long before this.
const SEPARATION_CAP_BITS: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Real {
    Rat(Rational),
    /// rat + coef * sqrt(root); coef != 0, root squarefree and >= 2.
    Quad {
        rat: Rational,
        coef: Rational,
        root: u64,
    },
}

impl Real {
    pub fn zero() -> Self {
        Real::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Real::Rat(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Real::Rat(r)
    }

    pub fn from_int(n: i64) -> Self {
        Real::Rat(Rational::from(Int::from(n)))
    }

    /// sqrt of a non-negative rational, as an exact Real.
    pub fn sqrt_rational(x: &Rational) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::validation("square root of a negative rational"));
        }
        if x.is_zero() {
            return Ok(Real::zero());
        }
        // sqrt(n/d) = sqrt(n*d) / d
        let nd: Nat = (x.numer() * x.denom()).magnitude().clone();
        let (square_part, free_part) = extract_square_part(&nd)?;
        let coef = Rational::new(Int::from(square_part), x.denom().clone());
        if free_part == 1 {
            return Ok(Real::Rat(coef));
        }
        Ok(Real::Quad { rat: Rational::zero(), coef, root: free_part })
    }

    fn quad(rat: Rational, coef: Rational, root: u64) -> Self {
        if coef.is_zero() {
            Real::Rat(rat)
        } else {
            Real::Quad { rat, coef, root }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Real::Rat(r) if r.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Real::Rat(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Real::Rat(r) => Some(r),
            Real::Quad { .. } => None,
        }
    }

    pub fn root_of(&self) -> Option<u64> {
        match self {
            Real::Rat(_) => None,
            Real::Quad { root, .. } => Some(*root),
        }
    }

    fn compatible_root(&self, other: &Real) -> Result<Option<u64>> {
        match (self.root_of(), other.root_of()) {
            (None, None) => Ok(None),
            (Some(d), None) | (None, Some(d)) => Ok(Some(d)),
            (Some(d1), Some(d2)) => {
                if d1 == d2 {
                    Ok(Some(d1))
                } else {
                    Err(Error::validation(format!(
                        "arithmetic across distinct quadratic fields Q(sqrt({d1})) and Q(sqrt({d2}))"
                    )))
                }
            }
        }
    }

    fn parts(&self, root: u64) -> (Rational, Rational) {
        match self {
            Real::Rat(r) => (r.clone(), Rational::zero()),
            Real::Quad { rat, coef, root: d } => {
                debug_assert_eq!(*d, root);
                (rat.clone(), coef.clone())
            }
        }
    }

    pub fn add(&self, other: &Real) -> Result<Real> {
        match self.compatible_root(other)? {
            None => match (self, other) {
                (Real::Rat(a), Real::Rat(b)) => Ok(Real::Rat(a + b)),
                _ => unreachable!(),
            },
            Some(d) => {
                let (a1, b1) = self.parts(d);
                let (a2, b2) = other.parts(d);
                Ok(Real::quad(a1 + a2, b1 + b2, d))
            }
        }
    }

    pub fn sub(&self, other: &Real) -> Result<Real> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Real {
        match self {
            Real::Rat(r) => Real::Rat(-r),
            Real::Quad { rat, coef, root } => Real::Quad {
                rat: -rat,
                coef: -coef,
                root: *root,
            },
        }
    }

    pub fn mul(&self, other: &Real) -> Result<Real> {
        match self.compatible_root(other)? {
            None => match (self, other) {
                (Real::Rat(a), Real::Rat(b)) => Ok(Real::Rat(a * b)),
                _ => unreachable!(),
            },
            Some(d) => {
                let (a1, b1) = self.parts(d);
                let (a2, b2) = other.parts(d);
                let d_rat = Rational::from(Int::from(d));
                Ok(Real::quad(
                    &a1 * &a2 + &b1 * &b2 * &d_rat,
                    &a1 * &b2 + &b1 * &a2,
                    d,
                ))
            }
        }
    }

    pub fn mul_rational(&self, s: &Rational) -> Real {
        match self {
            Real::Rat(r) => Real::Rat(r * s),
            Real::Quad { rat, coef, root } => Real::quad(rat * s, coef * s, *root),
        }
    }

    pub fn recip(&self) -> Result<Real> {
        match self {
            Real::Rat(r) => {
                if r.is_zero() {
                    Err(Error::validation("division by zero"))
                } else {
                    Ok(Real::Rat(r.recip()))
                }
            }
            Real::Quad { rat, coef, root } => {
                // 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d)
                let d_rat = Rational::from(Int::from(*root));
                let denom = rat * rat - coef * coef * d_rat;
                debug_assert!(!denom.is_zero());
                Ok(Real::quad(rat / &denom, -(coef / &denom), *root))
            }
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        self.mul(&other.recip()?)
    }

    pub fn abs(&self) -> Real {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact sign: -1, 0, or 1.
    pub fn sign(&self) -> i32 {
        match self {
            Real::Rat(r) => match r.cmp(&Rational::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            },
            Real::Quad { rat, coef, root } => {
                let sa = rat.signum();
                let sb = coef.signum();
                let (sa, sb) = (to_i32(&sa), to_i32(&sb));
                debug_assert!(sb != 0);
                if sa == 0 {
                    return sb;
                }
                if sa == sb {
                    return sa;
                }
                // Signs differ: compare rat^2 against coef^2 * d.
                let d_rat = Rational::from(Int::from(*root));
                let lhs = rat * rat;
                let rhs = coef * coef * d_rat;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => unreachable!("sqrt(d) is irrational"),
                }
            }
        }
    }

    /// Total exact comparison. Values in the same field compare directly;
    /// values in distinct quadratic fields are separated by refinement
    /// (they are never equal unless both are rational).
    pub fn try_cmp(&self, other: &Real) -> Result<Ordering> {
        match self.compatible_root(other) {
            Ok(_) => Ok(int_sign_to_ordering(self.sub(other)?.sign())),
            Err(_) => {
                // Distinct quadratic fields: equal only if both rational,
                // which is excluded here, so refinement separates.
                let mut bits = 32u32;
                loop {
                    let a = self.to_interval(bits);
                    let b = other.to_interval(bits);
                    if a.strictly_below(&b) {
                        return Ok(Ordering::Less);
                    }
                    if b.strictly_below(&a) {
                        return Ok(Ordering::Greater);
                    }
                    if bits >= SEPARATION_CAP_BITS {
                        return Err(Error::PrecisionCap { bits });
                    }
                    bits *= 2;
                }
            }
        }
    }

    pub fn max(&self, other: &Real) -> Result<Real> {
        Ok(if self.try_cmp(other)? == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        })
    }

    pub fn pow_u32(&self, mut k: u32) -> Result<Real> {
        let mut base = self.clone();
        let mut acc = Real::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_i64(&self, k: i64) -> Result<Real> {
        let mag = self.pow_u32(
            u32::try_from(k.unsigned_abs())
                .map_err(|_| Error::ResourceCap("exponent too large".into()))?,
        )?;
        if k < 0 {
            mag.recip()
        } else {
            Ok(mag)
        }
    }

    /// Exact floor. Terminates because a quadratic irrational is never an
    /// integer; rationals floor directly.
    pub fn floor(&self) -> Int {
        match self {
            Real::Rat(r) => r.floor().to_integer(),
            Real::Quad { .. } => {
                let mut bits = 16u32;
                loop {
                    let iv = self.to_interval(bits);
                    let lo = iv.lo.to_rational().floor().to_integer();
                    let hi = iv.hi.to_rational().floor().to_integer();
                    if lo == hi {
                        return lo;
                    }
                    // If the interval straddles an integer t, test equality
                    // exactly; a Quad is never an integer, so keep refining.
                    bits *= 2;
                    assert!(bits <= SEPARATION_CAP_BITS, "floor of quadratic failed to separate");
                }
            }
        }
    }

    pub fn ceil(&self) -> Int {
        -(self.neg().floor())
    }

    /// Nearest integer, ties rounded away from zero.
    pub fn round_nearest(&self) -> Int {
        let half = Rational::new(Int::one(), Int::from(2));
        match self {
            Real::Rat(r) => {
                if r.is_negative() {
                    -((-r + half).floor().to_integer())
                } else {
                    (r + half).floor().to_integer()
                }
            }
            // A quadratic irrational never ties, so floor(x + 1/2) is exact.
            Real::Quad { .. } => self.add(&Real::Rat(half)).unwrap().floor(),
        }
    }

    /// Enclosing interval with endpoints on the 2^-bits grid, by exact
    /// outward rounding of the true value. Nested across precisions.
    pub fn to_interval(&self, bits: u32) -> RealInterval {
        match self {
            Real::Rat(r) => RealInterval::point(r, bits),
            Real::Quad { rat, coef, root } => {
                // Bound coef * sqrt(root) with half-open integer sqrt bounds
                // at scale 2^(bits+2), then round outward onto the grid.
                let guard = bits + 2;
                let t = coef * coef * Rational::from(Int::from(*root));
                // s = floor(sqrt(t * 4^guard))
                let scaled = &t * Rational::from(Int::one() << (2 * guard) as usize);
                let m = scaled.floor().to_integer().magnitude().clone();
                let s = m.sqrt();
                let denom = Int::one() << guard as usize;
                let lo_mag = Rational::new(Int::from(s.clone()), denom.clone());
                let hi_mag = Rational::new(Int::from(s) + Int::one(), denom);
                let (lo, hi) = if coef.is_negative() {
                    (rat - &hi_mag, rat - &lo_mag)
                } else {
                    (rat + &lo_mag, rat + &hi_mag)
                };
                RealInterval::new(
                    Dyadic::floor_to_grid(&lo, bits),
                    Dyadic::ceil_to_grid(&hi, bits),
                    bits,
                )
            }
        }
    }

    /// Decimal approximation for display.
    pub fn approx_string(&self, bits: u32) -> String {
        match self {
            Real::Rat(r) => {
                let iv = RealInterval::point(r, bits);
                if iv.width().is_zero() {
                    iv.lo.to_decimal_string()
                } else {
                    iv.midpoint_display(bits)
                }
            }
            Real::Quad { .. } => self.to_interval(bits).midpoint_display(bits),
        }
    }
}

impl RealInterval {
    fn midpoint_display(&self, bits: u32) -> String {
        Dyadic::floor_to_grid(&self.midpoint(), bits).to_decimal_string()
    }
}

fn to_i32(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn int_sign_to_ordering(s: i32) -> Ordering {
    match s {
        x if x < 0 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

/// Writes n = s^2 * f with f squarefree; returns (s, f). Errors if the
/// squarefree part does not fit in u64.
fn extract_square_part(n: &Nat) -> Result<(Nat, u64)> {
    debug_assert!(!n.is_zero());
    let mut square = Nat::one();
    let mut remaining = n.clone();
    let mut p = 2u64;
    while p <= 10_007 {
        let pn = Nat::from(p);
        let psq = &pn * &pn;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&remaining, &psq);
            if r.is_zero() {
                square *= &pn;
                remaining = q;
            } else {
                break;
            }
        }
        // Strip a single leftover factor of p only bookkeeping-wise: it is
        // part of the squarefree remainder and needs no action.
        if remaining < psq {
            break;
        }
        p = next_small(p);
    }
    // The remainder may still be a perfect square (large prime squared).
    let s = remaining.sqrt();
    if &s * &s == remaining {
        square *= &s;
        remaining = Nat::one();
    }
    let free: u64 = u64::try_from(&remaining)
        .map_err(|_| Error::ResourceCap("squarefree discriminant exceeds u64".into()))?;
    Ok((square, free.max(1)))
}

fn next_small(p: u64) -> u64 {
    if p == 2 {
        3
    } else {
        p + 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rational_from_i64;

    fn phi() -> Real {
        // (1 + sqrt(5)) / 2
        Real::Rat(rational_from_i64(1, 2))
            .add(&Real::sqrt_rational(&rational_from_i64(5, 1)).unwrap().mul_rational(&rational_from_i64(1, 2)))
            .unwrap()
    }

    #[test]
    fn sqrt_normalisation() {
        // sqrt(12) = 2 sqrt(3)
        let s = Real::sqrt_rational(&rational_from_i64(12, 1)).unwrap();
        match &s {
            Real::Quad { rat, coef, root } => {
                assert!(rat.is_zero());
                assert_eq!(coef, &rational_from_i64(2, 1));
                assert_eq!(*root, 3);
            }
            _ => panic!("expected quadratic"),
        }
        // sqrt(9/4) = 3/2 exactly
        assert_eq!(
            Real::sqrt_rational(&rational_from_i64(9, 4)).unwrap(),
            Real::Rat(rational_from_i64(3, 2))
        );
    }

    #[test]
    fn golden_ratio_identities() {
        let phi = phi();
        // phi^2 = phi + 1
        let sq = phi.mul(&phi).unwrap();
        let plus_one = phi.add(&Real::one()).unwrap();
        assert_eq!(sq, plus_one);
        // 1/phi = phi - 1
        assert_eq!(phi.recip().unwrap(), phi.sub(&Real::one()).unwrap());
        assert_eq!(phi.floor(), Int::from(1));
        assert_eq!(phi.round_nearest(), Int::from(2));
        assert_eq!(phi.sign(), 1);
        assert_eq!(phi.neg().sign(), -1);
    }

    #[test]
    fn signs_with_mixed_parts() {
        // 3 - 2 sqrt(2) > 0 (since 9 > 8)
        let x = Real::from_int(3)
            .sub(&Real::sqrt_rational(&rational_from_i64(8, 1)).unwrap())
            .unwrap();
        assert_eq!(x.sign(), 1);
        // 2 - 2 sqrt(2) < 0
        let y = Real::from_int(2)
            .sub(&Real::sqrt_rational(&rational_from_i64(8, 1)).unwrap())
            .unwrap();
        assert_eq!(y.sign(), -1);
    }

    #[test]
    fn cross_field_comparison() {
        let r2 = Real::sqrt_rational(&rational_from_i64(2, 1)).unwrap();
        let r3 = Real::sqrt_rational(&rational_from_i64(3, 1)).unwrap();
        assert_eq!(r2.try_cmp(&r3).unwrap(), Ordering::Less);
        assert!(r2.mul(&r3).is_err());
    }

    #[test]
    fn interval_nesting() {
        let phi = phi();
        let coarse = phi.to_interval(8);
        let fine = phi.to_interval(24);
        assert!(coarse.contains(&fine));
        assert!(fine.width() <= rational_from_i64(1, 1 << 22));
        // 1.617 < phi < 1.619
        assert!(coarse.lo.to_rational() > rational_from_i64(1617, 1000) - rational_from_i64(1, 100));
    }

    #[test]
    fn rounding() {
        assert_eq!(Real::Rat(rational_from_i64(26, 10)).round_nearest(), Int::from(3));
        assert_eq!(Real::Rat(rational_from_i64(3, 10)).round_nearest(), Int::from(0));
        assert_eq!(Real::Rat(rational_from_i64(5, 2)).round_nearest(), Int::from(3));
    }
}
