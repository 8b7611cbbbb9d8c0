//! Non-negative magnitudes kept as products of powers, `prod base_i^(e_i)`.
//!
//! Weighted quasi-norms produce values of the form |x|^(1/tau) * H^eta with
//! rational exponents. Evaluating such powers numerically would forfeit
//! exactness, so a [`Magnitude`] keeps the factored form and decides every
//! comparison by clearing denominators: `A <= B` iff `A^L <= B^L` for the
//! common exponent denominator L, and the L-th powers land back in an exact
//! field.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, RealInterval};
use super::rational::{rational_root_exact, Int, Rational};
use super::real::Real;
use crate::{Error, Result};

const FALLBACK_CAP_BITS: u32 = 1 << 14;

/// A non-negative real magnitude in factored power form.
#[derive(Clone, Debug)]
pub enum Magnitude {
    Zero,
    /// Product of base^exp with every base > 0 and every exp != 0.
    Pos(Vec<(Real, Rational)>),
}

impl Magnitude {
    pub fn one() -> Self {
        Magnitude::Pos(Vec::new())
    }

    pub fn zero() -> Self {
        Magnitude::Zero
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Magnitude::Zero)
    }

    /// |r| as a magnitude.
    pub fn from_rational_abs(r: &Rational) -> Self {
        if r.is_zero() {
            Magnitude::Zero
        } else {
            Magnitude::Pos(vec![(Real::Rat(r.abs()), Rational::one())])
        }
    }

    /// Magnitude of a positive rational; errors on non-positive input.
    pub fn from_positive_rational(r: &Rational) -> Result<Self> {
        if r.is_positive() {
            Ok(Magnitude::Pos(vec![(Real::Rat(r.clone()), Rational::one())]))
        } else {
            Err(Error::validation("magnitude base must be positive"))
        }
    }

    /// |x| for an exact real.
    pub fn from_real_abs(x: &Real) -> Self {
        if x.is_zero() {
            Magnitude::Zero
        } else {
            Magnitude::Pos(vec![(x.abs(), Rational::one())])
        }
    }

    /// base^exp for a positive rational base.
    pub fn power_of_rational(base: &Rational, exp: &Rational) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::validation("power base must be positive"));
        }
        if exp.is_zero() {
            return Ok(Magnitude::one());
        }
        Ok(Magnitude::Pos(vec![(Real::Rat(base.clone()), exp.clone())]))
    }

    pub fn pow(&self, exp: &Rational) -> Result<Self> {
        match self {
            Magnitude::Zero => {
                if exp.is_positive() {
                    Ok(Magnitude::Zero)
                } else {
                    Err(Error::validation("zero magnitude raised to a non-positive power"))
                }
            }
            Magnitude::Pos(factors) => {
                if exp.is_zero() {
                    return Ok(Magnitude::one());
                }
                Ok(Magnitude::Pos(
                    factors.iter().map(|(b, e)| (b.clone(), e * exp)).collect(),
                ))
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Magnitude::Zero, _) | (_, Magnitude::Zero) => Magnitude::Zero,
            (Magnitude::Pos(a), Magnitude::Pos(b)) => {
                let mut f = a.clone();
                f.extend(b.iter().cloned());
                Magnitude::Pos(f)
            }
        }
    }

    pub fn recip(&self) -> Result<Self> {
        match self {
            Magnitude::Zero => Err(Error::validation("reciprocal of zero magnitude")),
            Magnitude::Pos(factors) => Ok(Magnitude::Pos(
                factors.iter().map(|(b, e)| (b.clone(), -e)).collect(),
            )),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Common denominator of every exponent on both sides.
    fn joint_denominator(&self, other: &Self) -> Result<i64> {
        let mut l = Int::one();
        for m in [self, other] {
            if let Magnitude::Pos(factors) = m {
                for (_, e) in factors {
                    l = l.lcm(e.denom());
                }
            }
        }
        i64::try_from(&l).map_err(|_| Error::ResourceCap("exponent denominator lcm exceeds i64".into()))
    }

    /// Raises to the integer power `l` (clearing all denominators) and
    /// multiplies out, staying in one exact field if possible.
    fn integer_power_value(&self, l: i64) -> Result<Real> {
        match self {
            Magnitude::Zero => Ok(Real::zero()),
            Magnitude::Pos(factors) => {
                let mut acc = Real::one();
                for (b, e) in factors {
                    let k = e * Rational::from(Int::from(l));
                    debug_assert!(k.is_integer());
                    let k = i64::try_from(&k.to_integer())
                        .map_err(|_| Error::ResourceCap("cleared exponent exceeds i64".into()))?;
                    acc = acc.mul(&b.pow_i64(k)?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Exact total comparison of two magnitudes.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (Magnitude::Zero, Magnitude::Zero) => Ok(Ordering::Equal),
            (Magnitude::Zero, Magnitude::Pos(_)) => Ok(Ordering::Less),
            (Magnitude::Pos(_), Magnitude::Zero) => Ok(Ordering::Greater),
            (Magnitude::Pos(_), Magnitude::Pos(_)) => {
                let l = self.joint_denominator(other)?;
                match (self.integer_power_value(l), other.integer_power_value(l)) {
                    (Ok(a), Ok(b)) => a.try_cmp(&b),
                    // Factors from distinct quadratic fields: compare sound
                    // enclosures, escalating until they separate.
                    _ => self.cmp_by_refinement(other),
                }
            }
        }
    }

    fn cmp_by_refinement(&self, other: &Self) -> Result<Ordering> {
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
            if bits >= FALLBACK_CAP_BITS {
                return Err(Error::PrecisionCap { bits });
            }
            bits *= 2;
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Result<Ordering> {
        if r.is_negative() {
            return Ok(Ordering::Greater);
        }
        self.try_cmp(&Magnitude::from_rational_abs(r))
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        Ok(if self.try_cmp(other)? == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        })
    }

    /// The exact rational value, when there is one.
    pub fn as_exact_rational(&self) -> Option<Rational> {
        match self {
            Magnitude::Zero => Some(Rational::zero()),
            Magnitude::Pos(_) => {
                let l = self.joint_denominator(&Magnitude::one()).ok()?;
                let a = self.integer_power_value(l).ok()?;
                let a = a.as_rational()?;
                rational_root_exact(a, u32::try_from(l).ok()?)
            }
        }
    }

    /// Largest integer <= value.
    pub fn floor(&self) -> Result<Int> {
        if self.is_zero() {
            return Ok(Int::zero());
        }
        if self.cmp_rational(&Rational::one())? == Ordering::Less {
            return Ok(Int::zero());
        }
        // Exponential search then bisection, all with exact comparisons.
        let mut hi = Int::from(2);
        while self.cmp_rational(&Rational::from(hi.clone()))? != Ordering::Less {
            hi = &hi * 2;
        }
        let mut lo = &hi / 2; // lo <= value < hi
        while &hi - &lo > Int::one() {
            let mid: Int = (&lo + &hi) / 2;
            if self.cmp_rational(&Rational::from(mid.clone()))? == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(lo)
    }

    /// Sound enclosure with endpoints on the 2^-bits grid.
    pub fn to_interval(&self, bits: u32) -> RealInterval {
        match self {
            Magnitude::Zero => RealInterval::point(&Rational::zero(), bits),
            Magnitude::Pos(factors) => {
                let guard = bits + 8 + 4 * factors.len() as u32;
                let mut lo = Rational::one();
                let mut hi = Rational::one();
                for (b, e) in factors {
                    let (flo, fhi) = factor_bounds(b, e, guard);
                    lo *= flo;
                    hi *= fhi;
                }
                RealInterval::new(
                    Dyadic::floor_to_grid(&lo, bits),
                    Dyadic::ceil_to_grid(&hi, bits),
                    bits,
                )
            }
        }
    }

    /// Midpoint of a 64-bit enclosure, as a rational; display helper.
    pub fn approx_rational(&self, bits: u32) -> Rational {
        self.to_interval(bits).midpoint()
    }
}

/// Rational bounds on base^exp for a positive base and rational exp.
fn factor_bounds(base: &Real, exp: &Rational, guard: u32) -> (Rational, Rational) {
    let iv = base.to_interval(guard);
    let mut blo = iv.lo.to_rational();
    let bhi = iv.hi.to_rational();
    if !blo.is_positive() {
        // Outward rounding may have crossed zero for tiny bases; fall back
        // to a positive sub-grid bound that is still sound.
        blo = Rational::new(Int::one(), Int::one() << (2 * guard) as usize).min(bhi.clone());
    }
    let n = exp.numer();
    let d = u32::try_from(exp.denom()).unwrap_or(u32::MAX);
    let neg = n.is_negative();
    let n_abs = u32::try_from(n.abs()).unwrap_or(u32::MAX);
    // (blo^n)^(1/d) lower, (bhi^n)^(1/d) upper for positive exponent.
    let lo_pow = pow_rational(&blo, n_abs);
    let hi_pow = pow_rational(&bhi, n_abs);
    let lo_root = root_lower(&lo_pow, d, guard);
    let hi_root = root_upper(&hi_pow, d, guard);
    if neg {
        (hi_root.recip(), lo_root.recip())
    } else {
        (lo_root, hi_root)
    }
}

fn pow_rational(x: &Rational, k: u32) -> Rational {
    x.pow(k as i32)
}

/// Rational lower bound on x^(1/d) for positive rational x.
fn root_lower(x: &Rational, d: u32, guard: u32) -> Rational {
    if d == 1 {
        return x.clone();
    }
    let scale = Int::one() << (guard as usize * d as usize);
    let scaled = (x * Rational::from(scale)).floor().to_integer();
    let r = scaled.magnitude().nth_root(d);
    if r.is_zero() {
        // x < 2^(-guard*d) <= 1, and x^(1/d) >= x on (0, 1].
        return x.clone();
    }
    Rational::new(Int::from(r), Int::one() << guard as usize)
}

/// Rational upper bound on x^(1/d) for positive rational x.
fn root_upper(x: &Rational, d: u32, guard: u32) -> Rational {
    if d == 1 {
        return x.clone();
    }
    let scale = Int::one() << (guard as usize * d as usize);
    let scaled = (x * Rational::from(scale)).ceil().to_integer();
    let r = scaled.magnitude().nth_root(d) + num_bigint::BigUint::one();
    Rational::new(Int::from(r), Int::one() << guard as usize)
}
