//! Descriptors for the algebraic constants used as test inputs.

use num_traits::Zero;

use super::dyadic::RealInterval;
use super::rational::{Int, Rational};
use super::real::Real;
use crate::{Error, Result};

/// (p + q * sqrt(d)) / r with d >= 0 and r != 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicConstant {
    pub p: Int,
    pub q: Int,
    pub d: i64,
    pub r: Int,
}

impl AlgebraicConstant {
    pub fn rational(x: Rational) -> Self {
        AlgebraicConstant {
            p: x.numer().clone(),
            q: Int::zero(),
            d: 0,
            r: x.denom().clone(),
        }
    }

    pub fn golden_ratio() -> Self {
        AlgebraicConstant { p: Int::from(1), q: Int::from(1), d: 5, r: Int::from(2) }
    }

    pub fn sqrt(d: i64) -> Self {
        AlgebraicConstant { p: Int::zero(), q: Int::from(1), d, r: Int::from(1) }
    }

    /// The exact value as a `Real`.
    pub fn to_real(&self) -> Result<Real> {
        if self.d < 0 {
            return Err(Error::validation("negative discriminant in algebraic constant"));
        }
        if self.r.is_zero() {
            return Err(Error::validation("zero denominator in algebraic constant"));
        }
        let root = Real::sqrt_rational(&Rational::from(Int::from(self.d)))?;
        let num = Real::Rat(Rational::from(self.p.clone()))
            .add(&root.mul_rational(&Rational::from(self.q.clone())))?;
        Ok(num.mul_rational(&Rational::new(Int::from(1), self.r.clone())))
    }
}

/// An interval of width at most 2^-bits containing the constant.
pub fn refine_constant(spec: &AlgebraicConstant, bits: u32) -> Result<RealInterval> {
    Ok(spec.to_real()?.to_interval(bits))
}
