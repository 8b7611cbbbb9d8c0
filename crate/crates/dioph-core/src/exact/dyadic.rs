//! Dyadic rationals `m * 2^e` and closed intervals with dyadic endpoints.

use alloc::format;
use alloc::string::{String, ToString};

use num_traits::{One, Signed, Zero};

use super::rational::{Int, Rational};

/// A dyadic rational m * 2^e, normalised so that m is odd or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: Int,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: Int, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: Int::zero(), exp: 0 }
    }

    pub fn from_int(n: Int) -> Self {
        Dyadic::new(n, 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        while (&self.mant % 2) == Int::zero() {
            self.mant /= 2;
            self.exp += 1;
        }
    }

    pub fn mant(&self) -> &Int {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from(&self.mant * (Int::one() << self.exp as usize))
        } else {
            Rational::new(self.mant.clone(), Int::one() << (-self.exp) as usize)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.sub(other).mant.sign().cmp(&num_bigint::Sign::NoSign)
    }

    /// Largest grid point k/2^bits that is <= x, computed exactly.
    pub fn floor_to_grid(x: &Rational, bits: u32) -> Self {
        // floor(x * 2^bits) / 2^bits
        let scaled = x * Rational::from(Int::one() << bits as usize);
        Dyadic::new(scaled.floor().to_integer(), -(bits as i64))
    }

    /// Smallest grid point k/2^bits that is >= x, computed exactly.
    pub fn ceil_to_grid(x: &Rational, bits: u32) -> Self {
        let scaled = x * Rational::from(Int::one() << bits as usize);
        Dyadic::new(scaled.ceil().to_integer(), -(bits as i64))
    }

    /// Exact decimal rendering; dyadics always terminate in base 10.
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return format!("{}", &self.mant << self.exp as usize);
        }
        let k = (-self.exp) as u32;
        // m / 2^k = m * 5^k / 10^k
        let scaled: Int = &self.mant * Int::from(5u32).pow(k);
        let neg = scaled.is_negative();
        let digits = scaled.magnitude().to_string();
        let k = k as usize;
        let (int_part, frac_part) = if digits.len() > k {
            let split = digits.len() - k;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            (String::from("0"), format!("{:0>width$}", digits, width = k))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

/// Closed interval with dyadic endpoints; `precision` records the grid used.
///
/// Refinement never widens: intervals produced for the same value at a finer
/// grid are contained in those produced at a coarser grid, because dyadic
/// grids are nested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub precision: u32,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision: u32) -> Self {
        debug_assert!(lo.cmp(&hi) != core::cmp::Ordering::Greater);
        RealInterval { lo, hi, precision }
    }

    /// Exact outward rounding of a rational to the 2^-bits grid.
    pub fn enclose_rational(x: &Rational, bits: u32) -> Self {
        RealInterval::new(
            Dyadic::floor_to_grid(x, bits),
            Dyadic::ceil_to_grid(x, bits),
            bits,
        )
    }

    pub fn point(x: &Rational, bits: u32) -> Self {
        // Degenerate interval for a value exactly on the grid.
        let d = Dyadic::floor_to_grid(x, bits);
        if d.to_rational() == *x {
            RealInterval::new(d.clone(), d, bits)
        } else {
            RealInterval::enclose_rational(x, bits)
        }
    }

    pub fn width(&self) -> Rational {
        self.hi.sub(&self.lo).to_rational()
    }

    pub fn contains(&self, other: &RealInterval) -> bool {
        self.lo.cmp(&other.lo) != core::cmp::Ordering::Greater
            && other.hi.cmp(&self.hi) != core::cmp::Ordering::Greater
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    /// Entirely below `other` (strict separation).
    pub fn strictly_below(&self, other: &RealInterval) -> bool {
        self.hi.cmp(&other.lo) == core::cmp::Ordering::Less
    }

    pub fn midpoint(&self) -> Rational {
        (self.lo.to_rational() + self.hi.to_rational()) / Rational::from(Int::from(2))
    }

    pub fn to_display_pair(&self) -> (String, String) {
        (self.lo.to_decimal_string(), self.hi.to_decimal_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rational_from_i64;

    #[test]
    fn decimal_rendering() {
        assert_eq!(Dyadic::new(Int::from(5), -3).to_decimal_string(), "0.625");
        assert_eq!(Dyadic::new(Int::from(-3), -1).to_decimal_string(), "-1.5");
        assert_eq!(Dyadic::new(Int::from(7), 2).to_decimal_string(), "28");
        assert_eq!(Dyadic::zero().to_decimal_string(), "0");
    }

    #[test]
    fn grid_rounding_nests() {
        let x = rational_from_i64(1, 3);
        let coarse = RealInterval::enclose_rational(&x, 4);
        let fine = RealInterval::enclose_rational(&x, 12);
        assert!(coarse.contains(&fine));
        assert!(coarse.contains_rational(&x));
        assert!(fine.width() <= rational_from_i64(1, 1 << 12));
    }

    #[test]
    fn arithmetic() {
        let a = Dyadic::new(Int::from(3), -1); // 1.5
        let b = Dyadic::new(Int::from(1), -2); // 0.25
        assert_eq!(a.add(&b).to_rational(), rational_from_i64(7, 4));
        assert_eq!(a.mul(&b).to_rational(), rational_from_i64(3, 8));
        assert_eq!(a.sub(&b).to_rational(), rational_from_i64(5, 4));
    }
}
