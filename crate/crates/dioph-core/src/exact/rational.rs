//! Aliases and small helpers over `num` arbitrary-precision types.

use alloc::string::ToString;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Nat = BigUint;

/// Exact rational with positive denominator, always in lowest terms.
///
/// `num_rational::Ratio` maintains both invariants after every operation.
pub type Rational = Ratio<BigInt>;

pub fn rational_from_i64(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

pub fn rational_is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// x^k for integer k of either sign; errors on 0^negative.
pub fn rational_pow(x: &Rational, k: i64) -> Result<Rational> {
    if x.is_zero() {
        if k < 0 {
            return Err(Error::validation("zero raised to a negative power"));
        }
        return Ok(if k == 0 { Rational::one() } else { Rational::zero() });
    }
    let mag = x.pow(k.unsigned_abs().try_into().map_err(|_| {
        Error::ResourceCap("rational exponent magnitude exceeds i32".to_string())
    })?);
    Ok(if k < 0 { mag.recip() } else { mag })
}

/// Parses `p`, `-p`, or `p/q` with q > 0 after sign normalisation.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num_s
        .parse()
        .map_err(|_| Error::validation("invalid integer in rational literal"))?;
    let den: Int = den_s
        .parse()
        .map_err(|_| Error::validation("invalid denominator in rational literal"))?;
    if den.is_zero() {
        return Err(Error::validation("zero denominator in rational literal"));
    }
    Ok(Rational::new(num, den))
}

/// Floor of the exact q-th root of a non-negative integer.
pub fn nat_root_floor(x: &Nat, q: u32) -> Nat {
    debug_assert!(q >= 1);
    x.nth_root(q)
}

/// True iff x is an exact q-th power of a natural number.
pub fn nat_is_perfect_power(x: &Nat, q: u32) -> Option<Nat> {
    let r = nat_root_floor(x, q);
    if r.pow(q) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact q-th root of a non-negative rational, if it is rational.
pub fn rational_root_exact(x: &Rational, q: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num = nat_is_perfect_power(x.numer().magnitude(), q)?;
    let den = nat_is_perfect_power(x.denom().magnitude(), q)?;
    Some(Rational::new(Int::from(num), Int::from(den)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rational_from_i64(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), rational_from_i64(-7, 1));
        assert_eq!(parse_rational(" 2 / -6 ").unwrap(), rational_from_i64(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn pow_signs() {
        let x = rational_from_i64(2, 3);
        assert_eq!(rational_pow(&x, 2).unwrap(), rational_from_i64(4, 9));
        assert_eq!(rational_pow(&x, -1).unwrap(), rational_from_i64(3, 2));
        assert_eq!(rational_pow(&x, 0).unwrap(), Rational::one());
        assert!(rational_pow(&Rational::zero(), -2).is_err());
    }

    #[test]
    fn exact_roots() {
        assert_eq!(
            rational_root_exact(&rational_from_i64(4, 9), 2),
            Some(rational_from_i64(2, 3))
        );
        assert_eq!(rational_root_exact(&rational_from_i64(2, 1), 2), None);
        assert_eq!(
            rational_root_exact(&rational_from_i64(27, 8), 3),
            Some(rational_from_i64(3, 2))
        );
    }
}
