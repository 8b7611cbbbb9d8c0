//! Places of Q: finite primes and the archimedean place.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::rational::{rational_pow, Int, Rational};
use super::real::Real;
use super::snumber::SValue;
use super::Valuation;
use crate::{Error, Result};

/// A place of Q: either a prime p >= 2 or infinity.
///
/// Primality is verified at construction, so a `Place::Finite` can be
/// trusted downstream. Ordering puts finite places first, ascending, with
/// infinity last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::validation(format!("{p} is not prime")))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::Finite(p) => Some(*p),
            Place::Infinity => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "infinity" || s == "oo" {
            return Ok(Place::Infinity);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::validation(format!("invalid place literal `{s}`")))?;
        Place::finite(p)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An ordered, duplicate-free set of places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSet {
    places: Vec<Place>,
    has_infinity: bool,
}

impl PlaceSet {
    pub fn new(mut places: Vec<Place>) -> Result<Self> {
        if places.is_empty() {
            return Err(Error::validation("a place set must contain at least one place"));
        }
        places.sort();
        for w in places.windows(2) {
            if w[0] == w[1] {
                return Err(Error::validation(format!("duplicate place {}", w[0])));
            }
        }
        let has_infinity = places.last() == Some(&Place::Infinity);
        Ok(PlaceSet { places, has_infinity })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let places = s
            .split(',')
            .map(Place::parse)
            .collect::<Result<Vec<_>>>()?;
        PlaceSet::new(places)
    }

    pub fn real_only() -> Self {
        PlaceSet { places: alloc::vec![Place::Infinity], has_infinity: true }
    }

    pub fn has_infinity(&self) -> bool {
        self.has_infinity
    }

    /// Cardinality l of the set.
    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.places.iter()
    }

    /// The finite places, in ascending order.
    pub fn finite(&self) -> impl Iterator<Item = &Place> {
        self.places.iter().filter(|p| p.is_finite())
    }

    pub fn contains(&self, p: &Place) -> bool {
        self.places.binary_search(p).is_ok()
    }

    /// Product of the finite primes in the set, as an integer.
    pub fn finite_prime_product(&self) -> Int {
        let mut acc = Int::from(1);
        for p in self.finite() {
            acc *= Int::from(p.prime().unwrap());
        }
        acc
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.places.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub(super) fn valuation_impl(x: &Rational, p: &Place) -> Result<Valuation> {
    let prime = p
        .prime()
        .ok_or_else(|| Error::validation("valuation is defined at finite places only"))?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let p_big = Int::from(prime);
    Ok(Valuation::Finite(
        int_valuation(x.numer(), &p_big) - int_valuation(x.denom(), &p_big),
    ))
}

fn int_valuation(x: &Int, p: &Int) -> i64 {
    debug_assert!(!x.is_zero());
    let mut v = 0i64;
    let mut m = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&m, p);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            return v;
        }
    }
}

pub(super) fn place_norm_impl(x: &SValue, nu: &Place) -> Result<Real> {
    match (x, nu) {
        (SValue::Rat(r), Place::Finite(_)) => {
            let v = valuation_impl(r, nu)?;
            match v {
                Valuation::Infinite => Ok(Real::zero()),
                Valuation::Finite(k) => {
                    let p = Rational::from(Int::from(nu.prime().unwrap()));
                    Ok(Real::from_rational(rational_pow(&p, -k)?))
                }
            }
        }
        (SValue::Rat(r), Place::Infinity) => Ok(Real::from_rational(r.abs())),
        (SValue::Real(r), Place::Infinity) => Ok(r.abs()),
        (SValue::Real(_), Place::Finite(_)) => Err(Error::validation(
            "irrational real value has no norm at a finite place",
        )),
    }
}
