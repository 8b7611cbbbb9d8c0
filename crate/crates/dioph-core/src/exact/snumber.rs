//! Elements of Q_S: one value per place, exact at every place.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::place::{Place, PlaceSet};
use super::rational::{parse_rational, Int, Rational};
use super::real::Real;
use super::{valuation, Valuation};
use crate::{Error, Result};

/// A value at a single place: exact rational, or an exact real (rational or
/// quadratic irrational) at the archimedean place.
#[derive(Clone, Debug, PartialEq)]
pub enum SValue {
    Rat(Rational),
    Real(Real),
}

impl SValue {
    pub fn zero() -> Self {
        SValue::Rat(Rational::zero())
    }

    pub fn as_real(&self) -> Real {
        match self {
            SValue::Rat(r) => Real::Rat(r.clone()),
            SValue::Real(r) => r.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            SValue::Rat(r) => Some(r),
            SValue::Real(r) => r.as_rational(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SValue::Rat(r) => r.is_zero(),
            SValue::Real(r) => r.is_zero(),
        }
    }

    /// Parses `p/q`, `sqrt(d)`, `sqrt(d)/r`, or `(p+q*sqrt(d))/r`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sqrt(") {
            let (d, tail) = split_close(rest)?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| Error::validation("invalid discriminant in sqrt()"))?;
            if d < 0 {
                return Err(Error::validation("negative discriminant"));
            }
            let mut val = Real::sqrt_rational(&Rational::from(Int::from(d)))?;
            if let Some(den) = tail.strip_prefix('/') {
                let den = parse_rational(den)?;
                if den.is_zero() {
                    return Err(Error::validation("division by zero in literal"));
                }
                val = val.mul_rational(&den.recip());
            } else if !tail.trim().is_empty() {
                return Err(Error::validation(format!("trailing input `{tail}` in literal")));
            }
            return Ok(SValue::Real(val));
        }
        if let Some(rest) = s.strip_prefix('(') {
            let (inner, tail) = split_close(rest)?;
            let inner_val = parse_quad_sum(inner)?;
            let val = if let Some(den) = tail.strip_prefix('/') {
                let den = parse_rational(den)?;
                if den.is_zero() {
                    return Err(Error::validation("division by zero in literal"));
                }
                inner_val.mul_rational(&den.recip())
            } else if tail.trim().is_empty() {
                inner_val
            } else {
                return Err(Error::validation(format!("trailing input `{tail}` in literal")));
            };
            return Ok(match val.as_rational() {
                Some(r) => SValue::Rat(r.clone()),
                None => SValue::Real(val),
            });
        }
        Ok(SValue::Rat(parse_rational(s)?))
    }

    pub fn render(&self) -> String {
        match self {
            SValue::Rat(r) => format!("{}/{}", r.numer(), r.denom()),
            SValue::Real(Real::Rat(r)) => format!("{}/{}", r.numer(), r.denom()),
            SValue::Real(Real::Quad { rat, coef, root }) => format!(
                "({}/{}+{}/{}*sqrt({root}))/1",
                rat.numer(),
                rat.denom(),
                coef.numer(),
                coef.denom()
            ),
        }
    }
}

/// Splits `s` at the parenthesis matching an already-consumed opener.
fn split_close(s: &str) -> Result<(&str, &str)> {
    let mut depth = 1usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((&s[..i], s[i + 1..].trim()));
                }
            }
            _ => {}
        }
    }
    Err(Error::validation("unbalanced parenthesis in literal"))
}

/// `p + q*sqrt(d)` or `p - q*sqrt(d)` (q optional, defaults to 1).
fn parse_quad_sum(s: &str) -> Result<Real> {
    let s = s.trim();
    // Find the +/- that separates the rational part from the sqrt term,
    // skipping a leading sign.
    let bytes = s.as_bytes();
    let mut split = None;
    for (i, &c) in bytes.iter().enumerate().skip(1) {
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'*' | b'/') {
            split = Some(i);
            break;
        }
    }
    let Some(i) = split else {
        // No sum: either pure rational or pure multiple of sqrt.
        return parse_quad_term(s);
    };
    let head = parse_rational(&s[..i])?;
    let sign = if bytes[i] == b'-' { -1i64 } else { 1 };
    let term = parse_quad_term(&s[i + 1..])?;
    Ok(Real::Rat(head).add(&term.mul_rational(&Rational::from(Int::from(sign))))?)
}

/// `q*sqrt(d)`, `sqrt(d)`, or a bare rational.
fn parse_quad_term(s: &str) -> Result<Real> {
    let s = s.trim();
    if let Some((coef, root)) = s.split_once('*') {
        let coef = parse_rational(coef)?;
        let root = root.trim();
        let rest = root
            .strip_prefix("sqrt(")
            .ok_or_else(|| Error::validation("expected sqrt(..) after `*`"))?;
        let (d, tail) = split_close(rest)?;
        if !tail.trim().is_empty() {
            return Err(Error::validation("trailing input after sqrt()"));
        }
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::validation("invalid discriminant in sqrt()"))?;
        if d < 0 {
            return Err(Error::validation("negative discriminant"));
        }
        return Ok(Real::sqrt_rational(&Rational::from(Int::from(d)))?.mul_rational(&coef));
    }
    if let Some(rest) = s.strip_prefix("sqrt(") {
        let (d, tail) = split_close(rest)?;
        if !tail.trim().is_empty() {
            return Err(Error::validation("trailing input after sqrt()"));
        }
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::validation("invalid discriminant in sqrt()"))?;
        if d < 0 {
            return Err(Error::validation("negative discriminant"));
        }
        return Real::sqrt_rational(&Rational::from(Int::from(d)));
    }
    Ok(Real::Rat(parse_rational(s)?))
}

/// An element of Q_S: one value for each place of the ambient set.
#[derive(Clone, Debug, PartialEq)]
pub struct SNumber {
    values: BTreeMap<Place, SValue>,
}

impl SNumber {
    pub fn new(s: &PlaceSet, values: BTreeMap<Place, SValue>) -> Result<Self> {
        if values.len() != s.len() || !s.iter().all(|p| values.contains_key(p)) {
            return Err(Error::validation(
                "value map keys must equal the ambient place set",
            ));
        }
        for (p, v) in &values {
            if p.is_finite() {
                if !matches!(v, SValue::Rat(_)) {
                    return Err(Error::validation(
                        "finite-place components must be rational",
                    ));
                }
            }
        }
        Ok(SNumber { values })
    }

    /// The diagonal embedding of a rational.
    pub fn constant(s: &PlaceSet, value: Rational) -> Self {
        let values = s
            .iter()
            .map(|p| (*p, SValue::Rat(value.clone())))
            .collect();
        SNumber { values }
    }

    /// Zero at every finite place, the given real at infinity.
    pub fn real_only(value: Real) -> Self {
        let mut values = BTreeMap::new();
        values.insert(Place::Infinity, SValue::Real(value));
        SNumber { values }
    }

    pub fn at(&self, p: &Place) -> Result<&SValue> {
        self.values
            .get(p)
            .ok_or_else(|| Error::validation(format!("no component at place {p}")))
    }

    pub fn rational_at(&self, p: &Place) -> Result<&Rational> {
        match self.at(p)? {
            SValue::Rat(r) => Ok(r),
            SValue::Real(_) => Err(Error::validation(format!(
                "component at place {p} is not rational"
            ))),
        }
    }

    pub fn real_at_infinity(&self) -> Result<Real> {
        Ok(self.at(&Place::Infinity)?.as_real())
    }

    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.values.keys()
    }

    /// True iff the component at every finite place is a nu-adic integer.
    pub fn is_finite_place_integral(&self) -> Result<bool> {
        for (p, v) in &self.values {
            if p.is_finite() {
                let r = v.as_rational().ok_or_else(|| {
                    Error::validation("finite-place component must be rational")
                })?;
                if let Valuation::Finite(k) = valuation(r, p)? {
                    if k < 0 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Parses `place:value` pairs (`2:7/4, inf:sqrt(5)/2`) or a bare
    /// rational, which embeds diagonally.
    pub fn parse(s: &str, places: &PlaceSet) -> Result<Self> {
        let s = s.trim();
        if !s.contains(':') {
            return Ok(SNumber::constant(places, parse_rational(s)?));
        }
        let mut values = BTreeMap::new();
        for pair in s.split(',') {
            let (place_s, value_s) = pair
                .split_once(':')
                .ok_or_else(|| Error::validation(format!("expected place:value, got `{pair}`")))?;
            let place = Place::parse(place_s)?;
            if !places.contains(&place) {
                return Err(Error::validation(format!(
                    "place {place} is not in the ambient set {places}"
                )));
            }
            let value = SValue::parse(value_s)?;
            if place.is_finite() && !matches!(value, SValue::Rat(_)) {
                return Err(Error::validation(
                    "finite-place components must be rational",
                ));
            }
            if values.insert(place, value).is_some() {
                return Err(Error::validation(format!("duplicate place {place}")));
            }
        }
        SNumber::new(places, values)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (p, v)) in self.values.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{p}:{}", v.render()));
        }
        out
    }
}

/// A vector over Q_S.
pub type SVector = Vec<SNumber>;

/// An m x n matrix over Q_S, stored row-major (m rows, n columns).
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrix {
    pub m: usize,
    pub n: usize,
    rows: Vec<Vec<SNumber>>,
}

impl SMatrix {
    pub fn new(m: usize, n: usize, rows: Vec<Vec<SNumber>>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::validation("matrix dimensions must be positive"));
        }
        if rows.len() != m || rows.iter().any(|r| r.len() != n) {
            return Err(Error::validation("matrix shape mismatch"));
        }
        Ok(SMatrix { m, n, rows })
    }

    /// Same rational matrix at every place of S (diagonal embedding).
    pub fn constant(s: &PlaceSet, entries: Vec<Vec<Rational>>) -> Result<Self> {
        let m = entries.len();
        let n = entries.first().map(|r| r.len()).unwrap_or(0);
        let rows = entries
            .into_iter()
            .map(|row| row.into_iter().map(|e| SNumber::constant(s, e)).collect())
            .collect();
        SMatrix::new(m, n, rows)
    }

    pub fn entry(&self, j: usize, i: usize) -> &SNumber {
        &self.rows[j][i]
    }

    /// The m x n rational matrix of components at a finite place.
    pub fn rational_at(&self, p: &Place) -> Result<Vec<Vec<Rational>>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|e| e.rational_at(p).cloned()).collect())
            .collect()
    }

    /// The m x n real matrix of components at infinity.
    pub fn real_at_infinity(&self) -> Result<Vec<Vec<Real>>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|e| e.real_at_infinity()).collect())
            .collect()
    }

    pub fn is_finite_place_integral(&self) -> Result<bool> {
        for row in &self.rows {
            for e in row {
                if !e.is_finite_place_integral()? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
