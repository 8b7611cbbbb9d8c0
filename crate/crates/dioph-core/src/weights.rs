//! Weight systems and the weighted quasi-norms they induce.
//!
//! A weight system assigns a positive rational tau_{i,nu} to each of the n
//! residual coordinates at each place, and eta_l to each of the omega
//! bounded integer coordinates, subject to the balance condition
//! sum tau = omega = sum eta, where omega is m+n without the archimedean
//! place and m with it. Weights are rationals rather than arbitrary reals
//! so that every H^tau comparison reduces to integer cross-powers.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::{place_norm, Int, Magnitude, Place, PlaceSet, Rational, SNumber};
use crate::{Error, Result};

fn rational_sum<'a>(it: impl Iterator<Item = &'a Rational>) -> Rational {
    it.fold(Rational::zero(), |acc, x| acc + x)
}

/// S-arithmetic weight system for an m x n approximation problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    pub m: usize,
    pub n: usize,
    /// tau[(i, nu)] for 1 <= i <= n (0-indexed here), nu in S.
    pub tau: BTreeMap<(usize, Place), Rational>,
    /// eta_l for 1 <= l <= omega (0-indexed here).
    pub eta: Vec<Rational>,
}

/// A violation found by [`Weights::validate`], with the exact sums computed.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightViolation {
    NonPositiveEntry(String),
    ShapeMismatch(String),
    TauSum { expected: Rational, got: Rational },
    EtaSum { expected: Rational, got: Rational },
}

impl core::fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            WeightViolation::NonPositiveEntry(w) => write!(f, "non-positive weight {w}"),
            WeightViolation::ShapeMismatch(w) => write!(f, "shape mismatch: {w}"),
            WeightViolation::TauSum { expected, got } => {
                write!(f, "sum of tau is {got}, expected omega = {expected}")
            }
            WeightViolation::EtaSum { expected, got } => {
                write!(f, "sum of eta is {got}, expected omega = {expected}")
            }
        }
    }
}

impl Weights {
    /// omega = m+n if infinity is not in S, m otherwise.
    pub fn omega(m: usize, n: usize, s: &PlaceSet) -> usize {
        if s.has_infinity() {
            m
        } else {
            m + n
        }
    }

    pub fn new(
        m: usize,
        n: usize,
        tau: BTreeMap<(usize, Place), Rational>,
        eta: Vec<Rational>,
    ) -> Self {
        Weights { m, n, tau, eta }
    }

    /// Equal weights: tau_{i,nu} = omega / (n l), eta_l = 1.
    pub fn balanced(m: usize, n: usize, s: &PlaceSet) -> Self {
        let omega = Self::omega(m, n, s);
        let l = s.len();
        let tau_entry = Rational::new((omega as i64).into(), ((n * l) as i64).into());
        let mut tau = BTreeMap::new();
        for i in 0..n {
            for p in s.iter() {
                tau.insert((i, *p), tau_entry.clone());
            }
        }
        Weights { m, n, tau, eta: alloc::vec![Rational::one(); omega] }
    }

    pub fn tau_at(&self, i: usize, p: &Place) -> Result<&Rational> {
        self.tau
            .get(&(i, *p))
            .ok_or_else(|| Error::validation(format!("missing tau weight for (i={i}, nu={p})")))
    }

    pub fn eta_at(&self, l: usize) -> Result<&Rational> {
        self.eta
            .get(l)
            .ok_or_else(|| Error::validation(format!("missing eta weight at index {l}")))
    }

    /// Checks the shape and both sum identities exactly.
    pub fn validate(&self, s: &PlaceSet) -> core::result::Result<(), WeightViolation> {
        if self.m == 0 || self.n == 0 {
            return Err(WeightViolation::ShapeMismatch("m and n must be >= 1".into()));
        }
        let omega = Self::omega(self.m, self.n, s);
        let omega_rat = Rational::from(Int::from(omega as i64));
        if self.eta.len() != omega {
            return Err(WeightViolation::ShapeMismatch(format!(
                "eta has {} entries, omega = {omega}",
                self.eta.len()
            )));
        }
        if self.tau.len() != self.n * s.len() {
            return Err(WeightViolation::ShapeMismatch(format!(
                "tau has {} entries, expected n*l = {}",
                self.tau.len(),
                self.n * s.len()
            )));
        }
        for ((i, p), t) in &self.tau {
            if *i >= self.n || !s.contains(p) {
                return Err(WeightViolation::ShapeMismatch(format!(
                    "tau index (i={i}, nu={p}) out of range"
                )));
            }
            if !t.is_positive() {
                return Err(WeightViolation::NonPositiveEntry(format!("tau[{i},{p}] = {t}")));
            }
        }
        for (l, e) in self.eta.iter().enumerate() {
            if !e.is_positive() {
                return Err(WeightViolation::NonPositiveEntry(format!("eta[{l}] = {e}")));
            }
        }
        let tau_sum = rational_sum(self.tau.values());
        if tau_sum != omega_rat {
            return Err(WeightViolation::TauSum { expected: omega_rat, got: tau_sum });
        }
        let eta_sum = rational_sum(self.eta.iter());
        if eta_sum != omega_rat {
            return Err(WeightViolation::EtaSum { expected: omega_rat, got: eta_sum });
        }
        Ok(())
    }

    pub fn validate_or_err(&self, s: &PlaceSet) -> Result<()> {
        self.validate(s)
            .map_err(|v| Error::validation(format!("invalid weights: {v}")))
    }
}

/// Real-case weights (single place at infinity): n tau's and m eta's with
/// equal sums, not necessarily normalised to omega.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightsReal {
    pub tau: Vec<Rational>,
    pub eta: Vec<Rational>,
}

impl WeightsReal {
    pub fn new(tau: Vec<Rational>, eta: Vec<Rational>) -> Result<Self> {
        if tau.is_empty() || eta.is_empty() {
            return Err(Error::validation("weights must be non-empty"));
        }
        if tau.iter().any(|t| !t.is_positive()) || eta.iter().any(|e| !e.is_positive()) {
            return Err(Error::validation("weights must be positive"));
        }
        let ts = rational_sum(tau.iter());
        let es = rational_sum(eta.iter());
        if ts != es {
            return Err(Error::validation(format!(
                "weight sums differ: sum tau = {ts}, sum eta = {es}"
            )));
        }
        Ok(WeightsReal { tau, eta })
    }

    pub fn ones(m: usize, n: usize) -> Self {
        let mut tau = alloc::vec![Rational::one(); n];
        let eta = alloc::vec![Rational::one(); m];
        // Balance the sums exactly when m != n by scaling tau.
        if m != n {
            let scale = Rational::new((m as i64).into(), (n as i64).into());
            for t in &mut tau {
                *t *= &scale;
            }
        }
        WeightsReal { tau, eta }
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    pub fn m(&self) -> usize {
        self.eta.len()
    }

    /// The same system as an S-arithmetic weight set over S = {infinity}.
    ///
    /// The archimedean theorem normalises sums to omega = m; a uniform
    /// rescaling of all weights reparametrises H and changes nothing else,
    /// so this embedding rescales to meet the balance condition.
    pub fn to_s_arithmetic(&self) -> Weights {
        let m = self.m();
        let n = self.n();
        let sum = rational_sum(self.tau.iter());
        let scale = Rational::from(Int::from(m as i64)) / sum;
        let mut tau = BTreeMap::new();
        for (i, t) in self.tau.iter().enumerate() {
            tau.insert((i, Place::Infinity), t * &scale);
        }
        let eta = self.eta.iter().map(|e| e * &scale).collect();
        Weights { m, n, tau, eta }
    }
}

/// max over places and coordinates of |x_{i,nu}|_nu^(1/tau_{i,nu}).
pub fn tau_norm(x: &[SNumber], w: &Weights, s: &PlaceSet) -> Result<Magnitude> {
    if x.len() != w.n {
        return Err(Error::validation(format!(
            "vector length {} does not match n = {}",
            x.len(),
            w.n
        )));
    }
    let mut best = Magnitude::zero();
    for (i, xi) in x.iter().enumerate() {
        for p in s.iter() {
            let norm = place_norm(xi.at(p)?, p)?;
            let t = w.tau_at(i, p)?;
            let contrib = Magnitude::from_real_abs(&norm).pow(&t.recip())?;
            best = best.max(&contrib)?;
        }
    }
    Ok(best)
}

/// max_l |v_l|^(1/eta_l) over an integer vector of length omega (or m).
pub fn eta_norm(v: &[Int], w: &Weights) -> Result<Magnitude> {
    if v.len() != w.eta.len() {
        return Err(Error::validation(format!(
            "vector length {} does not match omega = {}",
            v.len(),
            w.eta.len()
        )));
    }
    let mut best = Magnitude::zero();
    for (l, c) in v.iter().enumerate() {
        let e = w.eta_at(l)?;
        let contrib = Magnitude::from_rational_abs(&Rational::from(c.clone())).pow(&e.recip())?;
        best = best.max(&contrib)?;
    }
    Ok(best)
}

/// |v_l| <= H^eta_l for every l, decided exactly by cross-powers.
pub fn eta_box_contains(v: &[Int], h: &Rational, w: &Weights) -> Result<bool> {
    for (l, c) in v.iter().enumerate() {
        let e = w.eta_at(l)?;
        let bound = Magnitude::power_of_rational(h, e)?;
        if Magnitude::from_rational_abs(&Rational::from(c.clone()))
            .try_cmp(&bound)?
            == core::cmp::Ordering::Greater
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational_from_i64;
    use alloc::vec;

    fn rat(n: i64, d: i64) -> Rational {
        rational_from_i64(n, d)
    }

    #[test]
    fn validate_examples() {
        // S = {inf}, m = n = 1, tau = eta = 1: omega = 1
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        assert!(w.validate(&s).is_ok());

        // S = {2, inf}: tau split 1/2 + 1/2, eta = (1)
        let s2 = PlaceSet::parse("2,inf").unwrap();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Finite(2)), rat(1, 2));
        tau.insert((0usize, Place::Infinity), rat(1, 2));
        let w2 = Weights::new(1, 1, tau, vec![rat(1, 1)]);
        assert!(w2.validate(&s2).is_ok());

        // S = {2}, m = n = 1: omega = 2; eta = (1,2) sums to 3 != 2
        let s3 = PlaceSet::parse("2").unwrap();
        let mut tau3 = BTreeMap::new();
        tau3.insert((0usize, Place::Finite(2)), rat(2, 1));
        let w3 = Weights::new(1, 1, tau3, vec![rat(1, 1), rat(2, 1)]);
        match w3.validate(&s3) {
            Err(WeightViolation::EtaSum { expected, got }) => {
                assert_eq!(expected, rat(2, 1));
                assert_eq!(got, rat(3, 1));
            }
            other => panic!("expected eta-sum violation, got {other:?}"),
        }
    }

    #[test]
    fn tau_norm_examples() {
        // n=1, S={inf}, tau=1, x = -3/4 -> 3/4
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let x = vec![SNumber::constant(&s, rat(-3, 4))];
        let norm = tau_norm(&x, &w, &s).unwrap();
        assert_eq!(norm.as_exact_rational(), Some(rat(3, 4)));

        // n=1, S={3,inf}, tau_3 = 2, tau_inf = 1: sum tau = 3, so omega
        // must be 3, i.e. m = 3 with eta = (1,1,1).
        let s2 = PlaceSet::parse("3,inf").unwrap();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Finite(3)), rat(2, 1));
        tau.insert((0usize, Place::Infinity), rat(1, 1));
        let w2 = Weights::new(3, 1, tau, vec![rat(1, 1), rat(1, 1), rat(1, 1)]);
        assert!(w2.validate(&s2).is_ok());
        // x_3 = 9, x_inf = 1/2: max(|9|_3^(1/2), 1/2) = max(1/3, 1/2) = 1/2
        let mut values = BTreeMap::new();
        values.insert(Place::Finite(3), SValue::Rat(rat(9, 1)));
        values.insert(Place::Infinity, SValue::Rat(rat(1, 2)));
        let x2 = vec![SNumber::new(&s2, values).unwrap()];
        let norm2 = tau_norm(&x2, &w2, &s2).unwrap();
        assert_eq!(norm2.as_exact_rational(), Some(rat(1, 2)));
    }

    use crate::exact::SValue;

    #[test]
    fn tau_norm_weighted_max() {
        // n=2, S={inf}, tau=(2,3), x=(4,27): max(4^(1/2), 27^(1/3)) = 3
        // Balance: omega = m; take m = 5, eta = 1^5.
        let s = PlaceSet::real_only();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Infinity), rat(2, 1));
        tau.insert((1usize, Place::Infinity), rat(3, 1));
        let w = Weights::new(5, 2, tau, vec![rat(1, 1); 5]);
        assert!(w.validate(&s).is_ok());
        let x = vec![
            SNumber::constant(&s, rat(4, 1)),
            SNumber::constant(&s, rat(27, 1)),
        ];
        assert_eq!(tau_norm(&x, &w, &s).unwrap().as_exact_rational(), Some(rat(3, 1)));
    }

    #[test]
    fn eta_norm_examples() {
        let s = PlaceSet::parse("2").unwrap();
        // omega = 2: eta = (1,1)
        let w = Weights::balanced(1, 1, &s);
        let v = vec![Int::from(3), Int::from(-5)];
        assert_eq!(eta_norm(&v, &w).unwrap().as_exact_rational(), Some(rat(5, 1)));

        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Finite(2)), rat(2, 1));
        let w2 = Weights::new(1, 1, tau, vec![rat(2, 1), rat(1, 1)]);
        let v2 = vec![Int::from(9), Int::from(2)];
        // eta = (2,1): max(9^(1/2), 2) = 3
        assert_eq!(eta_norm(&v2, &w2).unwrap().as_exact_rational(), Some(rat(3, 1)));

        let v0 = vec![Int::from(0), Int::from(0)];
        assert!(eta_norm(&v0, &w).unwrap().is_zero());
    }

    #[test]
    fn weighted_homogeneity() {
        // (t^tau_1 x_1, t^tau_2 x_2) has norm t * |x|_tau for rational t^tau_i.
        let s = PlaceSet::real_only();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Infinity), rat(2, 1));
        tau.insert((1usize, Place::Infinity), rat(1, 1));
        let w = Weights::new(3, 2, tau, vec![rat(1, 1); 3]);
        let t = rat(4, 1); // t^2 = 16, t^1 = 4
        for (x1, x2) in [(rat(3, 1), rat(2, 1)), (rat(1, 2), rat(5, 1)), (rat(0, 1), rat(7, 3))] {
            let x = vec![
                SNumber::constant(&s, x1.clone()),
                SNumber::constant(&s, x2.clone()),
            ];
            let scaled = vec![
                SNumber::constant(&s, &x1 * rat(16, 1)),
                SNumber::constant(&s, &x2 * rat(4, 1)),
            ];
            let lhs = tau_norm(&scaled, &w, &s).unwrap();
            let rhs = tau_norm(&x, &w, &s)
                .unwrap()
                .mul(&Magnitude::from_rational_abs(&t));
            assert_eq!(lhs.try_cmp(&rhs).unwrap(), core::cmp::Ordering::Equal);
        }
    }

    #[test]
    fn real_weights_embed() {
        let wr = WeightsReal::new(vec![rat(1, 1)], vec![rat(1, 1)]).unwrap();
        let w = wr.to_s_arithmetic();
        assert!(w.validate(&PlaceSet::real_only()).is_ok());
        // Unequal m, n rescale: tau = (1,1), eta = (2): sums 2 = 2, omega = 1
        let wr2 = WeightsReal::new(vec![rat(1, 1), rat(1, 1)], vec![rat(2, 1)]).unwrap();
        let w2 = wr2.to_s_arithmetic();
        assert!(w2.validate(&PlaceSet::real_only()).is_ok());
        assert!(WeightsReal::new(vec![rat(1, 1)], vec![rat(2, 1)]).is_err());
    }
}
