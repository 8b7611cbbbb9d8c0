//! Congruence lattices realising the finite-place residual conditions.
//!
//! A p-adic bound |a alpha - b|_nu < B on integers (a, b) is an exact
//! congruence: with k minimal such that nu^-k < B, the condition is
//! v_nu(a alpha - b) >= k. Divisibility side conditions |(a,b)|_nu <= 1/nu
//! become coordinate congruences mod nu.

use alloc::vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{congruences_to_lattice, CongruenceSystem, IntegerLattice};
use crate::exact::{place_norm, Int, Magnitude, Place, PlaceSet, Rational, SMatrix, SValue};
use crate::weights::Weights;
use crate::{Error, Result};

const MAX_PRIME_EXPONENT: u32 = 200_000;

/// Minimal k >= 0 such that p^-k is below `bound` (strictly if `strict`).
/// A congruence mod p^k then encodes |x|_p < bound (resp <=) for p-integral x.
pub fn prime_power_exponent(p: u64, bound: &Magnitude, strict: bool) -> Result<u32> {
    if bound.is_zero() {
        return Err(Error::validation("residual bound must be positive"));
    }
    let mut k = 0u32;
    let mut pk = Int::one();
    loop {
        let val = Rational::new(Int::one(), pk.clone());
        let ord = Magnitude::from_rational_abs(&val).try_cmp(bound)?;
        let ok = if strict {
            ord == core::cmp::Ordering::Less
        } else {
            ord != core::cmp::Ordering::Greater
        };
        if ok {
            return Ok(k);
        }
        k += 1;
        pk *= Int::from(p);
        if k > MAX_PRIME_EXPONENT {
            return Err(Error::ResourceCap("prime-power exponent exceeds cap".into()));
        }
    }
}

/// Which coordinates carry the |.|_nu <= 1/nu divisibility conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DivisibilityMode {
    /// No divisibility conditions (homogeneous Dirichlet solving).
    None,
    /// All of (a, b): the finite-place lattice when infinity is absent.
    AllCoordinates,
    /// Only a: the lattice when infinity is present.
    ACoordinates,
}

/// Builds the congruence system for residual bounds `bound_for(i, nu)` at
/// every finite place, in the convention a alpha - b.
pub(crate) fn residual_system(
    alpha: &SMatrix,
    s: &PlaceSet,
    bound_for: &dyn Fn(usize, &Place) -> Result<Magnitude>,
    strict: bool,
    div: DivisibilityMode,
) -> Result<CongruenceSystem> {
    let (m, n) = (alpha.m, alpha.n);
    let d = m + n;
    let mut sys = CongruenceSystem::new();
    for nu in s.finite() {
        let p = nu.prime().unwrap();
        let alpha_nu = alpha.rational_at(nu)?;
        for entry in alpha_nu.iter().flatten() {
            if let crate::exact::Valuation::Finite(v) = crate::exact::valuation(entry, nu)? {
                if v < 0 {
                    return Err(Error::validation(alloc::format!(
                        "matrix entry has negative valuation at place {nu}"
                    )));
                }
            }
        }
        for i in 0..n {
            let bound = bound_for(i, nu)?;
            let k = prime_power_exponent(p, &bound, strict)?;
            if k == 0 {
                continue;
            }
            let modulus = Int::from(p).pow(k);
            // Clear denominators: D is a nu-unit because alpha is integral.
            let mut denom = Int::one();
            for j in 0..m {
                denom = denom.lcm(alpha_nu[j][i].denom());
            }
            debug_assert!(!(&denom % Int::from(p)).is_zero());
            let mut row = vec![Int::zero(); d];
            for j in 0..m {
                let scaled = &alpha_nu[j][i] * Rational::from(denom.clone());
                debug_assert!(scaled.is_integer());
                row[j] = scaled.to_integer();
            }
            row[m + i] = -denom.clone();
            sys.push(row, modulus);
        }
        match div {
            DivisibilityMode::None => {}
            DivisibilityMode::AllCoordinates => {
                for t in 0..d {
                    let mut row = vec![Int::zero(); d];
                    row[t] = Int::one();
                    sys.push(row, Int::from(p));
                }
            }
            DivisibilityMode::ACoordinates => {
                for t in 0..m {
                    let mut row = vec![Int::zero(); d];
                    row[t] = Int::one();
                    sys.push(row, Int::from(p));
                }
            }
        }
    }
    Ok(sys)
}

/// The lattice Gamma_alpha(eps, H): integer (a, b) whose residual a alpha - b
/// is below (eps/H)^tau_{i,nu} at every finite place (strictly), together
/// with the divisibility conditions |(a,b)|_nu <= 1/nu (all coordinates when
/// infinity is absent, a-coordinates when present). Archimedean conditions
/// are not imposed here; they live in the accompanying box.
pub fn gamma_lattice(
    alpha: &SMatrix,
    eps: &Rational,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
) -> Result<IntegerLattice> {
    if !eps.is_positive() || !h.is_positive() {
        return Err(Error::validation("eps and H must be positive"));
    }
    let ratio = eps / Rational::from(h.clone());
    let div = if s.has_infinity() {
        DivisibilityMode::ACoordinates
    } else {
        DivisibilityMode::AllCoordinates
    };
    let bound_for = |i: usize, nu: &Place| -> Result<Magnitude> {
        Magnitude::power_of_rational(&ratio, w.tau_at(i, nu)?)
    };
    let sys = residual_system(alpha, s, &bound_for, true, div)?;
    congruences_to_lattice(&sys, alpha.m + alpha.n)
}

/// The congruence lattice for the homogeneous Dirichlet system: residuals
/// bounded by nu * H^-tau_{i,nu} (weakly) at finite places, with no
/// divisibility conditions.
pub fn dirichlet_lattice(
    alpha: &SMatrix,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
) -> Result<IntegerLattice> {
    if !h.is_positive() {
        return Err(Error::validation("H must be positive"));
    }
    let h_rat = Rational::from(h.clone());
    let bound_for = |i: usize, nu: &Place| -> Result<Magnitude> {
        let tau = w.tau_at(i, nu)?;
        let base = Magnitude::power_of_rational(&h_rat, &-tau.clone())?;
        Ok(base.mul(&Magnitude::from_rational_abs(&Rational::from(Int::from(
            nu.prime().unwrap(),
        )))))
    };
    let sys = residual_system(alpha, s, &bound_for, false, DivisibilityMode::None)?;
    congruences_to_lattice(&sys, alpha.m + alpha.n)
}

/// Direct evaluation of the defining conditions of Gamma_alpha(eps, H) on an
/// integer vector, through place norms only. Used to cross-check lattice
/// membership in tests and invariants.
pub fn gamma_conditions_hold(
    alpha: &SMatrix,
    eps: &Rational,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
    v: &[Int],
) -> Result<bool> {
    let (m, n) = (alpha.m, alpha.n);
    if v.len() != m + n {
        return Err(Error::validation("vector length mismatch"));
    }
    let ratio = eps / Rational::from(h.clone());
    let (a, b) = v.split_at(m);
    for nu in s.finite() {
        let alpha_nu = alpha.rational_at(nu)?;
        for i in 0..n {
            let mut res = -Rational::from(b[i].clone());
            for j in 0..m {
                res += &alpha_nu[j][i] * Rational::from(a[j].clone());
            }
            let norm = place_norm(&SValue::Rat(res), nu)?;
            let bound = Magnitude::power_of_rational(&ratio, w.tau_at(i, nu)?)?;
            if Magnitude::from_real_abs(&norm).try_cmp(&bound)?
                != core::cmp::Ordering::Less
            {
                return Ok(false);
            }
        }
        // Divisibility: |(a,b)|_nu <= 1/nu, or |a|_nu <= 1/nu with infinity.
        let p = Int::from(nu.prime().unwrap());
        let coords = if s.has_infinity() { a } else { v };
        for x in coords {
            if !(x % &p).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
