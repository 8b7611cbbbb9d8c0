//! Exact rational, p-adic, quadratic-real and dyadic-interval arithmetic.
//!
//! Finite-place values are exact rationals, so every p-adic inequality
//! reduces to a valuation comparison. Real-place values are kept in the
//! smallest field that can hold them (`Q` or a real quadratic field
//! `Q(sqrt(d))`), so strict archimedean inequalities are decided exactly.
//! Dyadic intervals exist for reporting and as a sound fallback when two
//! values from different quadratic fields must be separated.

mod constant;
mod crt;
mod dyadic;
mod magnitude;
mod place;
mod rational;
mod real;
mod snumber;

pub use constant::{refine_constant, AlgebraicConstant};
pub use crt::crt_solve;
pub use dyadic::{Dyadic, RealInterval};
pub use magnitude::Magnitude;
pub use place::{Place, PlaceSet};
pub use rational::{
    parse_rational, rational_from_i64, rational_is_integer, rational_pow, Int, Nat, Rational,
};
pub use real::Real;
pub use snumber::{SMatrix, SNumber, SValue, SVector};

use crate::Result;

/// p-adic valuation, extended with `Infinite` for the value zero.
///
/// Ordered so that `Infinite` dominates every finite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

/// v_p(x) for a rational x; `Valuation::Infinite` for x = 0.
pub fn valuation(x: &Rational, p: &Place) -> Result<Valuation> {
    place::valuation_impl(x, p)
}

/// |x|_nu as an exact value: p^(-v_p(x)) at a finite place, |x| at infinity.
pub fn place_norm(x: &SValue, nu: &Place) -> Result<Real> {
    place::place_norm_impl(x, nu)
}
