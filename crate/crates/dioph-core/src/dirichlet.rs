//! Homogeneous weighted Dirichlet solving and the quantified singularity
//! profile.
//!
//! The solver realises the system
//!   |a alpha_i - b_i|_nu <= nu H^(-tau_{i,nu})   (finite nu)
//!   |a alpha_i - b_i|    <  H^(-tau_{i,inf})     (when infinity is present)
//!   |a_j| <= H^(eta_j),  |b_i| <= H^(eta_{m+i})  (the latter without infinity)
//! by intersecting the congruence lattice of the finite places with the
//! weighted box of the remaining conditions and enumerating. Solvability is
//! a theorem, so an empty enumeration is reported as an internal error.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::exact::{
    place_norm, Int, Magnitude, Place, PlaceSet, Rational, Real, SMatrix, SValue,
};
use crate::lattice::{
    congruences_to_lattice, dirichlet_lattice, enumerate_box, residual_system, BoxFace,
    DivisibilityMode, LatticeLimits, WeightedBox,
};
use crate::weights::{eta_norm, Weights};
use crate::{Error, Result};

/// A verified solution of the homogeneous system at height H.
#[derive(Clone, Debug)]
pub struct DirichletSolution {
    pub a: Vec<Int>,
    pub b: Vec<Int>,
    pub h: Int,
    /// |a alpha_i - b_i|_nu, exact, for every i and place.
    pub residual_norms: Vec<ResidualNorm>,
    /// One entry per inequality of the system, all of which must hold.
    pub bound_checks: Vec<BoundCheck>,
    /// Height above which any solution is forced to have a != 0 (present
    /// when infinity is in S, or when every residual weight sum exceeds the
    /// matching eta weight).
    pub a_nonzero_threshold: Option<Magnitude>,
}

impl DirichletSolution {
    pub fn a_is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn all_checks_hold(&self) -> bool {
        self.bound_checks.iter().all(|c| c.holds)
    }
}

#[derive(Clone, Debug)]
pub struct ResidualNorm {
    pub i: usize,
    pub place: Place,
    pub norm: Magnitude,
}

#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub name: String,
    pub holds: bool,
}

/// The infimum of eps for which the tightened system is solvable at H.
#[derive(Clone, Debug)]
pub struct EpsilonStar {
    /// Exact infimum; `Magnitude::Zero` iff a residual-free pair exists.
    pub exact: Magnitude,
    /// Rational representative: the exact value when rational, otherwise a
    /// sound upper enclosure endpoint at the configured precision.
    pub rational: Rational,
    /// Whether `rational` is exactly the infimum.
    pub attained: bool,
    /// A minimising pair (a, b), when one was extracted.
    pub witness: Option<(Vec<Int>, Vec<Int>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    SingularEvidence,
    NonSingularEvidence,
}

#[derive(Clone, Debug)]
pub struct ProfilePoint {
    pub h: Int,
    pub eps_star: Rational,
    pub attained: bool,
    /// Exact value backing the rational field.
    pub eps_exact: Magnitude,
}

#[derive(Clone, Debug)]
pub struct SingularityVerdict {
    pub profile: Vec<ProfilePoint>,
    pub classification: Classification,
    /// Heights with eps_star >= threshold.
    pub witness_heights: Vec<Int>,
}

/// Options shared by the solver entry points.
#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub limits: LatticeLimits,
    /// Bits used when representing irrational eps-star values as rationals.
    pub precision_bits: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { limits: LatticeLimits::default(), precision_bits: 64 }
    }
}

/// Axis faces |a_j| <= H^eta_j (and |b_i| <= H^eta_{m+i} without infinity),
/// plus strict residual faces at infinity when present.
fn homogeneous_box(
    alpha: &SMatrix,
    h: &Rational,
    w: &Weights,
    s: &PlaceSet,
) -> Result<WeightedBox> {
    let (m, n) = (alpha.m, alpha.n);
    let d = m + n;
    let mut faces = Vec::with_capacity(d);
    for j in 0..m {
        let mut form = vec![Real::zero(); d];
        form[j] = Real::one();
        faces.push(BoxFace {
            form,
            radius: Magnitude::power_of_rational(h, w.eta_at(j)?)?,
            strict: false,
        });
    }
    if s.has_infinity() {
        let alpha_inf = alpha.real_at_infinity()?;
        for i in 0..n {
            let mut form = vec![Real::zero(); d];
            for (j, row) in alpha_inf.iter().enumerate() {
                form[j] = row[i].clone();
            }
            form[m + i] = Real::from_int(-1);
            faces.push(BoxFace {
                form,
                radius: Magnitude::power_of_rational(
                    h,
                    &-w.tau_at(i, &Place::Infinity)?.clone(),
                )?,
                strict: true,
            });
        }
    } else {
        for i in 0..n {
            let mut form = vec![Real::zero(); d];
            form[m + i] = Real::one();
            faces.push(BoxFace {
                form,
                radius: Magnitude::power_of_rational(h, w.eta_at(m + i)?)?,
                strict: false,
            });
        }
    }
    WeightedBox::new(faces)
}

/// The eta-normed sub-vector: all of (a,b) without infinity, a alone with it.
fn eta_slice<'v>(v: &'v [Int], m: usize, s: &PlaceSet) -> &'v [Int] {
    if s.has_infinity() {
        &v[..m]
    } else {
        v
    }
}

/// Deterministic selection order: smaller eta-norm first, then larger
/// leading absolute values (so unit vectors order e_1 before e_2), then the
/// sign representative whose first differing coordinate is positive.
fn preferred(v: &[Int], best: &[Int], m: usize, w: &Weights, s: &PlaceSet) -> Result<bool> {
    let nv = eta_norm(eta_slice(v, m, s), w)?;
    let nb = eta_norm(eta_slice(best, m, s), w)?;
    match nv.try_cmp(&nb)? {
        core::cmp::Ordering::Less => return Ok(true),
        core::cmp::Ordering::Greater => return Ok(false),
        core::cmp::Ordering::Equal => {}
    }
    for (x, y) in v.iter().zip(best) {
        match x.abs().cmp(&y.abs()) {
            core::cmp::Ordering::Greater => return Ok(true),
            core::cmp::Ordering::Less => return Ok(false),
            core::cmp::Ordering::Equal => {}
        }
    }
    for (x, y) in v.iter().zip(best) {
        if x != y {
            return Ok(x > y);
        }
    }
    Ok(false)
}

/// Solves the homogeneous system at height H; the returned pair has been
/// re-verified through the norm layer, independent of the search path.
pub fn solve_homogeneous(
    alpha: &SMatrix,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
    opts: &SolverOptions,
) -> Result<DirichletSolution> {
    w.validate_or_err(s)?;
    if !h.is_positive() {
        return Err(Error::validation("H must be a positive integer"));
    }
    if alpha.m != w.m || alpha.n != w.n {
        return Err(Error::validation("matrix shape does not match the weight system"));
    }
    if !alpha.is_finite_place_integral()? {
        return Err(Error::validation(
            "matrix entries must be integral at every finite place",
        ));
    }
    let lattice = dirichlet_lattice(alpha, h, w, s)?;
    let h_rat = Rational::from(h.clone());
    let bx = homogeneous_box(alpha, &h_rat, w, s)?;
    let found = enumerate_box(&lattice, &bx, &opts.limits)?;
    let mut best: Option<Vec<Int>> = None;
    for p in &found.points {
        match &best {
            None => best = Some(p.clone()),
            Some(b) => {
                if preferred(p, b, alpha.m, w, s)? {
                    best = Some(p.clone());
                }
            }
        }
    }
    let Some(v) = best else {
        return Err(Error::internal(
            "homogeneous system came back empty; the theorem guarantees a solution",
        ));
    };
    let (a, b) = v.split_at(alpha.m);
    build_solution(alpha, a, b, h, w, s)
}

/// Assembles the verified solution record for a candidate pair.
pub fn build_solution(
    alpha: &SMatrix,
    a: &[Int],
    b: &[Int],
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
) -> Result<DirichletSolution> {
    let h_rat = Rational::from(h.clone());
    let (residual_norms, bound_checks) = verify_inequalities(alpha, a, b, &h_rat, w, s)?;
    let threshold = a_nonzero_threshold(w, s)?;
    let sol = DirichletSolution {
        a: a.to_vec(),
        b: b.to_vec(),
        h: h.clone(),
        residual_norms,
        bound_checks,
        a_nonzero_threshold: threshold.clone(),
    };
    if !sol.all_checks_hold() {
        return Err(Error::internal("solver output failed independent re-verification"));
    }
    if sol.a_is_zero() && sol.b.iter().all(|x| x.is_zero()) {
        return Err(Error::internal("solver returned the zero vector"));
    }
    if let Some(t) = &threshold {
        if t.cmp_rational(&h_rat)? == core::cmp::Ordering::Less && sol.a_is_zero() {
            return Err(Error::internal("a = 0 above the forced-nonzero threshold"));
        }
    }
    Ok(sol)
}

/// Residual norms at every (i, place) plus one named check per inequality.
pub fn verify_inequalities(
    alpha: &SMatrix,
    a: &[Int],
    b: &[Int],
    h: &Rational,
    w: &Weights,
    s: &PlaceSet,
) -> Result<(Vec<ResidualNorm>, Vec<BoundCheck>)> {
    let (m, n) = (alpha.m, alpha.n);
    let mut norms = Vec::new();
    let mut checks = Vec::new();
    for nu in s.iter() {
        for i in 0..n {
            let norm = residual_place_norm(alpha, a, b, i, nu)?;
            let tau = w.tau_at(i, nu)?;
            let (bound, strict, label) = if nu.is_finite() {
                let p = Rational::from(Int::from(nu.prime().unwrap()));
                let bound = Magnitude::power_of_rational(h, &-tau.clone())?
                    .mul(&Magnitude::from_rational_abs(&p));
                (bound, false, format!("residual[{i}]@{nu} <= {nu}*H^-tau"))
            } else {
                (
                    Magnitude::power_of_rational(h, &-tau.clone())?,
                    true,
                    format!("residual[{i}]@inf < H^-tau"),
                )
            };
            let ord = norm.try_cmp(&bound)?;
            let holds = if strict {
                ord == core::cmp::Ordering::Less
            } else {
                ord != core::cmp::Ordering::Greater
            };
            norms.push(ResidualNorm { i, place: *nu, norm });
            checks.push(BoundCheck { name: label, holds });
        }
    }
    for (j, aj) in a.iter().enumerate() {
        let bound = Magnitude::power_of_rational(h, w.eta_at(j)?)?;
        let holds = Magnitude::from_rational_abs(&Rational::from(aj.clone()))
            .try_cmp(&bound)?
            != core::cmp::Ordering::Greater;
        checks.push(BoundCheck { name: format!("|a_{j}| <= H^eta"), holds });
    }
    if !s.has_infinity() {
        for (i, bi) in b.iter().enumerate() {
            let bound = Magnitude::power_of_rational(h, w.eta_at(m + i)?)?;
            let holds = Magnitude::from_rational_abs(&Rational::from(bi.clone()))
                .try_cmp(&bound)?
                != core::cmp::Ordering::Greater;
            checks.push(BoundCheck { name: format!("|b_{i}| <= H^eta"), holds });
        }
    }
    Ok((norms, checks))
}

/// |(a alpha - b)_i|_nu as an exact magnitude.
pub fn residual_place_norm(
    alpha: &SMatrix,
    a: &[Int],
    b: &[Int],
    i: usize,
    nu: &Place,
) -> Result<Magnitude> {
    if nu.is_finite() {
        let alpha_nu = alpha.rational_at(nu)?;
        let mut res = -Rational::from(b[i].clone());
        for (j, aj) in a.iter().enumerate() {
            res += &alpha_nu[j][i] * Rational::from(aj.clone());
        }
        Ok(Magnitude::from_real_abs(&place_norm(&SValue::Rat(res), nu)?))
    } else {
        let alpha_inf = alpha.real_at_infinity()?;
        let mut res = Real::Rat(-Rational::from(b[i].clone()));
        for (j, aj) in a.iter().enumerate() {
            res = res.add(&alpha_inf[j][i].mul_rational(&Rational::from(aj.clone())))?;
        }
        Ok(Magnitude::from_real_abs(&res))
    }
}

/// The height above which any solution of the system has a != 0: always 1
/// with infinity in S; otherwise max_i (prod nu)^(1/(sum_nu tau_{i,nu} - eta_{m+i}))
/// provided the exponent gap is positive for every i.
fn a_nonzero_threshold(w: &Weights, s: &PlaceSet) -> Result<Option<Magnitude>> {
    if s.has_infinity() {
        return Ok(Some(Magnitude::one()));
    }
    let prod_rat = Rational::from(s.finite_prime_product());
    let mut best: Option<Magnitude> = None;
    for i in 0..w.n {
        let mut tau_sum = Rational::zero();
        for nu in s.iter() {
            tau_sum += w.tau_at(i, nu)?;
        }
        let gap = &tau_sum - w.eta_at(w.m + i)?;
        if !gap.is_positive() {
            return Ok(None);
        }
        let t = Magnitude::power_of_rational(&prod_rat, &gap.recip())?;
        best = Some(match best {
            None => t,
            Some(b) => b.max(&t)?,
        });
    }
    Ok(best)
}

/// eps*(H): the least eps such that the tightened singular system has a
/// nonzero solution at height H.
pub fn epsilon_star(
    alpha: &SMatrix,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
    opts: &SolverOptions,
) -> Result<EpsilonStar> {
    w.validate_or_err(s)?;
    if !h.is_positive() {
        return Err(Error::validation("H must be a positive integer"));
    }
    if !alpha.is_finite_place_integral()? {
        return Err(Error::validation(
            "matrix entries must be integral at every finite place",
        ));
    }
    let (exact, witness) = if s.has_infinity() {
        eps_star_with_infinity(alpha, h, w, s)?
    } else {
        eps_star_finite_only(alpha, h, w, s, opts)?
    };
    let (rational, attained) = match exact.as_exact_rational() {
        Some(r) => (r, true),
        None => (exact.to_interval(opts.precision_bits).hi.to_rational(), false),
    };
    Ok(EpsilonStar { exact, rational, attained, witness })
}

/// Infinity present: b is unconstrained by the eta side, so scan a over the
/// eta-box and optimise each b_i along the window around the real centre.
fn eps_star_with_infinity(
    alpha: &SMatrix,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
) -> Result<(Magnitude, Option<(Vec<Int>, Vec<Int>)>)> {
    let (m, n) = (alpha.m, alpha.n);
    let h_rat = Rational::from(h.clone());
    let h_mag = Magnitude::from_rational_abs(&h_rat);
    // a = 0 forces b != 0 with tau-seminorm exactly 1, giving eps = H.
    let mut best = h_mag.clone();
    let mut best_pair: Option<(Vec<Int>, Vec<Int>)> = None;
    let alpha_inf = alpha.real_at_infinity()?;
    let finite_places: Vec<Place> = s.finite().cloned().collect();
    let mut alpha_fin: Vec<Vec<Vec<Rational>>> = Vec::new();
    for nu in &finite_places {
        alpha_fin.push(alpha.rational_at(nu)?);
    }
    let mut ranges = Vec::with_capacity(m);
    for j in 0..m {
        ranges.push(Magnitude::power_of_rational(&h_rat, w.eta_at(j)?)?.floor()?);
    }
    let mut a: Vec<Int> = ranges.iter().map(|r| -r.clone()).collect();
    loop {
        if !a.iter().all(|x| x.is_zero()) {
            let mut value = Magnitude::zero();
            let mut b_opt = vec![Int::zero(); n];
            let mut pruned = false;
            for i in 0..n {
                let (bi, gi) =
                    best_b_component(&alpha_inf, &alpha_fin, &finite_places, &a, i, w)?;
                b_opt[i] = bi;
                value = value.max(&gi)?;
                if value.mul(&h_mag).try_cmp(&best)? != core::cmp::Ordering::Less {
                    pruned = true;
                    break;
                }
            }
            if !pruned {
                let eps = value.mul(&h_mag);
                if eps.try_cmp(&best)? == core::cmp::Ordering::Less {
                    best = eps;
                    best_pair = Some((a.clone(), b_opt));
                    if best.is_zero() {
                        return Ok((best, best_pair));
                    }
                }
            }
        }
        // Odometer step over the a-box.
        let mut idx = m;
        let mut done = false;
        loop {
            if idx == 0 {
                done = true;
                break;
            }
            idx -= 1;
            if a[idx] < ranges[idx] {
                a[idx] += 1;
                for j in (idx + 1)..m {
                    a[j] = -ranges[j].clone();
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    Ok((best, best_pair))
}

/// Minimises g_i(t) = max_nu |(a alpha)_i - t|_nu^(1/tau_{i,nu}) over t in Z.
fn best_b_component(
    alpha_inf: &[Vec<Real>],
    alpha_fin: &[Vec<Vec<Rational>>],
    finite_places: &[Place],
    a: &[Int],
    i: usize,
    w: &Weights,
) -> Result<(Int, Magnitude)> {
    let mut center = Real::zero();
    for (j, aj) in a.iter().enumerate() {
        center = center.add(&alpha_inf[j][i].mul_rational(&Rational::from(aj.clone())))?;
    }
    let mut fin_targets = Vec::with_capacity(finite_places.len());
    for mat in alpha_fin {
        let mut t = Rational::zero();
        for (j, aj) in a.iter().enumerate() {
            t += &mat[j][i] * Rational::from(aj.clone());
        }
        fin_targets.push(t);
    }
    let tau_inf = w.tau_at(i, &Place::Infinity)?;
    let eval = |t: &Int| -> Result<Magnitude> {
        let t_rat = Rational::from(t.clone());
        let mut g = Magnitude::from_real_abs(&center.sub(&Real::Rat(t_rat.clone()))?)
            .pow(&tau_inf.recip())?;
        for (k, nu) in finite_places.iter().enumerate() {
            let res = &fin_targets[k] - &t_rat;
            let norm = Magnitude::from_real_abs(&place_norm(&SValue::Rat(res), nu)?);
            g = g.max(&norm.pow(&w.tau_at(i, nu)?.recip())?)?;
        }
        Ok(g)
    };
    let t0 = center.round_nearest();
    let mut best_t = t0.clone();
    let mut best_g = eval(&t0)?;
    // Scan outward; a direction ends once its archimedean part alone
    // reaches the best (it grows monotonically with |t - center|).
    for dir in [1i64, -1] {
        let mut t = &t0 + dir;
        loop {
            let arch =
                Magnitude::from_real_abs(&center.sub(&Real::Rat(Rational::from(t.clone())))?)
                    .pow(&tau_inf.recip())?;
            if arch.try_cmp(&best_g)? != core::cmp::Ordering::Less {
                break;
            }
            let g = eval(&t)?;
            if g.try_cmp(&best_g)? == core::cmp::Ordering::Less {
                best_g = g;
                best_t = t.clone();
            }
            t += dir;
        }
    }
    Ok((best_t, best_g))
}

/// No archimedean place: attainable tau-seminorm values form a discrete
/// grid of prime-power roots, so the infimum is located by binary search
/// over thresholds, each tested with one lattice enumeration.
fn eps_star_finite_only(
    alpha: &SMatrix,
    h: &Int,
    w: &Weights,
    s: &PlaceSet,
    opts: &SolverOptions,
) -> Result<(Magnitude, Option<(Vec<Int>, Vec<Int>)>)> {
    let (m, n) = (alpha.m, alpha.n);
    let d = m + n;
    let h_rat = Rational::from(h.clone());
    let mut radii = Vec::with_capacity(d);
    for l in 0..d {
        radii.push((Magnitude::power_of_rational(&h_rat, w.eta_at(l)?)?, false));
    }
    let bx = WeightedBox::axis(radii)?;
    // Valuation caps per (i, nu): nonzero residuals over the box cannot
    // exceed them, so nu^-(cap+1) forces an exact zero.
    let mut caps = alloc::collections::BTreeMap::new();
    let mut grid: Vec<Magnitude> = Vec::new();
    for nu in s.finite() {
        let p = nu.prime().unwrap();
        for i in 0..n {
            let kmax = max_residual_valuation(alpha, &h_rat, w, nu, i)?;
            caps.insert((i, *nu), kmax);
            let tau = w.tau_at(i, nu)?;
            for k in 0..=kmax {
                let norm = Rational::new(Int::one(), Int::from(p).pow(k));
                grid.push(Magnitude::from_rational_abs(&norm).pow(&tau.recip())?);
            }
        }
    }
    sort_magnitudes(&mut grid)?;
    grid.dedup_by(|x, y| matches!(x.try_cmp(y), Ok(core::cmp::Ordering::Equal)));

    let test = |value: Option<&Magnitude>| -> Result<Option<Vec<Int>>> {
        let bound_for = |i: usize, nu: &Place| -> Result<Magnitude> {
            match value {
                Some(vm) => vm.pow(w.tau_at(i, nu)?),
                None => {
                    let kmax = caps[&(i, *nu)];
                    let tiny = Rational::new(
                        Int::one(),
                        Int::from(nu.prime().unwrap()).pow(kmax + 1),
                    );
                    Magnitude::from_positive_rational(&tiny)
                }
            }
        };
        let sys = residual_system(alpha, s, &bound_for, false, DivisibilityMode::None)?;
        let lat = congruences_to_lattice(&sys, d)?;
        let out = enumerate_box(&lat, &bx, &opts.limits)?;
        Ok(out.points.into_iter().next())
    };

    if let Some(v) = test(None)? {
        let (a, b) = v.split_at(m);
        return Ok((Magnitude::zero(), Some((a.to_vec(), b.to_vec()))));
    }
    let mut lo = 0usize;
    let mut hi = grid.len();
    let mut witness: Option<Vec<Int>> = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match test(Some(&grid[mid]))? {
            Some(v) => {
                witness = Some(v);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if lo >= grid.len() {
        return Err(Error::internal("epsilon-star threshold search found no solvable level"));
    }
    let eps = grid[lo].mul(&Magnitude::from_rational_abs(&h_rat));
    let pair = witness.map(|v| {
        let (a, b) = v.split_at(m);
        (a.to_vec(), b.to_vec())
    });
    Ok((eps, pair))
}

/// Sound upper bound on v_nu of a nonzero residual (a alpha - b)_i over the
/// eta-box at height H: if |res| <= R and D clears the denominators, then
/// v_nu(res) <= log_nu(R * D).
fn max_residual_valuation(
    alpha: &SMatrix,
    h: &Rational,
    w: &Weights,
    nu: &Place,
    i: usize,
) -> Result<u32> {
    let m = alpha.m;
    let alpha_nu = alpha.rational_at(nu)?;
    let mut denom = Int::one();
    let mut r_bound = Rational::zero();
    for j in 0..m {
        denom = num_integer::Integer::lcm(&denom, alpha_nu[j][i].denom());
        let radius = Magnitude::power_of_rational(h, w.eta_at(j)?)?.floor()?;
        r_bound += alpha_nu[j][i].abs() * Rational::from(radius);
    }
    r_bound += Rational::from(Magnitude::power_of_rational(h, w.eta_at(m + i)?)?.floor()?);
    let scaled = r_bound * Rational::from(denom);
    let p = Rational::from(Int::from(nu.prime().unwrap()));
    let mut k = 0u32;
    let mut pk = Rational::one();
    while pk <= scaled {
        pk *= &p;
        k += 1;
        if k > 1_000_000 {
            return Err(Error::ResourceCap("valuation bound overflow".into()));
        }
    }
    Ok(k)
}

fn sort_magnitudes(items: &mut Vec<Magnitude>) -> Result<()> {
    let n = items.len();
    if n <= 1 {
        return Ok(());
    }
    let mut right = items.split_off(n / 2);
    sort_magnitudes(items)?;
    sort_magnitudes(&mut right)?;
    let mut merged = Vec::with_capacity(n);
    let mut a = items.drain(..).peekable();
    let mut b = right.into_iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => {
                if x.try_cmp(y)? != core::cmp::Ordering::Greater {
                    merged.push(a.next().unwrap());
                } else {
                    merged.push(b.next().unwrap());
                }
            }
            (Some(_), None) => merged.push(a.next().unwrap()),
            (None, Some(_)) => merged.push(b.next().unwrap()),
            (None, None) => break,
        }
    }
    drop(a);
    *items = merged;
    Ok(())
}

/// Profiles eps*(H) over an increasing grid and classifies the evidence.
///
/// The verdict is evidence, not proof: `NonSingularEvidence` means every
/// dyadic band met by the upper half of the grid contains a height with
/// eps*(H) >= threshold.
pub fn singularity_scan(
    alpha: &SMatrix,
    h_grid: &[Int],
    threshold: &Rational,
    w: &Weights,
    s: &PlaceSet,
    opts: &SolverOptions,
) -> Result<SingularityVerdict> {
    if h_grid.is_empty() {
        return Err(Error::validation("height grid must be non-empty"));
    }
    if h_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::validation("height grid must be strictly increasing"));
    }
    let mut profile = Vec::with_capacity(h_grid.len());
    let mut witness_heights = Vec::new();
    for h in h_grid {
        let eps = epsilon_star(alpha, h, w, s, opts)?;
        if eps.exact.cmp_rational(threshold)? != core::cmp::Ordering::Less {
            witness_heights.push(h.clone());
        }
        profile.push(ProfilePoint {
            h: h.clone(),
            eps_star: eps.rational,
            attained: eps.attained,
            eps_exact: eps.exact,
        });
    }
    let half = h_grid.len() / 2;
    let mut bands: alloc::collections::BTreeMap<u64, bool> = alloc::collections::BTreeMap::new();
    for (idx, h) in h_grid.iter().enumerate().skip(half) {
        let band = h.bits().saturating_sub(1);
        let above =
            profile[idx].eps_exact.cmp_rational(threshold)? != core::cmp::Ordering::Less;
        let e = bands.entry(band).or_insert(false);
        *e = *e || above;
    }
    let non_singular = !bands.is_empty() && bands.values().all(|&ok| ok);
    Ok(SingularityVerdict {
        profile,
        classification: if non_singular {
            Classification::NonSingularEvidence
        } else {
            Classification::SingularEvidence
        },
        witness_heights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rational_from_i64, SNumber};
    use alloc::collections::BTreeMap;

    fn rat(n: i64, d: i64) -> Rational {
        rational_from_i64(n, d)
    }

    fn phi() -> Real {
        Real::Rat(rat(1, 2))
            .add(
                &Real::sqrt_rational(&rat(5, 1))
                    .unwrap()
                    .mul_rational(&rat(1, 2)),
            )
            .unwrap()
    }

    fn real_matrix_1x1(x: Real, s: &PlaceSet) -> SMatrix {
        let _ = s;
        SMatrix::new(1, 1, vec![vec![SNumber::real_only(x)]]).unwrap()
    }

    #[test]
    fn golden_ratio_height_five() {
        // m=n=1, S={inf}, tau=eta=1, alpha=phi, H=5: brute force over
        // 1 <= a <= 5 with nearest b gives (3,5), |3 phi - 5| < 1/5.
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let alpha = real_matrix_1x1(phi(), &s);
        let sol =
            solve_homogeneous(&alpha, &Int::from(5), &w, &s, &SolverOptions::default()).unwrap();
        assert_eq!(sol.a, vec![Int::from(3)]);
        assert_eq!(sol.b, vec![Int::from(5)]);
        assert!(sol.all_checks_hold());
        // Residual approx 0.1459 < 1/5.
        let r = &sol.residual_norms.last().unwrap().norm;
        assert_eq!(r.cmp_rational(&rat(1, 5)).unwrap(), core::cmp::Ordering::Less);
        assert_eq!(r.cmp_rational(&rat(14, 100)).unwrap(), core::cmp::Ordering::Greater);
    }

    #[test]
    fn zero_matrix_canonical_solution() {
        let s = PlaceSet::real_only();
        let w = Weights::balanced(2, 1, &s);
        let alpha = SMatrix::new(
            2,
            1,
            vec![
                vec![SNumber::constant(&s, rat(0, 1))],
                vec![SNumber::constant(&s, rat(0, 1))],
            ],
        )
        .unwrap();
        let sol =
            solve_homogeneous(&alpha, &Int::from(7), &w, &s, &SolverOptions::default()).unwrap();
        assert_eq!(sol.a, vec![Int::from(1), Int::from(0)]);
        assert_eq!(sol.b, vec![Int::from(0)]);
        assert!(sol.residual_norms.iter().all(|r| r.norm.is_zero()));
    }

    #[test]
    fn s_adic_example() {
        // m=n=1, S={2}, tau=2, eta=(1,1), alpha=1/3, H=3: (3,1) solves with
        // residual 0 (a alpha - b = 0).
        let s = PlaceSet::parse("2").unwrap();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Finite(2)), rat(2, 1));
        let w = Weights::new(1, 1, tau, vec![rat(1, 1), rat(1, 1)]);
        let alpha = SMatrix::constant(&s, vec![vec![rat(1, 3)]]).unwrap();
        let sol =
            solve_homogeneous(&alpha, &Int::from(3), &w, &s, &SolverOptions::default()).unwrap();
        assert!(sol.all_checks_hold());
        // Brute-force oracle: the full solution set within the box.
        let mut brute = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                if (a, b) == (0, 0) {
                    continue;
                }
                // |a/3 - b|_2 <= 2 * 3^-2 = 2/9 means v_2(a - 3b) >= 3.
                let num = a - 3 * b;
                let ok = num == 0 || (num % 8 == 0);
                if ok {
                    brute.push((a, b));
                }
            }
        }
        assert!(brute.contains(&(3, 1)));
        let got = (
            i64::try_from(&sol.a[0]).unwrap(),
            i64::try_from(&sol.b[0]).unwrap(),
        );
        assert!(brute.contains(&got));
    }

    #[test]
    fn eps_star_rational_alpha_vanishes() {
        // alpha = 1/2, tau = eta = 1: eps*(H) = 0 for H >= 2 via (2, 1).
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let alpha = real_matrix_1x1(Real::Rat(rat(1, 2)), &s);
        for h in [2i64, 3, 10] {
            let e = epsilon_star(&alpha, &Int::from(h), &w, &s, &SolverOptions::default())
                .unwrap();
            assert!(e.exact.is_zero(), "H = {h}");
            assert!(e.attained);
            assert_eq!(e.rational, rat(0, 1));
        }
        // H = 1: only |a| <= 1, so the best is |phi... | the residual of
        // (1, b): min_b |1/2 - b| = 1/2, eps = 1 * 1/2.
        let e1 = epsilon_star(&alpha, &Int::from(1), &w, &s, &SolverOptions::default()).unwrap();
        assert_eq!(e1.exact.as_exact_rational(), Some(rat(1, 2)));
    }

    #[test]
    fn eps_star_fibonacci_matches_identity() {
        // eps*(F_k) = F_k * |F_k phi - F_{k+1}| = F_k / phi^k, computed here
        // against the 128-bit interval oracle for phi.
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let alpha = real_matrix_1x1(phi(), &s);
        let (mut f0, mut f1) = (1i64, 1i64); // F_1, F_2
        for _ in 0..8 {
            let t = f0 + f1;
            f0 = f1;
            f1 = t;
        }
        // f0 = F_9 = 34, f1 = F_10 = 55.
        assert_eq!((f0, f1), (34, 55));
        let e = epsilon_star(&alpha, &Int::from(f0), &w, &s, &SolverOptions::default()).unwrap();
        // Oracle: 34 * |34 phi - 55| via the interval enclosure of phi.
        let phi_iv = phi().to_interval(128);
        let lo = phi_iv.lo.to_rational() * rat(34, 1) - rat(55, 1);
        let hi = phi_iv.hi.to_rational() * rat(34, 1) - rat(55, 1);
        // 34 phi - 55 is negative; |.| in [|hi|, |lo|].
        let abs_lo = hi.abs() * rat(34, 1);
        let abs_hi = lo.abs() * rat(34, 1);
        assert_eq!(e.exact.cmp_rational(&abs_lo).unwrap(), core::cmp::Ordering::Greater);
        assert_eq!(e.exact.cmp_rational(&abs_hi).unwrap(), core::cmp::Ordering::Less);
        // Near 1/sqrt(5) = 0.4472...
        assert_eq!(e.exact.cmp_rational(&rat(44, 100)).unwrap(), core::cmp::Ordering::Greater);
        assert_eq!(e.exact.cmp_rational(&rat(45, 100)).unwrap(), core::cmp::Ordering::Less);
        assert!(!e.attained);
        let witness = e.witness.unwrap();
        assert_eq!(witness.0, vec![Int::from(34)]);
        assert_eq!(witness.1, vec![Int::from(55)]);
    }

    #[test]
    fn eps_star_finite_only_discrete() {
        // S = {2}, alpha = 1/3, tau = 2, eta = (1,1): at H = 3 the best
        // residual is 0 via (3, 1) inside the box.
        let s = PlaceSet::parse("2").unwrap();
        let mut tau = BTreeMap::new();
        tau.insert((0usize, Place::Finite(2)), rat(2, 1));
        let w = Weights::new(1, 1, tau, vec![rat(1, 1), rat(1, 1)]);
        let alpha = SMatrix::constant(&s, vec![vec![rat(1, 3)]]).unwrap();
        let e = epsilon_star(&alpha, &Int::from(3), &w, &s, &SolverOptions::default()).unwrap();
        assert!(e.exact.is_zero());
        // At H = 2 the box has no zero-residual point ((3,1) is outside),
        // so eps* is a positive discrete value: min over candidates of
        // H * |a/3 - b|_2^(1/2).
        let e2 = epsilon_star(&alpha, &Int::from(2), &w, &s, &SolverOptions::default()).unwrap();
        assert!(!e2.exact.is_zero());
        // Oracle: brute force over |a|,|b| <= 2.
        let mut best: Option<Magnitude> = None;
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let res = rat(a, 3) - rat(b, 1);
                let norm = Magnitude::from_real_abs(
                    &place_norm(&SValue::Rat(res), &Place::Finite(2)).unwrap(),
                );
                let g = norm.pow(&rat(1, 2)).unwrap().mul(&Magnitude::from_rational_abs(&rat(2, 1)));
                best = Some(match best {
                    None => g,
                    Some(cur) => {
                        if g.try_cmp(&cur).unwrap() == core::cmp::Ordering::Less {
                            g
                        } else {
                            cur
                        }
                    }
                });
            }
        }
        assert_eq!(
            e2.exact.try_cmp(&best.unwrap()).unwrap(),
            core::cmp::Ordering::Equal
        );
    }

    #[test]
    fn scan_classifies_rational_and_phi() {
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let opts = SolverOptions::default();
        // Rational alpha = 1/2: singular evidence, eps* = 0 beyond H = 2.
        let alpha_rat = real_matrix_1x1(Real::Rat(rat(1, 2)), &s);
        let grid: Vec<Int> = (1..=7).map(|k| Int::from(1i64 << k)).collect();
        let v = singularity_scan(&alpha_rat, &grid, &rat(1, 10), &w, &s, &opts).unwrap();
        assert_eq!(v.classification, Classification::SingularEvidence);
        assert!(v.profile.iter().skip(1).all(|p| p.eps_exact.is_zero()));
        // phi: non-singular evidence at threshold 0.2.
        let alpha_phi = real_matrix_1x1(phi(), &s);
        let v2 = singularity_scan(&alpha_phi, &grid, &rat(1, 5), &w, &s, &opts).unwrap();
        assert_eq!(v2.classification, Classification::NonSingularEvidence);
        assert_eq!(v2.witness_heights.len(), grid.len());
    }

    #[test]
    fn liouville_profile_dips() {
        // alpha = 1/10 + 1/100 + 1/10^6 (truncated Liouville-style sum):
        // at H = 100 the convergent 11/100 gives residual 10^-6 * 100, so
        // eps*(100) <= 100 * 10^-4 = 0.01.
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let alpha = real_matrix_1x1(
            Real::Rat(rat(110001, 1000000)),
            &s,
        );
        let e = epsilon_star(&alpha, &Int::from(100), &w, &s, &SolverOptions::default()).unwrap();
        assert_eq!(e.exact.cmp_rational(&rat(1, 100)).unwrap(), core::cmp::Ordering::Less);
        // While at H = 8 it is still large-ish (> 0.05).
        let e8 = epsilon_star(&alpha, &Int::from(8), &w, &s, &SolverOptions::default()).unwrap();
        assert_eq!(e8.exact.cmp_rational(&rat(5, 100)).unwrap(), core::cmp::Ordering::Greater);
    }

    #[test]
    fn monotone_envelope_property() {
        // eps*(H) <= eps*(H') * H/H' whenever H >= H' (candidate sets nest).
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        let alpha = real_matrix_1x1(phi(), &s);
        let opts = SolverOptions::default();
        let heights = [3i64, 5, 8, 13, 21];
        let eps: Vec<Magnitude> = heights
            .iter()
            .map(|&h| epsilon_star(&alpha, &Int::from(h), &w, &s, &opts).unwrap().exact)
            .collect();
        for i in 0..heights.len() {
            for j in 0..i {
                // H = heights[i] >= H' = heights[j]
                let scale = rat(heights[i], heights[j]);
                let bound = eps[j].mul(&Magnitude::from_rational_abs(&scale));
                assert!(
                    eps[i].try_cmp(&bound).unwrap() != core::cmp::Ordering::Greater,
                    "envelope violated at H={}, H'={}",
                    heights[i],
                    heights[j]
                );
            }
        }
    }

    #[test]
    fn exhaustive_agreement_small() {
        // For small H, the solver's answer lies in the brute-force feasible
        // set and the solver finds a solution iff brute force does.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let s = PlaceSet::real_only();
        let w = Weights::balanced(1, 1, &s);
        for _ in 0..20 {
            let num = rng.gen_range(-20i64..=20);
            let den = rng.gen_range(1i64..=20);
            let alpha = real_matrix_1x1(Real::Rat(rat(num, den)), &s);
            let h = rng.gen_range(1i64..=12);
            let sol =
                solve_homogeneous(&alpha, &Int::from(h), &w, &s, &SolverOptions::default())
                    .unwrap();
            // brute force: a in [-h, h], b nearest.
            let mut feasible = Vec::new();
            for a in -h..=h {
                for b in -(20 * h)..=(20 * h) {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    // |a alpha - b| < 1/h and |a| <= h
                    let lhs = (rat(num, den) * rat(a, 1) - rat(b, 1)).abs();
                    if lhs < rat(1, h) {
                        feasible.push((a, b));
                    }
                }
            }
            assert!(!feasible.is_empty());
            let got = (
                i64::try_from(&sol.a[0]).unwrap(),
                i64::try_from(&sol.b[0]).unwrap(),
            );
            assert!(feasible.contains(&got), "solver output not in feasible set");
        }
    }
}
