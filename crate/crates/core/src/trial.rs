//! Trial functions φ composed with windowed maxima, and numerical checks of
//! their class membership.
//!
//! Class `KB` asks for positivity, strict monotonicity on the right half-line,
//! continuity, evenness and boundedness (conditions A–E); class `K` drops
//! boundedness. Membership cannot be certified numerically, so the declared
//! class drives dispatch and [`validate_class`] is a diagnostic.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialClass {
    /// Conditions A–E (bounded).
    KB,
    /// Conditions A–D.
    K,
}

type PhiFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct TrialFunction {
    name: String,
    eval: Arc<PhiFn>,
    class: TrialClass,
    young_orlicz: bool,
    bound: Option<f64>,
}

impl fmt::Debug for TrialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrialFunction")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("young_orlicz", &self.young_orlicz)
            .field("bound", &self.bound)
            .finish()
    }
}

impl TrialFunction {
    pub fn custom<F>(name: impl Into<String>, class: TrialClass, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
            class,
            young_orlicz: false,
            bound: None,
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_young_orlicz(mut self, yes: bool) -> Self {
        self.young_orlicz = yes;
        self
    }

    /// φ(x) = arctan|x|, the default trial function.
    pub fn arctan() -> Self {
        Self::custom("arctan", TrialClass::KB, |x: f64| x.abs().atan())
            .with_bound(std::f64::consts::FRAC_PI_2)
    }

    /// φ(x) = |x| / (1 + |x|).
    pub fn ratio1() -> Self {
        Self::custom("ratio1", TrialClass::KB, |x: f64| {
            let a = x.abs();
            a / (1.0 + a)
        })
        .with_bound(1.0)
    }

    /// φ(x) = x² / (1 + x²).
    pub fn ratio2() -> Self {
        Self::custom("ratio2", TrialClass::KB, |x: f64| {
            let s = x * x;
            if s.is_infinite() {
                1.0
            } else {
                s / (1.0 + s)
            }
        })
        .with_bound(1.0)
    }

    /// φ(x) = |x|^p, class K; a Young function for p ≥ 1.
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::config("phi", format!("power exponent must be > 0, got {p}")));
        }
        Ok(
            Self::custom(format!("power:{p}"), TrialClass::K, move |x: f64| x.abs().powf(p))
                .with_young_orlicz(p >= 1.0),
        )
    }

    /// φ(x) = e^|x| − 1, a Young function without the Δ₂ property.
    pub fn exp_minus_one() -> Self {
        Self::custom("expm1", TrialClass::K, |x: f64| x.abs().exp_m1()).with_young_orlicz(true)
    }

    /// Parses `arctan | ratio1 | ratio2 | power:p | expm1`.
    pub fn parse(selector: &str) -> Result<Self> {
        let s = selector.trim();
        match s {
            "arctan" => Ok(Self::arctan()),
            "ratio1" => Ok(Self::ratio1()),
            "ratio2" => Ok(Self::ratio2()),
            "expm1" => Ok(Self::exp_minus_one()),
            _ => match s.strip_prefix("power:") {
                Some(p) => {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| Error::config("phi", format!("bad exponent in `{s}`")))?;
                    Self::power(p)
                }
                None => Err(Error::config(
                    "phi",
                    format!("unknown trial function `{s}` (arctan|ratio1|ratio2|power:p|expm1)"),
                )),
            },
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> TrialClass {
        self.class
    }

    pub fn is_young_orlicz(&self) -> bool {
        self.young_orlicz
    }

    pub fn declared_bound(&self) -> Option<f64> {
        self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub passed: bool,
    pub worst_violation: f64,
}

impl ConditionResult {
    fn from_violation(worst: f64, tol: f64) -> Self {
        Self {
            passed: worst <= tol,
            worst_violation: worst,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessResult {
    pub passed: bool,
    pub empirical_max: f64,
    pub declared_bound: Option<f64>,
    /// φ(x_max) / φ(x_max / 100) − 1, the growth over the last two decades.
    pub growth: f64,
    pub growth_detected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassValidationReport {
    pub phi: String,
    pub declared_class: TrialClass,
    pub grid_points: usize,
    pub grid_min: f64,
    pub grid_max: f64,
    pub positivity: ConditionResult,
    pub monotonicity: ConditionResult,
    pub continuity: ConditionResult,
    pub evenness: ConditionResult,
    pub boundedness: BoundednessResult,
    pub passed: bool,
}

pub const DEFAULT_CONTINUITY_TOL: f64 = 1e-3;
const EVENNESS_TOL: f64 = 1e-12;
const GROWTH_TOL: f64 = 1e-3;
/// Relative probe step for the continuity check.
const CONTINUITY_STEP: f64 = 1e-9;

/// Geometric grid from 1e-6 to 1e6, 20 points per decade.
pub fn default_probe_grid() -> Vec<f64> {
    (0..=240).map(|i| 10f64.powf(-6.0 + i as f64 / 20.0)).collect()
}

/// Checks conditions A–E of `phi` on a positive probing grid.
///
/// Continuity is probed at every grid point (and at 0) with a relative step of
/// 1e-9: a jump counts as a violation when it exceeds `continuity_tol` times
/// max(1, |φ(x)|). Boundedness is a growth flag over the two largest decades
/// plus, when declared, a check of the grid maximum against the bound.
pub fn validate_class(
    phi: &TrialFunction,
    grid: &[f64],
    continuity_tol: f64,
) -> Result<ClassValidationReport> {
    check_grid(grid)?;
    if grid.len() < 16 {
        return Err(Error::GridTooSmall(format!(
            "need at least 16 grid points, got {}",
            grid.len()
        )));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if lo > 1e-6 || hi < 1e6 {
        return Err(Error::GridTooSmall(format!(
            "grid [{lo:e}, {hi:e}] must span at least [1e-6, 1e6]"
        )));
    }
    let f = |x: f64| phi.eval(x);

    // A: φ(0) = 0 and φ > 0 away from 0 on both sides
    let mut pos = f(0.0).abs();
    for &x in grid {
        for v in [f(x), f(-x)] {
            if !(v > 0.0) {
                pos = pos.max(if v.is_nan() { f64::INFINITY } else { v.abs().max(f64::MIN_POSITIVE) });
            }
        }
    }
    let positivity = ConditionResult::from_violation(pos, 0.0);

    // B: strictly increasing along the grid
    let mut mono = 0.0f64;
    let mut strict = true;
    for w in grid.windows(2) {
        let (a, b) = (f(w[0]), f(w[1]));
        if !(b > a) {
            strict = false;
            mono = mono.max(a - b);
        }
    }
    let monotonicity = ConditionResult {
        passed: strict,
        worst_violation: mono,
    };

    // C: no jumps at the probe step
    let mut jump = 0.0f64;
    for &x in std::iter::once(&0.0).chain(grid) {
        let h = CONTINUITY_STEP * x.abs().max(1e-6);
        let c = f(x);
        let local = (f(x + h) - c).abs().max((c - f(x - h)).abs()) / c.abs().max(1.0);
        jump = jump.max(if local.is_nan() { f64::INFINITY } else { local });
    }
    let continuity = ConditionResult::from_violation(jump, continuity_tol);

    // D: evenness
    let mut odd = 0.0f64;
    for &x in grid {
        let (a, b) = (f(x), f(-x));
        let d = (a - b).abs() / a.abs().max(1.0);
        odd = odd.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    let evenness = ConditionResult::from_violation(odd, EVENNESS_TOL);

    // E: boundedness
    let empirical_max = grid.iter().map(|&x| f(x)).fold(f(0.0), f64::max);
    let top = f(hi);
    let below = f(hi / 100.0);
    let growth = if below > 0.0 { top / below - 1.0 } else { f64::INFINITY };
    let growth_detected = !(growth <= GROWTH_TOL) || !top.is_finite();
    let within_bound = phi
        .declared_bound()
        .is_none_or(|b| empirical_max <= b * (1.0 + 1e-12));
    let boundedness = BoundednessResult {
        passed: !growth_detected && within_bound,
        empirical_max,
        declared_bound: phi.declared_bound(),
        growth,
        growth_detected,
    };

    let base = positivity.passed && monotonicity.passed && continuity.passed && evenness.passed;
    let passed = match phi.class() {
        TrialClass::KB => base && boundedness.passed,
        TrialClass::K => base,
    };
    Ok(ClassValidationReport {
        phi: phi.name().to_string(),
        declared_class: phi.class(),
        grid_points: grid.len(),
        grid_min: lo,
        grid_max: hi,
        positivity,
        monotonicity,
        continuity,
        evenness,
        boundedness,
        passed,
    })
}

/// sup over the grid of φ(2x) / φ(x); finite values are grid-scale Δ₂ evidence.
pub fn delta2_ratio(phi: &TrialFunction, grid: &[f64]) -> Result<f64> {
    check_grid(grid)?;
    let mut sup = 0.0f64;
    for &x in grid {
        let d = phi.eval(x);
        if d == 0.0 {
            return Err(Error::ZeroDenominator { x });
        }
        let r = phi.eval(2.0 * x) / d;
        sup = sup.max(r);
    }
    Ok(sup)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(grid[0] > 0.0) {
        return Err(Error::UnsortedGrid { position: 0 });
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::UnsortedGrid { position: i + 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn report(phi: &TrialFunction) -> ClassValidationReport {
        validate_class(phi, &default_probe_grid(), DEFAULT_CONTINUITY_TOL).unwrap()
    }

    #[test]
    fn builtin_bounded_members_pass() {
        for phi in [TrialFunction::arctan(), TrialFunction::ratio1(), TrialFunction::ratio2()] {
            let r = report(&phi);
            assert!(r.passed, "{} failed: {r:?}", phi.name());
        }
        let r = report(&TrialFunction::arctan());
        assert!(r.boundedness.empirical_max < std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(r.boundedness.empirical_max, std::f64::consts::FRAC_PI_2, epsilon = 1e-5);
    }

    #[test]
    fn identity_fails_positivity_and_evenness() {
        let phi = TrialFunction::custom("id", TrialClass::K, |x| x);
        let r = report(&phi);
        assert!(!r.positivity.passed);
        assert!(!r.evenness.passed);
        assert!(r.monotonicity.passed);
        assert!(!r.passed);
    }

    #[test]
    fn square_passes_k_fails_boundedness() {
        let r = report(&TrialFunction::power(2.0).unwrap());
        assert!(r.positivity.passed && r.monotonicity.passed);
        assert!(r.continuity.passed && r.evenness.passed);
        assert!(!r.boundedness.passed);
        assert!(r.boundedness.growth_detected);
        assert!(r.passed, "class K does not need E");
        let as_kb = TrialFunction::custom("sq", TrialClass::KB, |x| x * x);
        assert!(!report(&as_kb).passed);
    }

    #[test]
    fn jump_is_caught() {
        let step = TrialFunction::custom("step", TrialClass::KB, |x: f64| {
            let a = x.abs();
            if a == 0.0 {
                0.0
            } else if a < 1.0 {
                0.25 * a.atan()
            } else {
                0.5 + 0.25 * a.atan()
            }
        });
        let r = report(&step);
        assert!(!r.continuity.passed, "{r:?}");
    }

    #[test]
    fn grid_errors() {
        let phi = TrialFunction::arctan();
        assert!(matches!(validate_class(&phi, &[], 1e-3), Err(Error::EmptyGrid)));
        let mut g = default_probe_grid();
        g.swap(3, 4);
        assert!(matches!(
            validate_class(&phi, &g, 1e-3),
            Err(Error::UnsortedGrid { position: 4 })
        ));
        assert!(matches!(
            validate_class(&phi, &[1.0, 2.0, 3.0], 1e-3),
            Err(Error::GridTooSmall(_))
        ));
        assert!(matches!(delta2_ratio(&phi, &[]), Err(Error::EmptyGrid)));
    }

    #[test]
    fn delta2_homogeneous() {
        let g = default_probe_grid();
        assert_eq!(delta2_ratio(&TrialFunction::power(2.0).unwrap(), &g).unwrap(), 4.0);
        let r = delta2_ratio(&TrialFunction::power(1.5).unwrap(), &g).unwrap();
        assert_abs_diff_eq!(r, 2f64.powf(1.5), epsilon = 1e-12);
    }

    #[test]
    fn delta2_exponential_grows() {
        let grid: Vec<f64> = (1..=50).map(|i| i as f64).collect();
        let r = delta2_ratio(&TrialFunction::exp_minus_one(), &grid).unwrap();
        // attained at x = 50: (e^100 - 1)/(e^50 - 1)
        let oracle = 100f64.exp_m1() / 50f64.exp_m1();
        assert_abs_diff_eq!(r / oracle, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_denominator() {
        let phi = TrialFunction::custom("flat", TrialClass::K, |x: f64| (x.abs() - 1.0).max(0.0));
        assert!(matches!(
            delta2_ratio(&phi, &[0.5, 2.0]),
            Err(Error::ZeroDenominator { x }) if x == 0.5
        ));
    }

    #[test]
    fn parse_selectors() {
        assert_eq!(TrialFunction::parse("arctan").unwrap().name(), "arctan");
        let p = TrialFunction::parse("power:3").unwrap();
        assert_eq!(p.class(), TrialClass::K);
        assert_eq!(p.eval(-2.0), 8.0);
        assert!(p.is_young_orlicz());
        assert!(TrialFunction::parse("power:-1").is_err());
        assert!(TrialFunction::parse("sinh").is_err());
    }
}
