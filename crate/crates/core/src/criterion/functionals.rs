use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{window_row, window_table, Anchor, CriticalWindowTable, TableMode};
use super::verdict::{truncation_caveat, verdict_from_profile, ProfilePoint, Thresholds, Verdict};
use super::window::WindowGrid;
use crate::error::{Error, Result};
use crate::measure::{estimate_from_values, integrate, IntegralEstimate, SamplePopulation};
use crate::sequence::FunctionSequence;
use crate::trial::{default_probe_grid, delta2_ratio, TrialClass, TrialFunction};

fn cell(row: super::table::TableRow, node_count: usize) -> IntegralEstimate {
    IntegralEstimate {
        value: row.last(),
        standard_error: row.last_std_error(),
        node_count,
    }
}

/// κ_n^m = ∫ φ(max_{k=n..m} ‖f_k − f_∞‖) dν.
pub fn kappa_window(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    n: usize,
    m: usize,
) -> Result<IntegralEstimate> {
    check_window(n, m)?;
    Ok(cell(window_row(seq, pop, phi, n, m, Anchor::Limit)?, pop.len()))
}

pub fn kappa_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
) -> Result<CriticalWindowTable> {
    window_table(seq, pop, phi, grid, Anchor::Limit, TableMode::Kappa)
}

/// γ_n^m = 𝐄 arctan(max_{k=n..m} |ξ(k) − ξ(n)|), the Cauchy form for scalar sequences.
pub fn gamma_window(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    n: usize,
    m: usize,
) -> Result<IntegralEstimate> {
    check_window(n, m)?;
    let phi = TrialFunction::arctan();
    Ok(cell(window_row(seq, pop, &phi, n, m, Anchor::First)?, pop.len()))
}

pub fn gamma_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
) -> Result<CriticalWindowTable> {
    window_table(seq, pop, phi, grid, Anchor::First, TableMode::Gamma)
}

/// τ_n^m = 𝐄 arctan(max_{k=n..m} ‖ζ(k) − ζ(n)‖), the Cauchy form for vector sequences.
pub fn tau_window(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    n: usize,
    m: usize,
) -> Result<IntegralEstimate> {
    check_vector(seq)?;
    check_window(n, m)?;
    let phi = TrialFunction::arctan();
    Ok(cell(window_row(seq, pop, &phi, n, m, Anchor::First)?, pop.len()))
}

pub fn tau_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
) -> Result<CriticalWindowTable> {
    check_vector(seq)?;
    window_table(seq, pop, phi, grid, Anchor::First, TableMode::Tau)
}

fn check_window(n: usize, m: usize) -> Result<()> {
    if n == 0 || m < n + 1 {
        return Err(Error::WindowEmpty { n, m });
    }
    Ok(())
}

fn check_vector(seq: &FunctionSequence) -> Result<()> {
    if seq.dim() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "tau needs vector values (d >= 2), `{}` has d = {}",
            seq.name(),
            seq.dim()
        )));
    }
    Ok(())
}

/// 𝐄 max_{k=n..m_cap} φ(‖f_k − f_∞‖), with φ applied before the maximum.
///
/// Equals κ_n^{m_cap} for monotone φ; computed independently of the table engine.
pub fn direct_tail_expectation(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    n: usize,
    m_cap: usize,
) -> Result<IntegralEstimate> {
    check_window(n, m_cap)?;
    let values = pop
        .points()
        .par_iter()
        .map(|x| {
            let (mut raw, mut norms) = (Vec::new(), Vec::new());
            seq.norms_centered(x, n, m_cap, &mut raw, &mut norms)?;
            Ok(norms.iter().map(|&r| phi.eval(r)).fold(f64::NEG_INFINITY, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    estimate_from_values(&values, pop)
}

/// Weighted-count form of the Tchebychev step for one (s, N, Q).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevCheck {
    pub s: u32,
    pub big_n: usize,
    pub q: usize,
    /// ν{x : max_{k∈[N, N+Q]} arctan‖f_k(x)‖ ≥ 1/s}
    pub mass: f64,
    pub kappa: f64,
    /// κ_N^{N+Q} / arctan(1/s)
    pub bound: f64,
    pub holds: bool,
}

pub fn chebyshev_check(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    s: u32,
    big_n: usize,
    q: usize,
) -> Result<ChebyshevCheck> {
    if s == 0 || q == 0 {
        return Err(Error::BadGrid("chebyshev check needs s >= 1 and Q >= 1".into()));
    }
    let phi = TrialFunction::arctan();
    let kappa = kappa_window(seq, pop, &phi, big_n, big_n + q)?.value;
    let level = 1.0 / s as f64;
    let mass = integrate_indicator(seq, pop, big_n, big_n + q, level)?;
    let bound = kappa / level.atan();
    Ok(ChebyshevCheck {
        s,
        big_n,
        q,
        mass,
        kappa,
        bound,
        holds: mass <= bound + 1e-12,
    })
}

fn integrate_indicator(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    first: usize,
    last: usize,
    level: f64,
) -> Result<f64> {
    let hits = pop
        .points()
        .par_iter()
        .map(|x| {
            let (mut raw, mut norms) = (Vec::new(), Vec::new());
            seq.norms_centered(x, first, last, &mut raw, &mut norms)?;
            let top = norms.iter().fold(0.0f64, |m, r| m.max(r.atan()));
            Ok(if top >= level { 1.0 } else { 0.0 })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(estimate_from_values(&hits, pop)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairEstimate {
    pub n: usize,
    pub m: usize,
    pub estimate: IntegralEstimate,
}

/// 𝐄 arctan‖η_n − η_m‖ over a grid of index pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InProbabilityTable {
    pub pairs: Vec<PairEstimate>,
    pub monte_carlo: bool,
    pub population: String,
}

impl InProbabilityTable {
    /// For each first index n, the largest value over its paired m.
    pub fn profile(&self) -> Vec<ProfilePoint> {
        let mut ns: Vec<usize> = self.pairs.iter().map(|p| p.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter()
            .map(|n| {
                let best = self
                    .pairs
                    .iter()
                    .filter(|p| p.n == n)
                    .max_by(|a, b| a.estimate.value.total_cmp(&b.estimate.value))
                    .expect("n taken from pairs");
                ProfilePoint {
                    n,
                    m_cap: best.m,
                    value: best.estimate.value,
                    std_err: best.estimate.standard_error,
                }
            })
            .collect()
    }

    pub fn verdict(&self, thresholds: Thresholds) -> Result<super::ConvergenceVerdict> {
        let profile = self.profile();
        let mut caveat = truncation_caveat(&profile, &self.population);
        caveat.push_str(" Pairwise values test convergence in measure, not almost everywhere.");
        verdict_from_profile(&profile, thresholds, self.monte_carlo, caveat)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "m", "value", "std_err"])?;
        for p in &self.pairs {
            w.write_record(&[
                p.n.to_string(),
                p.m.to_string(),
                format!("{}", p.estimate.value),
                format!("{}", p.estimate.standard_error),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Pairs (n, n+1), (n, 2n), (n, 4n) for every n.
pub fn default_pair_grid(n_grid: &[usize]) -> Vec<(usize, usize)> {
    n_grid
        .iter()
        .flat_map(|&n| [(n, n + 1), (n, 2 * n), (n, 4 * n)])
        .collect()
}

pub fn in_probability_criterion(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    pair_grid: &[(usize, usize)],
) -> Result<InProbabilityTable> {
    if pair_grid.is_empty() {
        return Err(Error::BadGrid("pair grid is empty".into()));
    }
    let d = seq.dim();
    let norm = seq.norm();
    let pairs = pair_grid
        .iter()
        .map(|&(n, m)| {
            if n == 0 || m == 0 {
                return Err(Error::BadGrid("sequence indices start at 1".into()));
            }
            let values = pop
                .points()
                .par_iter()
                .map(|x| {
                    let (mut a, mut b) = (Vec::with_capacity(d), Vec::with_capacity(d));
                    seq.eval_raw(x, n, n, &mut a)?;
                    seq.eval_raw(x, m, m, &mut b)?;
                    Ok(norm.distance(&a, &b).atan())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(PairEstimate {
                n,
                m,
                estimate: estimate_from_values(&values, pop)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InProbabilityTable {
        pairs,
        monte_carlo: pop.is_monte_carlo(),
        population: pop.describe(),
    })
}

/// Moment evidence for an unbounded trial function φ ∈ K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub phi: String,
    pub n_grid: Vec<usize>,
    /// ∫ φ(‖f_n‖) dν for each n of the grid.
    pub moments: Vec<f64>,
    /// Prefix maxima of `moments`.
    pub running_sup: Vec<f64>,
    pub moment_verdict: Verdict,
    pub tends_to_zero: bool,
    /// sup over the κ(φ) table.
    pub kappa_sup: f64,
    /// sup_n moments ≤ sup_n sup_m κ_n^m(φ).
    pub uniform_bound_holds: bool,
    pub young_orlicz: bool,
    pub delta2_ratio: Option<f64>,
    /// Young function with finite Δ₂ ratio and vanishing moments.
    pub orlicz_norm_evidence: bool,
}

pub fn moment_convergence_check(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
    thresholds: Thresholds,
) -> Result<MomentReport> {
    if phi.class() != TrialClass::K {
        return Err(Error::TrialClass(format!(
            "moment check needs an unbounded class-K trial function, `{}` is declared KB",
            phi.name()
        )));
    }
    grid.validate()?;
    let mut moments = Vec::with_capacity(grid.n_grid.len());
    for &n in &grid.n_grid {
        let values = pop
            .points()
            .par_iter()
            .map(|x| {
                let (mut raw, mut norms) = (Vec::new(), Vec::new());
                seq.norms_centered(x, n, n, &mut raw, &mut norms)?;
                let v = phi.eval(norms[0]);
                if !v.is_finite() {
                    return Err(Error::Overflow {
                        point: x.to_string(),
                        index: Some(n),
                    });
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?;
        let est = integrate_values_checked(&values, pop, n)?;
        moments.push(est);
    }
    let running_sup: Vec<f64> = moments
        .iter()
        .scan(f64::NEG_INFINITY, |m, &v| {
            *m = m.max(v);
            Some(*m)
        })
        .collect();

    let table = kappa_table(seq, pop, phi, grid)?;
    let kappa_sup = table
        .rows
        .iter()
        .flat_map(|r| r.values.iter().copied())
        .fold(f64::NEG_INFINITY, f64::max);
    let moment_sup = running_sup.last().copied().unwrap_or(0.0);
    let uniform_bound_holds = moment_sup <= kappa_sup * (1.0 + 1e-12) + 1e-12;

    let profile: Vec<ProfilePoint> = grid
        .n_grid
        .iter()
        .zip(&moments)
        .map(|(&n, &v)| ProfilePoint {
            n,
            m_cap: n,
            value: v,
            std_err: 0.0,
        })
        .collect();
    let moment_verdict = if profile.len() >= 4 {
        verdict_from_profile(&profile, thresholds, false, String::new())?.verdict
    } else {
        Verdict::Inconclusive
    };
    let tends_to_zero = moment_verdict == Verdict::Converges;

    let young_orlicz = phi.is_young_orlicz();
    let delta2 = if young_orlicz {
        delta2_ratio(phi, &default_probe_grid()).ok()
    } else {
        None
    };
    let orlicz_norm_evidence =
        young_orlicz && delta2.is_some_and(|r| r.is_finite()) && tends_to_zero;

    Ok(MomentReport {
        phi: phi.name().to_string(),
        n_grid: grid.n_grid.clone(),
        moments,
        running_sup,
        moment_verdict,
        tends_to_zero,
        kappa_sup,
        uniform_bound_holds,
        young_orlicz,
        delta2_ratio: delta2,
        orlicz_norm_evidence,
    })
}

fn integrate_values_checked(values: &[f64], pop: &SamplePopulation, n: usize) -> Result<f64> {
    let est = estimate_from_values(values, pop)?;
    if !est.value.is_finite() {
        return Err(Error::Overflow {
            point: "sum over population".into(),
            index: Some(n),
        });
    }
    Ok(est.value)
}

/// Direct integral of φ(‖f_n‖), exposed for oracle comparisons.
pub fn moment(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    n: usize,
) -> Result<IntegralEstimate> {
    let f = |x: &crate::measure::Point| {
        let (mut raw, mut norms) = (Vec::new(), Vec::new());
        match seq.norms_centered(x, n, n, &mut raw, &mut norms) {
            Ok(()) => phi.eval(norms[0]),
            Err(_) => f64::NAN,
        }
    };
    integrate(f, pop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{monte_carlo_population, uniform_population, Point, QuadratureRule};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, LN_2};

    fn unit(n: usize, rule: QuadratureRule) -> SamplePopulation {
        uniform_population(0.0, 1.0, n, rule).unwrap()
    }

    #[test]
    fn constant_sequence_kappa() {
        let pop = unit(16, QuadratureRule::Midpoint);
        let seq = FunctionSequence::scalar("c", |_, _| -2.5);
        for (n, m) in [(1, 2), (3, 10)] {
            let k = kappa_window(&seq, &pop, &TrialFunction::arctan(), n, m).unwrap();
            assert_abs_diff_eq!(k.value, 2.5f64.atan(), epsilon = 1e-14);
        }
    }

    #[test]
    fn power_kappa_oracle() {
        // window max of x^k over k >= 1 is x; ∫₀¹ arctan x dx = π/4 − ln2/2
        let pop = unit(200, QuadratureRule::GaussLegendre);
        let seq = FunctionSequence::scalar("power", |k, x| x.scalar().powi(k as i32));
        let oracle = FRAC_PI_4 - LN_2 / 2.0;
        for m in [2, 5, 40] {
            let k = kappa_window(&seq, &pop, &TrialFunction::arctan(), 1, m).unwrap();
            assert_abs_diff_eq!(k.value, oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn window_errors() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let seq = FunctionSequence::scalar("z", |_, _| 0.0);
        assert!(matches!(
            kappa_window(&seq, &pop, &TrialFunction::arctan(), 3, 3),
            Err(Error::WindowEmpty { n: 3, m: 3 })
        ));
        assert!(matches!(tau_window(&seq, &pop, 1, 2), Err(Error::DimensionMismatch(_))));
        let bad = FunctionSequence::scalar("nan", |k, _| if k == 2 { f64::NAN } else { 0.0 });
        assert!(matches!(
            kappa_window(&bad, &pop, &TrialFunction::arctan(), 1, 3),
            Err(Error::NonFiniteIntegrand { index: Some(2), .. })
        ));
    }

    #[test]
    fn gamma_oracles() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let recip = FunctionSequence::scalar("recip", |k, _| 1.0 / k as f64);
        for (n, m) in [(1, 2), (4, 9), (10, 100)] {
            let g = gamma_window(&recip, &pop, n, m).unwrap();
            assert_abs_diff_eq!(g.value, (1.0 / n as f64 - 1.0 / m as f64).atan(), epsilon = 1e-14);
        }
        let osc = FunctionSequence::scalar("osc", |k, _| if k % 2 == 0 { 1.0 } else { -1.0 });
        assert_abs_diff_eq!(gamma_window(&osc, &pop, 3, 4).unwrap().value, 2f64.atan(), epsilon = 1e-14);
        let flat = FunctionSequence::scalar("flat", |_, x| x.scalar());
        assert_eq!(gamma_window(&flat, &pop, 2, 7).unwrap().value, 0.0);
    }

    #[test]
    fn tau_embedding_and_oscillation() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let emb = FunctionSequence::vector("emb", 3, |k, _, out| {
            out[0] = 1.0 / k as f64;
            out[1] = 0.0;
            out[2] = 0.0;
        });
        let t = tau_window(&emb, &pop, 3, 8).unwrap();
        assert_abs_diff_eq!(t.value, (1.0 / 3.0 - 1.0 / 8.0f64).atan(), epsilon = 1e-14);
        let v = [0.6, -0.8];
        let osc = FunctionSequence::vector("vosc", 2, move |k, _, out| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            out[0] = s * v[0];
            out[1] = s * v[1];
        });
        assert_abs_diff_eq!(tau_window(&osc, &pop, 5, 6).unwrap().value, 2f64.atan(), epsilon = 1e-14);
    }

    #[test]
    fn chebyshev_holds_on_spike() {
        let pop = unit(64, QuadratureRule::Midpoint);
        let spike = FunctionSequence::scalar("spike", |k, x| if x.scalar() < 1.0 / k as f64 { 5.0 } else { 0.0 });
        for s in [1, 2, 5, 10] {
            let c = chebyshev_check(&spike, &pop, s, 2, 3).unwrap();
            assert!(c.holds, "{c:?}");
            assert_abs_diff_eq!(c.mass, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn in_probability_oscillation() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let osc = FunctionSequence::scalar("osc", |k, _| if k % 2 == 0 { 1.0 } else { -1.0 });
        let t = in_probability_criterion(&osc, &pop, &[(1, 2), (2, 5), (3, 5)]).unwrap();
        assert_abs_diff_eq!(t.pairs[0].estimate.value, 2f64.atan(), epsilon = 1e-15);
        assert_abs_diff_eq!(t.pairs[1].estimate.value, 2f64.atan(), epsilon = 1e-15);
        assert_eq!(t.pairs[2].estimate.value, 0.0);
        assert!(in_probability_criterion(&osc, &pop, &[]).is_err());
    }

    #[test]
    fn moment_constants() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let recip = FunctionSequence::scalar("recip", |k, _| 1.0 / k as f64);
        let phi = TrialFunction::power(2.0).unwrap();
        let r = moment_convergence_check(&recip, &pop, &phi, &WindowGrid::default(), Thresholds::default())
            .unwrap();
        for (n, m) in r.n_grid.iter().zip(&r.moments) {
            assert_abs_diff_eq!(*m, 1.0 / (*n as f64).powi(2), epsilon = 1e-15);
        }
        assert!(r.tends_to_zero && r.uniform_bound_holds);
        assert_eq!(r.delta2_ratio, Some(4.0));
        assert!(r.orlicz_norm_evidence);
        assert!(matches!(
            moment_convergence_check(&recip, &pop, &TrialFunction::arctan(), &WindowGrid::default(), Thresholds::default()),
            Err(Error::TrialClass(_))
        ));
    }

    #[test]
    fn moment_overflow_names_point() {
        let pop = unit(4, QuadratureRule::Midpoint);
        let big = FunctionSequence::scalar("big", |k, _| 1e200 * k as f64);
        let phi = TrialFunction::power(2.0).unwrap();
        assert!(matches!(
            moment_convergence_check(&big, &pop, &phi, &WindowGrid::default(), Thresholds::default()),
            Err(Error::Overflow { index: Some(4), .. })
        ));
    }

    #[test]
    fn monte_carlo_cells_carry_errors() {
        let pop = monte_carlo_population(3, 500).unwrap();
        let seq = FunctionSequence::scalar("u", |k, x| {
            use rand::Rng;
            let mut rng = x.path().unwrap().rng();
            let mut v = 0.0;
            for _ in 0..k {
                v = rng.random::<f64>();
            }
            v / k as f64
        });
        let k = kappa_window(&seq, &pop, &TrialFunction::arctan(), 1, 3).unwrap();
        assert!(k.standard_error > 0.0 && k.standard_error < 0.05);
        let _ = Point::Real(0.0);
    }
}
