//! L_p norms, Grand Lebesgue Space norms, and the λ and L_p tail functionals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{
    kappa_table, tail_sup_profile, truncation_caveat, verdict, verdict_from_profile,
    ConvergenceVerdict, CriticalWindowTable, ProfilePoint, TableMode, TableRow, Thresholds,
    Verdict, WindowGrid,
};
use crate::error::{Error, Result};
use crate::measure::{CompensatedSum, Point, SamplePopulation};
use crate::sequence::FunctionSequence;
use crate::trial::TrialFunction;

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::BadSpec(format!("need p >= 1, got {p}")));
    }
    Ok(())
}

/// |h|_p from precomputed |h| values, scaled by the maximum to avoid overflow.
pub fn lp_norm_values(values: &[f64], pop: &SamplePopulation, p: f64) -> Result<f64> {
    check_p(p)?;
    debug_assert_eq!(values.len(), pop.len());
    let mut top = 0.0f64;
    for (i, (v, w)) in values.iter().zip(pop.weights()).enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                point: pop.points()[i].to_string(),
                index: None,
                value: *v,
            });
        }
        if *w > 0.0 {
            top = top.max(v.abs());
        }
    }
    if top == 0.0 || p.is_infinite() {
        return Ok(top);
    }
    let mut s = CompensatedSum::new();
    for (v, w) in values.iter().zip(pop.weights()) {
        s.add(w * (v.abs() / top).powf(p));
    }
    Ok(top * s.value().powf(1.0 / p))
}

/// |h|_p = (∫ |h|^p dν)^{1/p}; p = ∞ gives the population maximum.
pub fn lp_norm<F>(h: F, pop: &SamplePopulation, p: f64) -> Result<f64>
where
    F: Fn(&Point) -> f64 + Sync,
{
    let values: Vec<f64> = pop.points().par_iter().map(|x| h(x).abs()).collect();
    lp_norm_values(&values, pop, p)
}

/// ψ on a finite p-grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrandLebesgueSpec {
    pub p_grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub r: f64,
    /// Largest sequence index entering ψ, when ψ is a natural function.
    pub n_max: Option<usize>,
}

pub const DEFAULT_P_POINTS: usize = 32;
pub const P_GRID_CAP: f64 = 64.0;

/// Geometric grid of `points` values from 1 + 2⁻¹⁰ to min(R(1 − 2⁻¹⁰), 64).
pub fn default_p_grid(r: f64, points: usize) -> Result<Vec<f64>> {
    if !(r > 1.0) {
        return Err(Error::BadSpec(format!("need R > 1, got {r}")));
    }
    let lo = 1.0 + 2f64.powi(-10);
    let hi = (r * (1.0 - 2f64.powi(-10))).min(P_GRID_CAP);
    if hi <= lo || points < 2 {
        return Ok(vec![lo.min(hi)]);
    }
    let ratio = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { hi } else { lo * (ratio * i as f64).exp() })
        .collect())
}

impl GrandLebesgueSpec {
    pub fn new(p_grid: Vec<f64>, psi: Vec<f64>, r: f64) -> Result<Self> {
        let spec = Self {
            p_grid,
            psi,
            r,
            n_max: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() || self.p_grid.len() != self.psi.len() {
            return Err(Error::BadSpec("p-grid and ψ must be nonempty and the same length".into()));
        }
        if let Some(p) = self.p_grid.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::UnsortedGrid { position: p + 1 });
        }
        if let Some(p) = self.p_grid.iter().find(|&&p| !(p > 1.0 && p < self.r)) {
            return Err(Error::BadSpec(format!("p = {p} lies outside (1, {})", self.r)));
        }
        if let Some(v) = self.psi.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::BadSpec(format!("ψ must be finite and nonnegative, found {v}")));
        }
        Ok(())
    }

    /// sup_p |h|_p / ψ(p) from |h| values. Grid points where |h|_p vanishes
    /// contribute 0, whatever ψ is there.
    pub fn norm_of_values(&self, values: &[f64], pop: &SamplePopulation) -> Result<f64> {
        let mut best = 0.0f64;
        for (&p, &psi) in self.p_grid.iter().zip(&self.psi) {
            let hp = lp_norm_values(values, pop, p)?;
            if hp > 0.0 {
                best = best.max(hp / psi);
            }
        }
        Ok(best)
    }
}

/// ψ(p) = max_{n ≤ N_max} |f_n − f_∞|_p on the grid.
pub fn natural_function(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    p_grid: &[f64],
    r: f64,
    n_max: usize,
) -> Result<GrandLebesgueSpec> {
    if n_max == 0 {
        return Err(Error::BadSpec("N_max must be at least 1".into()));
    }
    let rows = pop
        .points()
        .par_iter()
        .map(|x| {
            let (mut raw, mut norms) = (Vec::new(), Vec::new());
            seq.norms_centered(x, 1, n_max, &mut raw, &mut norms)?;
            Ok(norms)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let psi = p_grid
        .par_iter()
        .map(|&p| {
            let mut best = 0.0f64;
            let mut col = vec![0.0; rows.len()];
            for n in 0..n_max {
                for (c, r) in col.iter_mut().zip(&rows) {
                    *c = r[n];
                }
                best = best.max(lp_norm_values(&col, pop, p)?);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut spec = GrandLebesgueSpec::new(p_grid.to_vec(), psi, r)?;
    spec.n_max = Some(n_max);
    Ok(spec)
}

/// ‖h‖_{Gψ} = sup_p |h|_p / ψ(p) over the grid.
pub fn gls_norm<F>(h: F, pop: &SamplePopulation, spec: &GrandLebesgueSpec) -> Result<f64>
where
    F: Fn(&Point) -> f64 + Sync,
{
    spec.validate()?;
    let values: Vec<f64> = pop.points().par_iter().map(|x| h(x).abs()).collect();
    spec.norm_of_values(&values, pop)
}

/// λ_n^m = ‖max_{k=n+1..m} |f_k − f_∞|‖_{Gψ}.
pub fn lambda_window(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    spec: &GrandLebesgueSpec,
    n: usize,
    m: usize,
) -> Result<f64> {
    if n == 0 || m < n + 1 {
        return Err(Error::WindowEmpty { n, m });
    }
    Ok(lambda_row(seq, pop, spec, n, m)?.last())
}

fn lambda_row(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    spec: &GrandLebesgueSpec,
    n: usize,
    cap: usize,
) -> Result<TableRow> {
    // per point: running max of ‖f_k − f_∞‖ over k = n+1..=cap
    let runs = pop
        .points()
        .par_iter()
        .map(|x| {
            let (mut raw, mut norms) = (Vec::new(), Vec::new());
            seq.norms_centered(x, n + 1, cap, &mut raw, &mut norms)?;
            let mut run = 0.0f64;
            for v in norms.iter_mut() {
                run = run.max(*v);
                *v = run;
            }
            Ok(norms)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let cols = cap - n;
    let w = pop.weights();
    let top = runs
        .iter()
        .zip(w)
        .filter(|(_, w)| **w > 0.0)
        .map(|(r, _)| r[cols - 1])
        .fold(0.0f64, f64::max);
    let mut values = vec![0.0f64; cols];
    if top > 0.0 {
        let per_p = spec
            .p_grid
            .par_iter()
            .zip(&spec.psi)
            .map(|(&p, &psi)| {
                let mut inc = vec![CompensatedSum::new(); cols];
                for (r, &wt) in runs.iter().zip(w) {
                    if wt == 0.0 {
                        continue;
                    }
                    let mut prev = 0.0;
                    for (c, &v) in r.iter().enumerate() {
                        if c == 0 || v > r[c - 1] {
                            let now = (v / top).powf(p);
                            inc[c].add(wt * (now - prev));
                            prev = now;
                        }
                    }
                }
                let mut acc = CompensatedSum::new();
                inc.iter()
                    .map(|s| {
                        acc.add(s.value());
                        let hp = top * acc.value().max(0.0).powf(1.0 / p);
                        if hp > 0.0 { hp / psi } else { 0.0 }
                    })
                    .collect::<Vec<f64>>()
            })
            .collect::<Vec<_>>();
        for col in per_p {
            for (v, c) in values.iter_mut().zip(col) {
                *v = v.max(c);
            }
        }
    }
    Ok(TableRow {
        n,
        m_cap: cap,
        baseline: 0.0,
        values,
        std_errors: None,
    })
}

pub fn lambda_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    spec: &GrandLebesgueSpec,
    grid: &WindowGrid,
) -> Result<CriticalWindowTable> {
    grid.validate()?;
    spec.validate()?;
    let rows = grid
        .n_grid
        .par_iter()
        .map(|&n| lambda_row(seq, pop, spec, n, grid.cap(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalWindowTable {
        mode: TableMode::Lambda,
        phi: "gls".into(),
        rows,
        monte_carlo: pop.is_monte_carlo(),
        population: pop.describe(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub table: CriticalWindowTable,
    pub verdict: ConvergenceVerdict,
    pub kappa_verdict: Verdict,
    /// λ CONVERGES implies κ CONVERGES on the same input.
    pub kappa_consistent: bool,
}

/// λ verdict with the κ(arctan) verdict on the same grid for the consistency check.
pub fn lambda_bar_verdict(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    spec: &GrandLebesgueSpec,
    grid: &WindowGrid,
    thresholds: Thresholds,
) -> Result<LambdaReport> {
    let table = lambda_table(seq, pop, spec, grid)?;
    let v = verdict(&table, thresholds)?;
    let kappa = verdict(&kappa_table(seq, pop, &TrialFunction::arctan(), grid)?, thresholds)?;
    let consistent = v.verdict != Verdict::Converges || kappa.verdict == Verdict::Converges;
    Ok(LambdaReport {
        table,
        verdict: v,
        kappa_verdict: kappa.verdict,
        kappa_consistent: consistent,
    })
}

/// |f_n − f_m|_p.
pub fn lp_tail(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    p: f64,
    n: usize,
    m: usize,
) -> Result<f64> {
    if n == 0 || m < n + 1 {
        return Err(Error::WindowEmpty { n, m });
    }
    check_p(p)?;
    Ok(lp_row(seq, pop, p, n, m)?.last())
}

fn lp_row(seq: &FunctionSequence, pop: &SamplePopulation, p: f64, n: usize, cap: usize) -> Result<TableRow> {
    let d = seq.dim();
    let norm = seq.norm();
    let dists = pop
        .points()
        .par_iter()
        .map(|x| {
            let mut raw = Vec::new();
            seq.eval_raw(x, n, cap, &mut raw)?;
            let (head, rest) = raw.split_at(d);
            Ok(rest.chunks(d).map(|c| norm.distance(c, head)).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let mut col = vec![0.0; dists.len()];
    let values = (0..cap - n)
        .map(|c| {
            for (v, r) in col.iter_mut().zip(&dists) {
                *v = r[c];
            }
            lp_norm_values(&col, pop, p)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TableRow {
        n,
        m_cap: cap,
        baseline: 0.0,
        values,
        std_errors: None,
    })
}

pub fn lp_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    p: f64,
    grid: &WindowGrid,
) -> Result<CriticalWindowTable> {
    check_p(p)?;
    grid.validate()?;
    let rows = grid
        .n_grid
        .par_iter()
        .map(|&n| lp_row(seq, pop, p, n, grid.cap(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalWindowTable {
        mode: TableMode::Lp,
        phi: format!("p={p}"),
        rows,
        monte_carlo: pop.is_monte_carlo(),
        population: pop.describe(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpReport {
    pub p: f64,
    pub table: CriticalWindowTable,
    /// Verdict on sup_{m ≤ m_cap} |f_n − f_m|_p.
    pub verdict: ConvergenceVerdict,
    /// |f_n − f_{n+1}|_p for each n.
    pub pairwise_profile: Vec<ProfilePoint>,
    pub pairwise_verdict: Verdict,
}

pub fn lp_bar_verdict(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    p: f64,
    grid: &WindowGrid,
    thresholds: Thresholds,
) -> Result<LpReport> {
    let table = lp_table(seq, pop, p, grid)?;
    let v = verdict(&table, thresholds)?;
    let pairwise: Vec<ProfilePoint> = table
        .rows
        .iter()
        .map(|r| ProfilePoint {
            n: r.n,
            m_cap: r.n + 1,
            value: r.values[0],
            std_err: 0.0,
        })
        .collect();
    let pv = verdict_from_profile(
        &pairwise,
        thresholds,
        false,
        truncation_caveat(&pairwise, &table.population),
    )?
    .verdict;
    debug_assert_eq!(tail_sup_profile(&table).len(), pairwise.len());
    Ok(LpReport {
        p,
        table,
        verdict: v,
        pairwise_profile: pairwise,
        pairwise_verdict: pv,
    })
}
