use serde::{Deserialize, Serialize};

use super::table::{CriticalWindowTable, TableMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub eps_pass: f64,
    pub eps_fail: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            eps_pass: 0.01,
            eps_fail: 0.2,
        }
    }
}

impl Thresholds {
    pub fn new(eps_pass: f64, eps_fail: f64) -> Result<Self> {
        let t = Self { eps_pass, eps_fail };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_pass.is_finite() && self.eps_fail.is_finite()) {
            return Err(Error::BadThresholds("thresholds must be finite".into()));
        }
        if !(0.0 < self.eps_pass && self.eps_pass < self.eps_fail) {
            return Err(Error::BadThresholds(format!(
                "need 0 < eps_pass < eps_fail, got {} and {}",
                self.eps_pass, self.eps_fail
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Converges => 0,
            Verdict::Diverges => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Converges => "CONVERGES",
            Verdict::Diverges => "DIVERGES",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// S(n): the window functional at the end of row n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub n: usize,
    pub m_cap: usize,
    pub value: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    pub verdict: Verdict,
    pub tail_profile: Vec<ProfilePoint>,
    pub thresholds: Thresholds,
    pub caveat: String,
    pub warnings: Vec<String>,
}

/// Relative change allowed across the last three profile values for a plateau.
pub const PLATEAU_REL_CHANGE: f64 = 0.10;
/// Slack for "nonincreasing" on deterministic profiles.
pub const PROFILE_SLACK: f64 = 1e-12;
/// Number of standard errors a Monte Carlo margin must clear.
pub const SE_MARGIN: f64 = 3.0;

/// S(n) for every row.
///
/// Monotone tables take the right endpoint of the window; `Lp` tables take
/// the explicit maximum over the window.
pub fn tail_sup_profile(table: &CriticalWindowTable) -> Vec<ProfilePoint> {
    table
        .rows
        .iter()
        .map(|row| {
            if table.mode.is_monotone() {
                ProfilePoint {
                    n: row.n,
                    m_cap: row.m_cap,
                    value: row.last(),
                    std_err: row.last_std_error(),
                }
            } else {
                let (i, v) = row
                    .values
                    .iter()
                    .copied()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
                let m = row.n + 1 + i;
                ProfilePoint {
                    n: row.n,
                    m_cap: row.m_cap,
                    value: v,
                    std_err: row.std_error(m),
                }
            }
        })
        .collect()
}

/// Verdict for a window table, with truncation caveat and rising-window warnings.
pub fn verdict(table: &CriticalWindowTable, thresholds: Thresholds) -> Result<ConvergenceVerdict> {
    let profile = tail_sup_profile(table);
    let mut caveat = truncation_caveat(&profile, &table.population);
    match table.mode {
        TableMode::Lambda => caveat.push_str(
            " This functional gives a sufficient condition only: a result other than CONVERGES does not show divergence.",
        ),
        TableMode::Lp => caveat.push_str(
            " Vanishing L_p tails show L_p-norm convergence; on their own they do not establish almost-everywhere convergence (see the typewriter sequence).",
        ),
        _ => {}
    }
    let mut out = verdict_from_profile(&profile, thresholds, table.monte_carlo, caveat)?;
    if table.mode.is_monotone() {
        for row in &table.rows {
            let s = row.last();
            let prev = if row.values.len() >= 2 {
                row.values[row.values.len() - 2]
            } else {
                row.baseline
            };
            let rise = s - prev;
            let tol = (1e-3 * s.abs()).max(PROFILE_SLACK).max(SE_MARGIN * row.last_std_error());
            if rise > tol {
                out.warnings.push(format!(
                    "S({}) is still rising at m_cap = {} (last increment {rise:.3e}); widen the window",
                    row.n, row.m_cap
                ));
            }
        }
    }
    Ok(out)
}

pub(crate) fn truncation_caveat(profile: &[ProfilePoint], population: &str) -> String {
    let last = profile.last();
    format!(
        "Numerical evidence at truncation scale, not a proof: n_max = {}, m_cap(n_max) = {}, population: {}.",
        last.map_or(0, |p| p.n),
        last.map_or(0, |p| p.m_cap),
        population
    )
}

/// Applies the three-way decision to a profile.
///
/// CONVERGES: S(n_max) < ε_pass and S nonincreasing over the last three n.
/// DIVERGES: S ≥ ε_fail over the last three n with relative changes below 10%.
/// Monte Carlo profiles must clear each threshold by three standard errors.
pub fn verdict_from_profile(
    profile: &[ProfilePoint],
    thresholds: Thresholds,
    monte_carlo: bool,
    caveat: String,
) -> Result<ConvergenceVerdict> {
    thresholds.validate()?;
    if profile.len() < 4 {
        return Err(Error::BadGrid(format!(
            "a verdict needs at least 4 probed n values, got {}",
            profile.len()
        )));
    }
    let se = |p: &ProfilePoint| if monte_carlo { SE_MARGIN * p.std_err } else { 0.0 };
    let tail = &profile[profile.len() - 3..];
    let last = &tail[2];

    let nonincreasing = tail
        .windows(2)
        .all(|w| w[1].value <= w[0].value + PROFILE_SLACK + se(&w[0]) + se(&w[1]));
    let converges = last.value + se(last) < thresholds.eps_pass && nonincreasing;

    let above = tail.iter().all(|p| p.value - se(p) >= thresholds.eps_fail);
    let plateau = tail.windows(2).all(|w| {
        let scale = w[0].value.abs().max(w[1].value.abs());
        scale == 0.0 || (w[1].value - w[0].value).abs() / scale < PLATEAU_REL_CHANGE
    });
    let diverges = above && plateau;

    let verdict = if converges {
        Verdict::Converges
    } else if diverges {
        Verdict::Diverges
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvergenceVerdict {
        verdict,
        tail_profile: profile.to_vec(),
        thresholds,
        caveat,
        warnings: Vec::new(),
    })
}
