use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::window::WindowGrid;
use crate::error::{Error, Result};
use crate::measure::{monte_carlo_error, CompensatedSum, SamplePopulation};
use crate::sequence::FunctionSequence;
use crate::trial::TrialFunction;

/// Which window functional a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableMode {
    Kappa,
    Gamma,
    Tau,
    Theta,
    Lambda,
    Lp,
}

impl TableMode {
    /// Whether cell values are monotone in the window (all but `Lp`).
    pub fn is_monotone(self) -> bool {
        !matches!(self, TableMode::Lp)
    }

    /// Whether a vanishing profile is necessary as well as sufficient.
    pub fn is_criterion(self) -> bool {
        matches!(
            self,
            TableMode::Kappa | TableMode::Gamma | TableMode::Tau | TableMode::Theta
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            TableMode::Kappa => "kappa",
            TableMode::Gamma => "gamma",
            TableMode::Tau => "tau",
            TableMode::Theta => "theta",
            TableMode::Lambda => "lambda",
            TableMode::Lp => "lp",
        }
    }
}

/// One row n of a window table: values for m = n+1 ..= m_cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub m_cap: usize,
    /// The degenerate window m = n, used to detect a profile still rising at m_cap.
    pub baseline: f64,
    pub values: Vec<f64>,
    pub std_errors: Option<Vec<f64>>,
}

impl TableRow {
    pub fn value(&self, m: usize) -> Option<f64> {
        if m == self.n {
            return Some(self.baseline);
        }
        m.checked_sub(self.n + 1).and_then(|i| self.values.get(i).copied())
    }

    pub fn std_error(&self, m: usize) -> f64 {
        match (&self.std_errors, m.checked_sub(self.n + 1)) {
            (Some(se), Some(i)) => se.get(i).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("rows hold at least one window")
    }

    pub fn last_std_error(&self) -> f64 {
        self.std_errors
            .as_ref()
            .and_then(|s| s.last().copied())
            .unwrap_or(0.0)
    }
}

/// Window-functional values over an (n, m) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalWindowTable {
    pub mode: TableMode,
    pub phi: String,
    pub rows: Vec<TableRow>,
    pub monte_carlo: bool,
    pub population: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub n: usize,
    pub m: usize,
    pub amount: f64,
    pub direction: &'static str,
}

impl CriticalWindowTable {
    pub fn n_grid(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.n).collect()
    }

    pub fn m_caps(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.m_cap).collect()
    }

    pub fn row(&self, n: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn value(&self, n: usize, m: usize) -> Option<f64> {
        self.row(n).and_then(|r| r.value(m))
    }

    /// Checks nondecreasing-in-m and, for limit-anchored tables (κ, λ),
    /// nonincreasing-in-n up to `slack` (plus three standard errors for
    /// Monte Carlo cells). Cauchy-form rows are anchored at f_n, so only the
    /// m direction applies to them.
    pub fn check_monotonicity(&self, slack: f64) -> std::result::Result<(), MonotonicityViolation> {
        if !self.mode.is_monotone() {
            return Ok(());
        }
        for row in &self.rows {
            let mut prev = row.baseline;
            for (i, &v) in row.values.iter().enumerate() {
                let m = row.n + 1 + i;
                let tol = slack + 3.0 * row.std_error(m);
                if v < prev - tol {
                    return Err(MonotonicityViolation {
                        n: row.n,
                        m,
                        amount: prev - v,
                        direction: "m",
                    });
                }
                prev = v;
            }
        }
        if !matches!(self.mode, TableMode::Kappa | TableMode::Lambda) {
            return Ok(());
        }
        for pair in self.rows.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            for m in (hi.n + 1)..=hi.m_cap.min(lo.m_cap) {
                let (a, b) = (lo.value(m).unwrap(), hi.value(m).unwrap());
                let tol = slack + 3.0 * (lo.std_error(m) + hi.std_error(m));
                if b > a + tol {
                    return Err(MonotonicityViolation {
                        n: hi.n,
                        m,
                        amount: b - a,
                        direction: "n",
                    });
                }
            }
        }
        Ok(())
    }

    /// CSV with columns `n,m,value,std_err`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "m", "value", "std_err"])?;
        for row in &self.rows {
            for (i, v) in row.values.iter().enumerate() {
                let m = row.n + 1 + i;
                w.write_record(&[
                    row.n.to_string(),
                    m.to_string(),
                    format!("{v}"),
                    format!("{}", row.std_error(m)),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Reference point the window distances are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Anchor {
    /// ‖f_k − f_∞‖
    Limit,
    /// ‖f_k − f_n‖ for row n
    First,
}

/// Builds a table of ∫ φ(max_{k=n..m} dist_k) dν over `grid`.
///
/// Rows are evaluated in parallel; inside a row, every point is swept once
/// with a running maximum and only the increments of φ(running max) are
/// accumulated per column, in population order.
pub(crate) fn window_table(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
    anchor: Anchor,
    mode: TableMode,
) -> Result<CriticalWindowTable> {
    grid.validate()?;
    let rows = grid
        .n_grid
        .par_iter()
        .map(|&n| window_row(seq, pop, phi, n, grid.cap(n), anchor))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriticalWindowTable {
        mode,
        phi: phi.name().to_string(),
        rows,
        monte_carlo: pop.is_monte_carlo(),
        population: pop.describe(),
    })
}

pub(crate) fn window_row(
    seq: &FunctionSequence,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    n: usize,
    cap: usize,
    anchor: Anchor,
) -> Result<TableRow> {
    if cap < n + 1 {
        return Err(Error::WindowEmpty { n, m: cap });
    }
    let cols = cap - n + 1;
    let mc = pop.is_monte_carlo();
    let mut inc = vec![CompensatedSum::new(); cols];
    let mut inc_sq = vec![CompensatedSum::new(); if mc { cols } else { 0 }];
    let mut raw = Vec::new();
    let mut dist = Vec::with_capacity(cols);
    let d = seq.dim();
    let norm = seq.norm();

    for (x, w) in pop.iter() {
        match anchor {
            Anchor::Limit => seq.norms_centered(x, n, cap, &mut raw, &mut dist)?,
            Anchor::First => {
                seq.eval_raw(x, n, cap, &mut raw)?;
                let (head, _) = raw.split_at(d);
                dist.clear();
                dist.extend(raw.chunks(d).map(|c| norm.distance(c, head)));
            }
        }
        if w == 0.0 {
            continue;
        }
        let overflow = |k: usize| Error::Overflow {
            point: x.to_string(),
            index: Some(k),
        };
        let mut run = dist[0];
        let mut v = phi.eval(run);
        if !v.is_finite() {
            return Err(overflow(n));
        }
        inc[0].add(w * v);
        if mc {
            inc_sq[0].add(w * v * v);
        }
        for c in 1..cols {
            if dist[c] > run {
                run = dist[c];
                let nv = phi.eval(run);
                if !nv.is_finite() {
                    return Err(overflow(n + c));
                }
                inc[c].add(w * (nv - v));
                if mc {
                    inc_sq[c].add(w * (nv * nv - v * v));
                }
                v = nv;
            }
        }
    }

    let mut acc = CompensatedSum::new();
    let mut acc_sq = CompensatedSum::new();
    let mut values = Vec::with_capacity(cols - 1);
    let mut errors = Vec::with_capacity(if mc { cols - 1 } else { 0 });
    let mut baseline = 0.0;
    for c in 0..cols {
        acc.add(inc[c].value());
        let mean = acc.value();
        if mc {
            acc_sq.add(inc_sq[c].value());
        }
        if c == 0 {
            baseline = mean;
        } else {
            values.push(mean);
            if mc {
                errors.push(monte_carlo_error(mean, acc_sq.value(), pop.len()));
            }
        }
    }
    Ok(TableRow {
        n,
        m_cap: cap,
        baseline,
        values,
        std_errors: mc.then_some(errors),
    })
}
