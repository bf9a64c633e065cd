//! Dirichlet kernels, partial Fourier sums and the θ functional.
//!
//! Partial sums s_n[g] = g * D_n are computed either from quadrature Fourier
//! coefficients or by direct convolution with the kernel; the two routes are
//! independent and serve as oracles for each other. θ_n^m is the Cauchy window
//! functional of the sequence {s_k[g](x)} under ν = dx/2π.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{
    verdict, window_table, Anchor, ConvergenceVerdict, CriticalWindowTable, TableMode, Thresholds,
    WindowGrid,
};
use crate::error::{Error, Result};
use crate::measure::{
    estimate_from_values, gauss_legendre, uniform_population, CompensatedSum, IntegralEstimate,
    Point, QuadratureRule, SamplePopulation,
};
use crate::sequence::{FunctionSequence, SequenceEval};
use crate::trial::TrialFunction;

const SINGULAR: f64 = 1e-8;

fn reduce(x: f64) -> f64 {
    x - TAU * (x / TAU).round()
}

/// D_n(x) = sin((n+½)x) / (2π sin(x/2)).
pub fn dirichlet_kernel(n: usize, x: f64) -> f64 {
    let t = reduce(x);
    let s = (t / 2.0).sin();
    let h = n as f64 + 0.5;
    if s.abs() < SINGULAR {
        (2.0 * h) / TAU * (1.0 - (h * h / 6.0 - 1.0 / 24.0) * t * t)
    } else {
        (h * t).sin() / (TAU * s)
    }
}

/// D_m(x) − D_n(x) = π⁻¹ sin((m−n)x/2) cos((m+n+1)x/2) / sin(x/2).
pub fn difference_kernel(m: usize, n: usize, x: f64) -> Result<f64> {
    if m < n + 1 {
        return Err(Error::BadDegrees { m, n });
    }
    let t = reduce(x);
    let s = (t / 2.0).sin();
    if s.abs() < SINGULAR {
        return Ok(dirichlet_kernel(m, t) - dirichlet_kernel(n, t));
    }
    let (a, b) = ((m - n) as f64, (m + n + 1) as f64);
    Ok((a * t / 2.0).sin() * (b * t / 2.0).cos() / (PI * s))
}

/// Regularity of a periodic function, used to choose coefficient quadrature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    /// Trigonometric polynomial of the given degree.
    TrigPoly(usize),
    /// Smooth between the listed points of [0, 2π).
    Piecewise(Vec<f64>),
    Generic,
}

type Evaluator = dyn Fn(f64) -> f64 + Send + Sync;

/// A 2π-periodic function with a lazily grown coefficient cache.
#[derive(Clone)]
pub struct PeriodicFunction {
    name: String,
    eval: Arc<Evaluator>,
    hint: Smoothness,
    cache: Arc<RwLock<Option<Arc<FourierCoefficients>>>>,
}

impl fmt::Debug for PeriodicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicFunction")
            .field("name", &self.name)
            .field("hint", &self.hint)
            .finish()
    }
}

impl PeriodicFunction {
    /// `f` is evaluated on [0, 2π) and extended periodically.
    pub fn new<F>(name: impl Into<String>, hint: Smoothness, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(f),
            hint,
            cache: Arc::new(RwLock::new(None)),
        }
    }

    /// Periodic piecewise-linear interpolant through samples on [0, 2π).
    pub fn from_samples(name: impl Into<String>, xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 2 {
            return Err(Error::BadSpec(
                "samples need matching x and value columns with at least 2 rows".into(),
            ));
        }
        if let Some(i) = xs.iter().position(|x| !(0.0..TAU).contains(x)) {
            return Err(Error::BadSpec(format!("sample x = {} lies outside [0, 2π)", xs[i])));
        }
        if let Some(p) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::UnsortedGrid { position: p + 1 });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIntegrand {
                point: xs[i].to_string(),
                index: None,
                value: values[i],
            });
        }
        let (sx, sv) = (xs.clone(), values);
        let f = move |x: f64| {
            let n = sx.len();
            let i = sx.partition_point(|&p| p <= x);
            let (x0, v0, x1, v1) = match i {
                0 => (sx[n - 1] - TAU, sv[n - 1], sx[0], sv[0]),
                i if i == n => (sx[n - 1], sv[n - 1], sx[0] + TAU, sv[0]),
                i => (sx[i - 1], sv[i - 1], sx[i], sv[i]),
            };
            v0 + (v1 - v0) * (x - x0) / (x1 - x0)
        };
        Ok(Self::new(name, Smoothness::Piecewise(xs), f))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hint(&self) -> &Smoothness {
        &self.hint
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x.rem_euclid(TAU))
    }

    /// Nodes and weights on [0, 2π) (weights sum to 2π) resolving harmonics up
    /// to about `min_nodes / 8`.
    pub fn quadrature(&self, min_nodes: usize) -> (Vec<f64>, Vec<f64>) {
        match &self.hint {
            Smoothness::TrigPoly(_) | Smoothness::Generic => {
                let n = min_nodes.max(16);
                let h = TAU / n as f64;
                ((0..n).map(|j| (j as f64 + 0.5) * h).collect(), vec![h; n])
            }
            Smoothness::Piecewise(breaks) => {
                let mut cuts: Vec<f64> = breaks
                    .iter()
                    .map(|b| b.rem_euclid(TAU))
                    .filter(|b| *b > 0.0)
                    .collect();
                cuts.push(0.0);
                cuts.push(TAU);
                cuts.sort_by(|a, b| a.total_cmp(b));
                cuts.dedup();
                let (gx, gw) = gauss_legendre(8);
                let per_radian = min_nodes.max(16) as f64 / (8.0 * TAU);
                let (mut xs, mut ws) = (Vec::new(), Vec::new());
                for w in cuts.windows(2) {
                    let subs = ((w[1] - w[0]) * per_radian).ceil().max(1.0) as usize;
                    let step = (w[1] - w[0]) / subs as f64;
                    for s in 0..subs {
                        let a = w[0] + s as f64 * step;
                        for (x, wt) in gx.iter().zip(&gw) {
                            xs.push(a + (x + 1.0) * step / 2.0);
                            ws.push(wt * step / 2.0);
                        }
                    }
                }
                (xs, ws)
            }
        }
    }

    /// Coefficients a_0..a_K, b_0..b_K, reusing a cached higher-degree set.
    pub fn coefficients(&self, degree: usize) -> Result<Arc<FourierCoefficients>> {
        if let Some(c) = self.cache.read().expect("coefficient cache poisoned").as_ref() {
            if c.degree() >= degree {
                return Ok(c.clone());
            }
        }
        let fresh = Arc::new(self.compute_coefficients(degree)?);
        let mut slot = self.cache.write().expect("coefficient cache poisoned");
        match slot.as_ref() {
            Some(c) if c.degree() >= degree => Ok(c.clone()),
            _ => {
                *slot = Some(fresh.clone());
                Ok(fresh)
            }
        }
    }

    fn compute_coefficients(&self, degree: usize) -> Result<FourierCoefficients> {
        let extra = match self.hint {
            Smoothness::TrigPoly(d) => 2 * (d + degree) + 2,
            _ => 0,
        };
        let (ys, ws) = self.quadrature((8 * (degree + 1)).max(extra));
        let gw = self.weighted_values(&ys, &ws)?;
        let (a, b): (Vec<f64>, Vec<f64>) = (0..=degree)
            .into_par_iter()
            .map(|k| {
                let (mut sa, mut sb) = (CompensatedSum::new(), CompensatedSum::new());
                for (y, g) in ys.iter().zip(&gw) {
                    let (s, c) = (k as f64 * y).sin_cos();
                    sa.add(g * c);
                    sb.add(g * s);
                }
                (sa.value() / PI, sb.value() / PI)
            })
            .unzip();
        Ok(FourierCoefficients {
            a,
            b,
            nodes: ys.len(),
        })
    }

    fn weighted_values(&self, ys: &[f64], ws: &[f64]) -> Result<Vec<f64>> {
        ys.iter()
            .zip(ws)
            .map(|(&y, &w)| {
                let v = self.eval(y);
                if v.is_finite() {
                    Ok(w * v)
                } else {
                    Err(Error::NonFiniteIntegrand {
                        point: y.to_string(),
                        index: None,
                        value: v,
                    })
                }
            })
            .collect()
    }
}

/// a_k = π⁻¹∫ g cos(ky), b_k = π⁻¹∫ g sin(ky) over [0, 2π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Quadrature nodes used.
    pub nodes: usize,
}

impl FourierCoefficients {
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// a₀/2 + Σ_{k=1..n} (a_k cos kx + b_k sin kx).
    pub fn partial_sum(&self, n: usize, x: f64) -> f64 {
        let mut s = CompensatedSum::new();
        s.add(self.a[0] / 2.0);
        for k in 1..=n.min(self.degree()) {
            let (sn, cs) = (k as f64 * x).sin_cos();
            s.add(self.a[k] * cs + self.b[k] * sn);
        }
        s.value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartialSumMethod {
    Convolution,
    #[default]
    Coefficients,
}

impl FromStr for PartialSumMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "conv" | "convolution" => Ok(Self::Convolution),
            "coef" | "coefficients" => Ok(Self::Coefficients),
            other => Err(format!("unknown partial-sum method `{other}` (conv|coef)")),
        }
    }
}

impl PartialSumMethod {
    pub fn label(self) -> &'static str {
        match self {
            Self::Convolution => "conv",
            Self::Coefficients => "coef",
        }
    }
}

/// s_n[g](x).
pub fn partial_sum(g: &PeriodicFunction, n: usize, x: f64, method: PartialSumMethod) -> Result<f64> {
    match method {
        PartialSumMethod::Coefficients => Ok(g.coefficients(n)?.partial_sum(n, x)),
        PartialSumMethod::Convolution => {
            let (ys, ws) = g.quadrature(8 * (n + 1));
            let gw = g.weighted_values(&ys, &ws)?;
            let mut s = CompensatedSum::new();
            for (y, v) in ys.iter().zip(&gw) {
                s.add(v * dirichlet_kernel(n, x - y));
            }
            Ok(s.value())
        }
    }
}

struct CoefficientSums(Arc<FourierCoefficients>);

impl SequenceEval for CoefficientSums {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        out[0] = self.0.partial_sum(k, x.scalar());
    }

    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        let c = &self.0;
        let x = x.scalar();
        let mut s = CompensatedSum::new();
        s.add(c.a[0] / 2.0);
        for k in 1..=last {
            let (sn, cs) = (k as f64 * x).sin_cos();
            s.add(c.a[k] * cs + c.b[k] * sn);
            if k >= first {
                out[k - first] = s.value();
            }
        }
    }
}

struct ConvolutionSums {
    nodes: Vec<f64>,
    weighted: Vec<f64>,
}

impl SequenceEval for ConvolutionSums {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        self.eval_range(x, k, k, out)
    }

    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        let x = x.scalar();
        let mut sums = vec![CompensatedSum::new(); last - first + 1];
        for (y, g) in self.nodes.iter().zip(&self.weighted) {
            for (i, k) in (first..=last).enumerate() {
                sums[i].add(g * dirichlet_kernel(k, x - y));
            }
        }
        for (o, s) in out.iter_mut().zip(&sums) {
            *o = s.value();
        }
    }
}

/// The sequence k ↦ s_k[g] for k = 1..=max_degree, on scalar points.
pub fn partial_sum_sequence(
    g: &PeriodicFunction,
    max_degree: usize,
    method: PartialSumMethod,
) -> Result<FunctionSequence> {
    let eval: Arc<dyn SequenceEval> = match method {
        PartialSumMethod::Coefficients => Arc::new(CoefficientSums(g.coefficients(max_degree)?)),
        PartialSumMethod::Convolution => {
            let (nodes, ws) = g.quadrature(8 * (max_degree + 1));
            let weighted = g.weighted_values(&nodes, &ws)?;
            Arc::new(ConvolutionSums { nodes, weighted })
        }
    };
    Ok(FunctionSequence::from_eval(format!("s[{}]", g.name()), eval).with_max_index(max_degree))
}

/// ν = dx/2π on [0, 2π) by the midpoint rule.
pub fn circle_population(nodes: usize) -> Result<SamplePopulation> {
    uniform_population(0.0, TAU, nodes, QuadratureRule::Midpoint)
}

/// θ_n^m = ∫ arctan(max_{k=n+1..m} |s_k[g] − s_n[g]|) ν(dx).
pub fn theta_window(
    g: &PeriodicFunction,
    pop: &SamplePopulation,
    n: usize,
    m: usize,
    method: PartialSumMethod,
) -> Result<IntegralEstimate> {
    let grid = WindowGrid::new(vec![n], crate::criterion::MCapRule::Fixed(m));
    grid.validate()?;
    let t = theta_table(g, pop, &TrialFunction::arctan(), &grid, method)?;
    let row = &t.rows[0];
    Ok(IntegralEstimate::exact(row.last(), pop.len()))
}

pub fn theta_table(
    g: &PeriodicFunction,
    pop: &SamplePopulation,
    phi: &TrialFunction,
    grid: &WindowGrid,
    method: PartialSumMethod,
) -> Result<CriticalWindowTable> {
    grid.validate()?;
    let seq = partial_sum_sequence(g, grid.max_index(), method)?;
    window_table(&seq, pop, phi, grid, Anchor::First, TableMode::Theta)
}

pub fn theta_verdict(
    g: &PeriodicFunction,
    pop: &SamplePopulation,
    grid: &WindowGrid,
    thresholds: Thresholds,
    method: PartialSumMethod,
) -> Result<(CriticalWindowTable, ConvergenceVerdict)> {
    let table = theta_table(g, pop, &TrialFunction::arctan(), grid, method)?;
    let v = verdict(&table, thresholds)?;
    Ok((table, v))
}

/// The form with the maximum over x taken inside the integral: the integrand
/// is the constant arctan(max_x max_{k=n+1..m} |s_k − s_n|).
pub fn theta_sup_variant(
    g: &PeriodicFunction,
    pop: &SamplePopulation,
    n: usize,
    m: usize,
    method: PartialSumMethod,
) -> Result<f64> {
    if m < n + 1 {
        return Err(Error::WindowEmpty { n, m });
    }
    let seq = partial_sum_sequence(g, m, method)?;
    let tops = pop
        .points()
        .par_iter()
        .map(|x| {
            let mut raw = Vec::new();
            seq.eval_raw(x, n, m, &mut raw)?;
            Ok(raw[1..].iter().fold(0.0f64, |t, v| t.max((v - raw[0]).abs())))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(tops.into_iter().fold(0.0, f64::max).atan())
}

/// Reading of ln⁺ used in the Antonov integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LnPlus {
    /// ln⁺z = max(e, ln z)
    #[default]
    Printed,
    /// ln⁺z = ln(max(e, z))
    Conventional,
}

impl LnPlus {
    pub fn apply(self, z: f64) -> f64 {
        match self {
            LnPlus::Printed => z.ln().max(std::f64::consts::E),
            LnPlus::Conventional => z.max(std::f64::consts::E).ln(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LnPlus::Printed => "printed",
            LnPlus::Conventional => "conventional",
        }
    }
}

impl FromStr for LnPlus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "printed" => Ok(LnPlus::Printed),
            "conventional" => Ok(LnPlus::Conventional),
            other => Err(format!("unknown ln+ reading `{other}` (printed|conventional)")),
        }
    }
}

/// ∫₀^{2π} |g| ln⁺|g| ln⁺ln⁺ln⁺|g| dx, unnormalized.
///
/// `pop` is a probability population on the circle; the result is scaled by
/// its domain length (2π when no domain is recorded).
pub fn antonov_functional(
    g: &PeriodicFunction,
    pop: &SamplePopulation,
    ln_plus: LnPlus,
) -> Result<IntegralEstimate> {
    let len = pop.domain().map_or(TAU, |(a, b)| b - a);
    let values: Vec<f64> = pop
        .points()
        .par_iter()
        .map(|x| {
            let z = g.eval(x.scalar()).abs();
            if z == 0.0 {
                return 0.0;
            }
            let l = |v| ln_plus.apply(v);
            z * l(z) * l(l(l(z)))
        })
        .collect();
    let mut est = estimate_from_values(&values, pop)?;
    est.value *= len;
    est.standard_error *= len;
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntonovPair {
    pub printed: IntegralEstimate,
    pub conventional: IntegralEstimate,
}

pub fn antonov_both(g: &PeriodicFunction, pop: &SamplePopulation) -> Result<AntonovPair> {
    Ok(AntonovPair {
        printed: antonov_functional(g, pop, LnPlus::Printed)?,
        conventional: antonov_functional(g, pop, LnPlus::Conventional)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, FRAC_PI_2};

    fn cosine() -> PeriodicFunction {
        PeriodicFunction::new("cos", Smoothness::TrigPoly(1), f64::cos)
    }

    #[test]
    fn kernel_values() {
        assert_abs_diff_eq!(dirichlet_kernel(5, 0.0), 11.0 / TAU, epsilon = 1e-13);
        assert_abs_diff_eq!(dirichlet_kernel(5, TAU), 11.0 / TAU, epsilon = 1e-13);
        for x in [-3.0, 0.1, 1e-9, 2.5] {
            assert_abs_diff_eq!(dirichlet_kernel(0, x), 1.0 / TAU, epsilon = 1e-15);
        }
        // direct sum (1 + 2Σcos kx)/2π
        for x in [0.3, 1.7, 1e-7, 5.0] {
            let direct = (1.0 + 2.0 * (1..=7).map(|k| (k as f64 * x).cos()).sum::<f64>()) / TAU;
            assert_abs_diff_eq!(dirichlet_kernel(7, x), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn difference_kernel_identity() {
        for x in [1.0, 1e-9, -2.0, 3.1] {
            let d = difference_kernel(5, 3, x).unwrap();
            assert_abs_diff_eq!(d, dirichlet_kernel(5, x) - dirichlet_kernel(3, x), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(difference_kernel(9, 2, 0.0).unwrap(), 7.0 / PI, epsilon = 1e-13);
        assert_abs_diff_eq!(difference_kernel(4, 3, 0.8).unwrap(), (4.0 * 0.8f64).cos() / PI, epsilon = 1e-13);
        assert!(matches!(difference_kernel(3, 3, 1.0), Err(Error::BadDegrees { m: 3, n: 3 })));
    }

    #[test]
    fn cosine_partial_sums() {
        let g = cosine();
        for method in [PartialSumMethod::Coefficients, PartialSumMethod::Convolution] {
            assert_abs_diff_eq!(partial_sum(&g, 0, 0.4, method).unwrap(), 0.0, epsilon = 1e-12);
            for n in [1, 3, 10] {
                assert_abs_diff_eq!(partial_sum(&g, n, 0.4, method).unwrap(), 0.4f64.cos(), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn square_wave_gibbs_value() {
        let g = PeriodicFunction::new("sq", Smoothness::Piecewise(vec![0.0, PI]), |x| {
            if x < PI { 1.0 } else { -1.0 }
        });
        let oracle: f64 = [1.0f64, 3.0, 5.0, 7.0, 9.0]
            .iter()
            .map(|j| (j * FRAC_PI_2).sin() / j)
            .sum::<f64>()
            * 4.0
            / PI;
        assert_abs_diff_eq!(oracle, 1.0630540, epsilon = 1e-7);
        for method in [PartialSumMethod::Coefficients, PartialSumMethod::Convolution] {
            assert_abs_diff_eq!(partial_sum(&g, 9, FRAC_PI_2, method).unwrap(), oracle, epsilon = 1e-6);
        }
    }

    #[test]
    fn coefficient_cache_grows() {
        let g = cosine();
        assert_eq!(g.coefficients(4).unwrap().degree(), 4);
        assert_eq!(g.coefficients(2).unwrap().degree(), 4);
        assert_eq!(g.coefficients(9).unwrap().degree(), 9);
        let c = g.coefficients(9).unwrap();
        assert_abs_diff_eq!(c.a[1], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.b[3], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn theta_trig_poly_vanishes() {
        let pop = circle_population(256).unwrap();
        let g = PeriodicFunction::new("p", Smoothness::TrigPoly(3), |x| {
            1.0 + x.cos() - 0.5 * (3.0 * x).sin()
        });
        let t = theta_window(&g, &pop, 3, 12, PartialSumMethod::Coefficients).unwrap();
        assert!(t.value.abs() < 1e-10);
        let t = theta_window(&g, &pop, 2, 5, PartialSumMethod::Coefficients).unwrap();
        assert!(t.value > 0.1);
        assert!(theta_sup_variant(&g, &pop, 2, 5, PartialSumMethod::Coefficients).unwrap() >= t.value);
    }

    #[test]
    fn antonov_constants() {
        let pop = circle_population(64).unwrap();
        let one = PeriodicFunction::new("one", Smoothness::TrigPoly(0), |_| 1.0);
        let pair = antonov_both(&one, &pop).unwrap();
        assert_abs_diff_eq!(pair.printed.value, TAU * E * E, epsilon = 1e-9);
        assert_abs_diff_eq!(pair.conventional.value, TAU, epsilon = 1e-12);
        let zero = PeriodicFunction::new("zero", Smoothness::TrigPoly(0), |_| 0.0);
        assert_eq!(antonov_functional(&zero, &pop, LnPlus::Printed).unwrap().value, 0.0);
    }

    #[test]
    fn samples_interpolate_periodically() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 * TAU / 8.0).collect();
        let vs: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let g = PeriodicFunction::from_samples("s", xs, vs).unwrap();
        assert_abs_diff_eq!(g.eval(TAU / 16.0), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(g.eval(TAU - TAU / 16.0), 3.5, epsilon = 1e-14);
        assert!(PeriodicFunction::from_samples("bad", vec![1.0, 0.5], vec![0.0, 0.0]).is_err());
    }
}
