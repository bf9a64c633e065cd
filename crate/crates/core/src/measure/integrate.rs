use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::Point;
use super::population::SamplePopulation;
use super::sum::CompensatedSum;
use crate::error::{Error, Result};

/// A weighted integral with its Monte Carlo standard error (zero for quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub node_count: usize,
}

impl IntegralEstimate {
    pub fn exact(value: f64, node_count: usize) -> Self {
        Self {
            value,
            standard_error: 0.0,
            node_count,
        }
    }
}

/// ∫ integrand dν over the population.
///
/// Integrand values are computed in parallel, then summed sequentially in
/// population order so the result does not depend on the worker count.
pub fn integrate<F>(integrand: F, population: &SamplePopulation) -> Result<IntegralEstimate>
where
    F: Fn(&Point) -> f64 + Sync,
{
    let values: Vec<f64> = population
        .points()
        .par_iter()
        .map(&integrand)
        .collect();
    estimate_from_values(&values, population)
}

/// Weighted mean of precomputed per-point values.
pub(crate) fn estimate_from_values(
    values: &[f64],
    population: &SamplePopulation,
) -> Result<IntegralEstimate> {
    debug_assert_eq!(values.len(), population.len());
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIntegrand {
            point: population.points()[i].to_string(),
            index: None,
            value: values[i],
        });
    }
    let mut sum = CompensatedSum::new();
    let mut sum_sq = CompensatedSum::new();
    for (v, w) in values.iter().zip(population.weights()) {
        sum.add(w * v);
        sum_sq.add(w * v * v);
    }
    let value = sum.value();
    let standard_error = if population.is_monte_carlo() {
        monte_carlo_error(value, sum_sq.value(), population.len())
    } else {
        0.0
    };
    Ok(IntegralEstimate {
        value,
        standard_error,
        node_count: population.len(),
    })
}

/// Standard error of an equal-weight mean from its first two moments.
pub(crate) fn monte_carlo_error(mean: f64, mean_sq: f64, paths: usize) -> f64 {
    if paths < 2 {
        return 0.0;
    }
    let n = paths as f64;
    let var = ((mean_sq - mean * mean) * n / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{monte_carlo_population, uniform_population, QuadratureRule};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_integrand() {
        let pop = uniform_population(-3.0, 5.0, 17, QuadratureRule::Midpoint).unwrap();
        let est = integrate(|_| 2.5, &pop).unwrap();
        assert_abs_diff_eq!(est.value, 2.5, epsilon = 1e-14);
        assert_eq!(est.standard_error, 0.0);
        assert_eq!(est.node_count, 17);
    }

    #[test]
    fn nan_reports_the_point() {
        let pop = uniform_population(0.0, 1.0, 4, QuadratureRule::Midpoint).unwrap();
        let err = integrate(|p| if p.scalar() > 0.6 { f64::NAN } else { 1.0 }, &pop).unwrap_err();
        match err {
            Error::NonFiniteIntegrand { point, .. } => assert_eq!(point, "0.625"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn monte_carlo_error_matches_sample_sd() {
        let pop = monte_carlo_population(1, 4).unwrap();
        // values 0, 1, 2, 3: mean 1.5, sample var 5/3
        let est = integrate(|p| p.path().unwrap().index as f64, &pop).unwrap();
        assert_abs_diff_eq!(est.value, 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(est.standard_error, (5.0f64 / 3.0 / 4.0).sqrt(), epsilon = 1e-14);
    }
}
