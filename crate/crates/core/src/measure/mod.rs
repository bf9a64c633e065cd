//! Discretized measure spaces and the integration engine.
//!
//! A [`SamplePopulation`] is the numerical stand-in for a probability space:
//! quadrature nodes on an interval, points drawn from a partition of a
//! σ-finite space, or seeded Monte Carlo paths. Every functional in the crate
//! is an [`integrate`] call against one of these.

mod integrate;
mod partition;
mod point;
mod population;
mod quadrature;
mod sum;

pub use integrate::{integrate, IntegralEstimate};
pub(crate) use integrate::{estimate_from_values, monte_carlo_error};
pub use partition::{
    equivalent_probability_measure, half_line_blocks, BlockSampler, PartitionBlock,
    DEFAULT_TRUNCATION,
};
pub use point::{PathId, Point};
pub use population::{
    monte_carlo_population, piecewise_population, uniform_population, Provenance,
    SamplePopulation, WEIGHT_SUM_TOL,
};
pub use quadrature::{gauss_legendre, interval_rule, QuadratureRule};
pub use sum::{compensated_sum, CompensatedSum};
