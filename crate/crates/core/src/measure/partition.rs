use std::fmt;
use std::sync::Arc;

use super::point::Point;
use super::population::SamplePopulation;
use super::quadrature::{interval_rule, QuadratureRule};
use super::sum::compensated_sum;
use crate::error::{Error, Result};

/// Number of partition blocks kept by default when truncating a countable partition.
pub const DEFAULT_TRUNCATION: usize = 20;

type SamplerFn = dyn Fn(usize) -> Vec<(Point, f64)> + Send + Sync;

/// Rule producing points of one block, each weighted by its share of the block's mass.
#[derive(Clone)]
pub enum BlockSampler {
    /// Lebesgue measure on [a, b) discretized by `rule`.
    Interval { a: f64, b: f64, rule: QuadratureRule },
    /// Explicit points with their mass contributions; the node count is ignored.
    Nodes(Vec<(Point, f64)>),
    /// User rule called with the requested node count.
    Custom(Arc<SamplerFn>),
}

impl fmt::Debug for BlockSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSampler::Interval { a, b, rule } => f
                .debug_struct("Interval")
                .field("a", a)
                .field("b", b)
                .field("rule", rule)
                .finish(),
            BlockSampler::Nodes(n) => f.debug_tuple("Nodes").field(&n.len()).finish(),
            BlockSampler::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl BlockSampler {
    fn sample(&self, nodes: usize) -> Vec<(Point, f64)> {
        match self {
            BlockSampler::Interval { a, b, rule } => {
                let (xs, ws) = interval_rule(*a, *b, nodes, *rule);
                xs.into_iter().map(Point::Real).zip(ws).collect()
            }
            BlockSampler::Nodes(v) => v.clone(),
            BlockSampler::Custom(f) => f(nodes),
        }
    }
}

/// One block X_m of a partition of a σ-finite space.
#[derive(Debug, Clone)]
pub struct PartitionBlock {
    pub index: usize,
    pub mass: f64,
    pub sampler: BlockSampler,
}

impl PartitionBlock {
    pub fn interval(index: usize, a: f64, b: f64, rule: QuadratureRule) -> Self {
        Self {
            index,
            mass: b - a,
            sampler: BlockSampler::Interval { a, b, rule },
        }
    }
}

/// Blocks [m-1, m) of the half-line under Lebesgue measure, m = 1..=count.
pub fn half_line_blocks(count: usize, rule: QuadratureRule) -> Vec<PartitionBlock> {
    (1..=count)
        .map(|m| PartitionBlock::interval(m, (m - 1) as f64, m as f64, rule))
        .collect()
}

/// Probability measure equivalent to μ, built from a truncated partition.
///
/// Block m receives total weight 2^-m, renormalized over the kept blocks so
/// the total is exactly one; inside a block, points are weighted in
/// proportion to their μ-mass. Points with zero μ-mass get zero weight, so
/// null sets are preserved at population resolution.
pub fn equivalent_probability_measure(
    blocks: &[PartitionBlock],
    nodes_per_block: usize,
) -> Result<SamplePopulation> {
    if blocks.is_empty() {
        return Err(Error::EmptyPartition);
    }
    if nodes_per_block == 0 {
        return Err(Error::BadNodeCount("nodes_per_block must be >= 1".into()));
    }
    for (pos, block) in blocks.iter().enumerate() {
        if block.index != pos + 1 {
            return Err(Error::BadPartitionIndex {
                expected: pos + 1,
                found: block.index,
            });
        }
        if !(block.mass.is_finite() && block.mass > 0.0) {
            return Err(Error::NonPositiveMass {
                index: block.index,
                mass: block.mass,
            });
        }
    }
    let truncation = blocks.len();
    let geometric = compensated_sum((1..=truncation).map(|m| 0.5f64.powi(m as i32)));

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut ids = Vec::new();
    for block in blocks {
        let samples = block.sampler.sample(nodes_per_block);
        let local_mass = compensated_sum(samples.iter().map(|(_, w)| *w));
        if !(local_mass.is_finite() && local_mass > 0.0)
            || samples.iter().any(|(_, w)| !(w.is_finite() && *w >= 0.0))
        {
            return Err(Error::NonPositiveMass {
                index: block.index,
                mass: local_mass,
            });
        }
        let block_weight = 0.5f64.powi(block.index as i32) / geometric;
        for (p, w) in samples {
            points.push(p);
            weights.push(block_weight * w / local_mass);
            ids.push(block.index);
        }
    }
    Ok(SamplePopulation::new(points, weights)?.with_blocks(ids, truncation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_block_gets_all_weight() {
        let blocks = vec![PartitionBlock {
            index: 1,
            mass: 7.3,
            sampler: BlockSampler::Interval {
                a: 0.0,
                b: 7.3,
                rule: QuadratureRule::Midpoint,
            },
        }];
        let pop = equivalent_probability_measure(&blocks, 10).unwrap();
        assert_eq!(pop.len(), 10);
        assert_abs_diff_eq!(pop.block_weight(1).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(pop.truncation(), Some(1));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            equivalent_probability_measure(&[], 4),
            Err(Error::EmptyPartition)
        ));
        let mut blocks = half_line_blocks(3, QuadratureRule::Midpoint);
        blocks[1].mass = 0.0;
        assert!(matches!(
            equivalent_probability_measure(&blocks, 4),
            Err(Error::NonPositiveMass { index: 2, .. })
        ));
        blocks[1].mass = f64::INFINITY;
        assert!(matches!(
            equivalent_probability_measure(&blocks, 4),
            Err(Error::NonPositiveMass { index: 2, .. })
        ));
        let mut blocks = half_line_blocks(3, QuadratureRule::Midpoint);
        blocks[2].index = 5;
        assert!(matches!(
            equivalent_probability_measure(&blocks, 4),
            Err(Error::BadPartitionIndex { expected: 3, found: 5 })
        ));
    }

    #[test]
    fn masked_points_carry_no_weight() {
        // block 2 has a μ-null half: its sampler gives zero mass there
        let masked = BlockSampler::Nodes(vec![
            (Point::Real(1.25), 0.5),
            (Point::Real(1.5), 0.0),
            (Point::Real(1.75), 0.5),
        ]);
        let mut blocks = half_line_blocks(3, QuadratureRule::Midpoint);
        blocks[1].sampler = masked;
        let pop = equivalent_probability_measure(&blocks, 2).unwrap();
        for (p, w) in pop.iter() {
            if *p == Point::Real(1.5) {
                assert_eq!(w, 0.0);
            } else {
                assert!(w > 0.0);
            }
        }
    }
}
