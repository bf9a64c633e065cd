use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::point::{PathId, Point};
use super::quadrature::{interval_rule, QuadratureRule};
use super::sum::compensated_sum;
use crate::error::{Error, Result};

/// Tolerance on the total weight after renormalization.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Quadrature,
    MonteCarlo,
}

/// A discretized probability space: points with nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePopulation {
    points: Vec<Point>,
    weights: Vec<f64>,
    provenance: Provenance,
    seed: Option<u64>,
    path_count: Option<usize>,
    /// Interval the population was built on, when it came from one.
    domain: Option<(f64, f64)>,
    /// Block index (1-based) of every point, for partition-derived populations.
    blocks: Option<Vec<usize>>,
    truncation: Option<usize>,
}

impl SamplePopulation {
    /// Builds a quadrature population, renormalizing `weights` to sum to one.
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        let weights = normalize(weights, points.len())?;
        Ok(Self {
            points,
            weights,
            provenance: Provenance::Quadrature,
            seed: None,
            path_count: None,
            domain: None,
            blocks: None,
            truncation: None,
        })
    }

    pub(crate) fn with_blocks(mut self, blocks: Vec<usize>, truncation: usize) -> Self {
        debug_assert_eq!(blocks.len(), self.points.len());
        self.blocks = Some(blocks);
        self.truncation = Some(truncation);
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.domain = Some((a, b));
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_monte_carlo(&self) -> bool {
        self.provenance == Provenance::MonteCarlo
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn path_count(&self) -> Option<usize> {
        self.path_count
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        self.domain
    }

    /// Number of partition blocks kept when the population came from a partition.
    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn block_ids(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    /// Total weight carried by partition block `m` (1-based).
    pub fn block_weight(&self, m: usize) -> Option<f64> {
        let blocks = self.blocks.as_ref()?;
        Some(compensated_sum(
            blocks
                .iter()
                .zip(&self.weights)
                .filter(|(b, _)| **b == m)
                .map(|(_, w)| *w),
        ))
    }

    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Short human-readable description for report caveats.
    pub fn describe(&self) -> String {
        match self.provenance {
            Provenance::MonteCarlo => format!(
                "Monte Carlo, {} paths, seed {}",
                self.path_count.unwrap_or(self.len()),
                self.seed.unwrap_or(0)
            ),
            Provenance::Quadrature => match self.domain {
                Some((a, b)) => format!("quadrature, {} nodes on [{a}, {b}]", self.len()),
                None => format!("quadrature, {} nodes", self.len()),
            },
        }
    }

    /// Writes `point,weight` (or `p1,...,pd,weight`) with a header row.
    ///
    /// Monte Carlo populations write the path index in the `point` column.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let dim = self.points.first().map(Point::dim).unwrap_or(1);
        if dim == 1 {
            w.write_record(["point", "weight"])?;
        } else {
            let mut header: Vec<String> = (1..=dim).map(|i| format!("p{i}")).collect();
            header.push("weight".into());
            w.write_record(&header)?;
        }
        for (p, wt) in self.iter() {
            let mut rec: Vec<String> = match p {
                Point::Real(x) => vec![format!("{x}")],
                Point::Tuple(v) => v.iter().map(|c| format!("{c}")).collect(),
                Point::Path(id) => vec![format!("{}", id.index)],
            };
            rec.push(format!("{wt}"));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a population written by [`write_csv`](Self::write_csv).
    ///
    /// The result always has quadrature provenance; weights are renormalized.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let cols = header.len();
        if cols < 2 || &header[cols - 1] != "weight" {
            return Err(Error::BadWeights(
                "population CSV needs a header ending in `weight`".into(),
            ));
        }
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::BadWeights(format!("unparsable number: {e}")))?;
            let (coords, w) = vals.split_at(cols - 1);
            points.push(if coords.len() == 1 {
                Point::Real(coords[0])
            } else {
                Point::Tuple(coords.to_vec())
            });
            weights.push(w[0]);
        }
        Self::new(points, weights)
    }
}

fn normalize(weights: Vec<f64>, n_points: usize) -> Result<Vec<f64>> {
    if weights.len() != n_points {
        return Err(Error::BadWeights(format!(
            "{} weights for {} points",
            weights.len(),
            n_points
        )));
    }
    if weights.is_empty() {
        return Err(Error::BadWeights("population has no points".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::BadWeights(format!("invalid weight {w}")));
    }
    let total = compensated_sum(weights.iter().copied());
    if total <= 0.0 {
        return Err(Error::BadWeights("weights sum to zero".into()));
    }
    let out: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
    let check = compensated_sum(out.iter().copied());
    debug_assert!((check - 1.0).abs() <= WEIGHT_SUM_TOL, "weight sum {check}");
    Ok(out)
}

/// Normalized-Lebesgue population on [a, b].
pub fn uniform_population(
    a: f64,
    b: f64,
    node_count: usize,
    rule: QuadratureRule,
) -> Result<SamplePopulation> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::DegenerateInterval { a, b });
    }
    if node_count < 2 {
        return Err(Error::BadNodeCount(format!(
            "need at least 2 nodes, got {node_count}"
        )));
    }
    let (xs, ws) = interval_rule(a, b, node_count, rule);
    Ok(SamplePopulation::new(xs.into_iter().map(Point::Real).collect(), ws)?.with_domain(a, b))
}

/// Composite population on [a, b] split at `breakpoints`, `nodes_per_piece`
/// nodes of `rule` on every piece.
///
/// Integrands that are smooth between breakpoints are then integrated to the
/// accuracy of the rule instead of the jump-limited accuracy.
pub fn piecewise_population(
    a: f64,
    b: f64,
    breakpoints: &[f64],
    nodes_per_piece: usize,
    rule: QuadratureRule,
) -> Result<SamplePopulation> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::DegenerateInterval { a, b });
    }
    if nodes_per_piece < 1 {
        return Err(Error::BadNodeCount("need at least 1 node per piece".into()));
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|c| *c > a && *c < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for w in cuts.windows(2) {
        let (xs, ws) = interval_rule(w[0], w[1], nodes_per_piece, rule);
        points.extend(xs.into_iter().map(Point::Real));
        weights.extend(ws);
    }
    Ok(SamplePopulation::new(points, weights)?.with_domain(a, b))
}

/// Equal-weight population of `paths` Monte Carlo paths under `seed`.
pub fn monte_carlo_population(seed: u64, paths: usize) -> Result<SamplePopulation> {
    if paths < 2 {
        return Err(Error::BadNodeCount(format!(
            "Monte Carlo needs at least 2 paths, got {paths}"
        )));
    }
    let points = (0..paths as u64)
        .map(|index| Point::Path(PathId { seed, index }))
        .collect();
    let mut pop = SamplePopulation::new(points, vec![1.0; paths])?;
    pop.provenance = Provenance::MonteCarlo;
    pop.seed = Some(seed);
    pop.path_count = Some(paths);
    Ok(pop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_degenerate_intervals() {
        assert!(matches!(
            uniform_population(1.0, 1.0, 10, QuadratureRule::Midpoint),
            Err(Error::DegenerateInterval { .. })
        ));
        assert!(matches!(
            uniform_population(0.0, 1.0, 1, QuadratureRule::Midpoint),
            Err(Error::BadNodeCount(_))
        ));
    }

    #[test]
    fn piecewise_respects_breakpoints() {
        let pop = piecewise_population(0.0, 1.0, &[0.25, 0.5, 2.0], 3, QuadratureRule::GaussLegendre)
            .unwrap();
        assert_eq!(pop.len(), 9);
        let left: f64 = pop
            .iter()
            .filter(|(p, _)| p.scalar() < 0.25)
            .map(|(_, w)| w)
            .sum();
        assert_abs_diff_eq!(left, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let pop = uniform_population(0.0, 1.0, 37, QuadratureRule::GaussLegendre).unwrap();
        let mut buf = Vec::new();
        pop.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("point,weight\n"));
        let back = SamplePopulation::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.points(), pop.points());
        for (a, b) in back.weights().iter().zip(pop.weights()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-16);
        }
    }

    #[test]
    fn vector_csv_header() {
        let pop = SamplePopulation::new(
            vec![Point::Tuple(vec![0.0, 1.0]), Point::Tuple(vec![2.0, 3.0])],
            vec![1.0, 3.0],
        )
        .unwrap();
        let mut buf = Vec::new();
        pop.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("p1,p2,weight"));
        assert!(text.contains("2,3,0.75"));
    }

    #[test]
    fn monte_carlo_records_seed() {
        let pop = monte_carlo_population(42, 100).unwrap();
        assert!(pop.is_monte_carlo());
        assert_eq!(pop.seed(), Some(42));
        assert_eq!(pop.path_count(), Some(100));
        assert_abs_diff_eq!(pop.total_weight(), 1.0, epsilon = 1e-12);
        assert_eq!(pop, monte_carlo_population(42, 100).unwrap());
    }
}
