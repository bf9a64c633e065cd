//! Sequences and periodic functions with known convergence behavior.

use std::f64::consts::PI;
use std::sync::Arc;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::criterion::{MCapRule, TableMode, Thresholds, WindowGrid, DEFAULT_N_GRID};
use crate::error::{Error, Result};
use crate::fourier::{circle_population, partial_sum_sequence, PartialSumMethod, PeriodicFunction, Smoothness};
use crate::measure::{
    monte_carlo_population, piecewise_population, uniform_population, Point, QuadratureRule,
    SamplePopulation,
};
use crate::sequence::{FunctionSequence, SequenceEval};

/// Pass j containing typewriter index n: 2^j − 1 ≤ n ≤ 2^{j+1} − 2.
pub fn typewriter_pass(n: usize) -> u32 {
    (n + 1).ilog2()
}

/// (pass j, 1-based block i) of typewriter index n ≥ 1.
pub fn typewriter_block(n: usize) -> (u32, usize) {
    let j = typewriter_pass(n);
    (j, n + 2 - (1usize << j))
}

/// Index of block i (1-based) in pass j.
pub fn typewriter_index(j: u32, i: usize) -> usize {
    (1usize << j) - 2 + i
}

/// Indicator of [(i−1)/2^j, i/2^j) for the block of index n.
pub fn typewriter(n: usize, x: f64) -> f64 {
    let (j, i) = typewriter_block(n);
    let scale = (1u64 << j) as f64;
    let lo = (i - 1) as f64 / scale;
    let hi = i as f64 / scale;
    if x >= lo && x < hi {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub ae_converges: bool,
    pub in_measure: bool,
    /// (p, converges in L_p)
    pub lp_converges: Vec<(f64, bool)>,
}

impl GroundTruth {
    /// On a probability space a.e. convergence implies convergence in measure,
    /// and L_p convergence implies convergence in measure.
    pub fn is_consistent(&self) -> bool {
        (!self.ae_converges || self.in_measure)
            && self.lp_converges.iter().all(|&(_, c)| !c || self.in_measure)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PopulationHint {
    Uniform {
        a: f64,
        b: f64,
        nodes: usize,
        rule: QuadratureRule,
    },
    Piecewise {
        a: f64,
        b: f64,
        breakpoints: Vec<f64>,
        nodes_per_piece: usize,
        rule: QuadratureRule,
    },
    MonteCarlo {
        paths: usize,
    },
    Circle {
        nodes: usize,
    },
}

impl PopulationHint {
    pub fn build(&self, seed: u64) -> Result<SamplePopulation> {
        match self {
            PopulationHint::Uniform { a, b, nodes, rule } => uniform_population(*a, *b, *nodes, *rule),
            PopulationHint::Piecewise {
                a,
                b,
                breakpoints,
                nodes_per_piece,
                rule,
            } => piecewise_population(*a, *b, breakpoints, *nodes_per_piece, *rule),
            PopulationHint::MonteCarlo { paths } => monte_carlo_population(seed, *paths),
            PopulationHint::Circle { nodes } => circle_population(*nodes),
        }
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self, PopulationHint::MonteCarlo { .. })
    }
}

#[derive(Debug, Clone)]
pub enum CorpusInput {
    Sequence(FunctionSequence),
    Periodic(PeriodicFunction),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub summary: String,
    pub input: CorpusInput,
    pub population: PopulationHint,
    pub n_grid: Vec<usize>,
    pub m_cap: MCapRule,
    pub mode: TableMode,
    pub thresholds: Thresholds,
    pub ground_truth: GroundTruth,
    pub oracle_notes: String,
}

impl CorpusEntry {
    pub fn grid(&self) -> WindowGrid {
        WindowGrid::new(self.n_grid.clone(), self.m_cap)
    }

    pub fn periodic(&self) -> Option<&PeriodicFunction> {
        match &self.input {
            CorpusInput::Periodic(g) => Some(g),
            CorpusInput::Sequence(_) => None,
        }
    }

    /// The analyzed sequence; periodic entries give their partial sums
    /// s_1..s_{max_index} with g itself as the limit candidate.
    pub fn sequence(&self, max_index: usize) -> Result<FunctionSequence> {
        match &self.input {
            CorpusInput::Sequence(s) => Ok(s.clone()),
            CorpusInput::Periodic(g) => {
                let g2 = g.clone();
                Ok(partial_sum_sequence(g, max_index, PartialSumMethod::Coefficients)?
                    .with_limit(move |x: &Point, out: &mut [f64]| out[0] = g2.eval(x.scalar())))
            }
        }
    }
}

struct RandomDecay;

impl SequenceEval for RandomDecay {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        self.eval_range(x, k, k, out)
    }

    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        let Some(path) = x.path() else {
            out.iter_mut().for_each(|v| *v = f64::NAN);
            return;
        };
        let mut rng = path.rng();
        for k in 1..=last {
            let z: f64 = StandardNormal.sample(&mut rng);
            if k >= first {
                out[k - first] = z / (k * k) as f64;
            }
        }
    }
}

struct RandomWalk2d;

impl SequenceEval for RandomWalk2d {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, k: usize, x: &Point, out: &mut [f64]) {
        self.eval_range(x, k, k, out)
    }

    fn eval_range(&self, x: &Point, first: usize, last: usize, out: &mut [f64]) {
        let Some(path) = x.path() else {
            out.iter_mut().for_each(|v| *v = f64::NAN);
            return;
        };
        let mut rng = path.rng();
        let (mut a, mut b) = (0.0, 0.0);
        for k in 1..=last {
            let za: f64 = StandardNormal.sample(&mut rng);
            let zb: f64 = StandardNormal.sample(&mut rng);
            let s = (k * k) as f64;
            a += za / s;
            b += zb / s;
            if k >= first {
                out[2 * (k - first)] = a;
                out[2 * (k - first) + 1] = b;
            }
        }
    }
}

pub const MONTE_CARLO_PATHS: usize = 10_000;
pub const DEFAULT_TRIGPOLY_DEGREE: usize = 8;
const SPIKE_BREAKS: usize = 1024;

fn unit(nodes: usize, rule: QuadratureRule) -> PopulationHint {
    PopulationHint::Uniform {
        a: 0.0,
        b: 1.0,
        nodes,
        rule,
    }
}

fn truth(ae: bool, meas: bool, lp: &[(f64, bool)]) -> GroundTruth {
    GroundTruth {
        ae_converges: ae,
        in_measure: meas,
        lp_converges: lp.to_vec(),
    }
}

fn sequence_entry(
    name: &str,
    summary: &str,
    seq: FunctionSequence,
    population: PopulationHint,
    ground_truth: GroundTruth,
    oracle_notes: &str,
) -> CorpusEntry {
    CorpusEntry {
        name: name.into(),
        summary: summary.into(),
        input: CorpusInput::Sequence(seq),
        population,
        n_grid: DEFAULT_N_GRID.to_vec(),
        m_cap: MCapRule::default(),
        mode: TableMode::Kappa,
        thresholds: Thresholds::default(),
        ground_truth,
        oracle_notes: oracle_notes.into(),
    }
}

fn periodic_entry(name: &str, summary: &str, g: PeriodicFunction, oracle_notes: &str) -> CorpusEntry {
    CorpusEntry {
        name: name.into(),
        summary: summary.into(),
        input: CorpusInput::Periodic(g),
        population: PopulationHint::Circle { nodes: 2048 },
        n_grid: DEFAULT_N_GRID.to_vec(),
        m_cap: MCapRule::default(),
        mode: TableMode::Theta,
        thresholds: Thresholds {
            eps_pass: 0.05,
            eps_fail: 0.2,
        },
        ground_truth: truth(true, true, &[(1.0, true), (2.0, true)]),
        oracle_notes: oracle_notes.into(),
    }
}

/// Σ_{k=1..D} (cos kx + ½ sin kx)/k.
pub fn trig_polynomial(degree: usize) -> PeriodicFunction {
    PeriodicFunction::new(format!("trigpoly-{degree}"), Smoothness::TrigPoly(degree), move |x| {
        (1..=degree)
            .map(|k| {
                let (s, c) = (k as f64 * x).sin_cos();
                (c + 0.5 * s) / k as f64
            })
            .sum()
    })
}

pub fn square_wave() -> PeriodicFunction {
    PeriodicFunction::new("square-wave", Smoothness::Piecewise(vec![0.0, PI]), |x| {
        if x < PI {
            1.0
        } else {
            -1.0
        }
    })
}

pub fn sawtooth() -> PeriodicFunction {
    PeriodicFunction::new("sawtooth", Smoothness::Piecewise(vec![0.0]), |x| (PI - x) / 2.0)
}

fn power() -> CorpusEntry {
    sequence_entry(
        "power",
        "f_n(x) = x^n on [0, 1]",
        FunctionSequence::scalar("power", |k, x| x.scalar().powi(k as i32)),
        unit(200, QuadratureRule::GaussLegendre),
        truth(true, true, &[(1.0, true), (2.0, true), (4.0, true)]),
        "The window maximum of x^k over k ≥ n is x^n, so κ_n^m = ∫₀¹ arctan(x^n) dx \
         for every m > n; for n = 1 this is π/4 − ln2/2. κ_n ≤ 1/(n+1).",
    )
}

fn typewriter_entry() -> CorpusEntry {
    let mut e = sequence_entry(
        "typewriter",
        "indicator blocks of length 2^-j sweeping [0, 1) in pass j",
        FunctionSequence::scalar("typewriter", |k, x| typewriter(k, x.scalar())),
        unit(1 << 12, QuadratureRule::Midpoint),
        truth(false, true, &[(1.0, true), (2.0, true), (4.0, true)]),
        "Index n lies in pass j = ⌊log₂(n+1)⌋ as block i = n − 2^j + 2. A window \
         [n, n + 2^{j+1}] covers [0, 1) with blocks, so the window maximum is 1 \
         everywhere and κ_n^{m_cap} = π/4 for every n. |f_n|_p = 2^{-j/p} → 0.",
    );
    e.m_cap = MCapRule::FullPass;
    e
}

fn recip() -> CorpusEntry {
    sequence_entry(
        "recip",
        "f_n ≡ 1/n",
        FunctionSequence::scalar("recip", |k, _| 1.0 / k as f64),
        unit(16, QuadratureRule::Midpoint),
        truth(true, true, &[(1.0, true), (2.0, true), (4.0, true)]),
        "κ_n^m = arctan(1/n); γ_n^m = arctan(1/n − 1/m).",
    )
}

fn oscillate() -> CorpusEntry {
    sequence_entry(
        "oscillate",
        "f_n ≡ (−1)^n",
        FunctionSequence::scalar("oscillate", |k, _| if k % 2 == 0 { 1.0 } else { -1.0 }),
        unit(16, QuadratureRule::Midpoint),
        truth(false, false, &[(1.0, false), (2.0, false), (4.0, false)]),
        "|f_k| = 1, so κ_n^m = π/4; |f_k − f_n| = 2 for k of opposite parity, so γ_n^m = arctan 2.",
    )
}

fn shrink_spike() -> CorpusEntry {
    let breakpoints: Vec<f64> = (1..=SPIKE_BREAKS).map(|k| 1.0 / (k * k) as f64).collect();
    sequence_entry(
        "shrink-spike",
        "f_n = n on [0, 1/n²), 0 elsewhere",
        FunctionSequence::scalar("shrink-spike", |k, x| {
            let kf = k as f64;
            if x.scalar() < 1.0 / (kf * kf) {
                kf
            } else {
                0.0
            }
        }),
        PopulationHint::Piecewise {
            a: 0.0,
            b: 1.0,
            breakpoints,
            nodes_per_piece: 2,
            rule: QuadratureRule::Midpoint,
        },
        truth(true, true, &[(1.0, true), (2.0, false), (4.0, false)]),
        "f_n(x) ≠ 0 only for x < 1/n², so κ_n^m ≤ (π/2)/n². |f_n|_p = n^{1−2/p}: \
         vanishes for p < 2, equals 1 at p = 2 and grows for p > 2.",
    )
}

fn random_decay() -> CorpusEntry {
    sequence_entry(
        "random-decay",
        "ξ_n = Z_n/n² with iid standard normal Z_n",
        FunctionSequence::from_eval("random-decay", Arc::new(RandomDecay)),
        PopulationHint::MonteCarlo {
            paths: MONTE_CARLO_PATHS,
        },
        truth(true, true, &[(1.0, true), (2.0, true), (4.0, true)]),
        "Σ P(|Z_n| > n) < ∞, so ξ_n → 0 almost surely; κ_n ≤ 𝐄 max_{k≥n}|Z_k|/k².",
    )
}

fn random_walk_2d() -> CorpusEntry {
    let mut e = sequence_entry(
        "random-walk-2d",
        "ζ(k) = Σ_{j≤k} Z_j/j² in ℝ² with iid standard normal Z_j",
        FunctionSequence::from_eval("random-walk-2d", Arc::new(RandomWalk2d)),
        PopulationHint::MonteCarlo {
            paths: MONTE_CARLO_PATHS,
        },
        truth(true, true, &[(1.0, true), (2.0, true), (4.0, true)]),
        "The increments are summable almost surely; 𝐄‖ζ(m) − ζ(n)‖² = 2 Σ_{n<j≤m} j⁻⁴. \
         The limit is random, so the Cauchy form τ is the natural test.",
    );
    e.mode = TableMode::Tau;
    e
}

fn cosine() -> CorpusEntry {
    periodic_entry(
        "cosine",
        "g(x) = cos x",
        PeriodicFunction::new("cosine", Smoothness::TrigPoly(1), f64::cos),
        "s_n[g] = g for n ≥ 1, so θ_n^m = 0.",
    )
}

fn trigpoly(degree: usize) -> CorpusEntry {
    periodic_entry(
        &format!("trigpoly-{degree}"),
        "Σ_{k≤D} (cos kx + ½ sin kx)/k",
        trig_polynomial(degree),
        "s_n[g] = g for n ≥ D, so θ_n^m = 0 for n ≥ D.",
    )
}

fn square() -> CorpusEntry {
    periodic_entry(
        "square-wave",
        "g(x) = sign(π − x)",
        square_wave(),
        "s_n[g] = (4/π) Σ_{odd j ≤ n} sin(jx)/j; converges off the jumps at 0 and π. \
         θ_n^{4n} decays like 1/n, reaching about 0.044 at n = 64.",
    )
}

fn saw() -> CorpusEntry {
    periodic_entry(
        "sawtooth",
        "g(x) = (π − x)/2 on [0, 2π)",
        sawtooth(),
        "s_n[g] = Σ_{k≤n} sin(kx)/k; converges off the jump at 0. θ decays like 1/n.",
    )
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    vec![
        power(),
        typewriter_entry(),
        recip(),
        oscillate(),
        shrink_spike(),
        random_decay(),
        random_walk_2d(),
        cosine(),
        trigpoly(DEFAULT_TRIGPOLY_DEGREE),
        square(),
        saw(),
    ]
}

/// Entry by name; `trigpoly-<D>` accepts any degree.
pub fn lookup(name: &str) -> Result<CorpusEntry> {
    if let Some(d) = name.strip_prefix("trigpoly-") {
        let degree = d
            .parse()
            .map_err(|_| Error::InputNotFound(format!("`{name}`: degree must be an integer")))?;
        return Ok(trigpoly(degree));
    }
    match name {
        "trigpoly" => Ok(trigpoly(DEFAULT_TRIGPOLY_DEGREE)),
        "power" => Ok(power()),
        "typewriter" => Ok(typewriter_entry()),
        "recip" => Ok(recip()),
        "oscillate" => Ok(oscillate()),
        "shrink-spike" => Ok(shrink_spike()),
        "random-decay" => Ok(random_decay()),
        "random-walk-2d" => Ok(random_walk_2d()),
        "cosine" => Ok(cosine()),
        "square-wave" => Ok(square()),
        "sawtooth" => Ok(saw()),
        other => Err(Error::InputNotFound(format!(
            "`{other}` is not a corpus entry or a readable file"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typewriter_indexing() {
        assert_eq!(typewriter_index(3, 5), 11);
        assert_eq!(typewriter_block(11), (3, 5));
        assert_eq!(typewriter(11, 0.5), 1.0);
        assert_eq!(typewriter(11, 0.624), 1.0);
        assert_eq!(typewriter(11, 0.625), 0.0);
        assert_eq!(typewriter(11, 0.49), 0.0);
        assert_eq!(typewriter_block(1), (1, 1));
        assert_eq!(typewriter_block(2), (1, 2));
        assert_eq!(typewriter_block(3), (2, 1));
        // pass 3 has 8 blocks of length 1/8
        let blocks: Vec<usize> = (1..40).filter(|&n| typewriter_pass(n) == 3).collect();
        assert_eq!(blocks, (7..=14).collect::<Vec<_>>());
    }

    #[test]
    fn entries_are_consistent() {
        let corpus = builtin_corpus();
        assert_eq!(corpus.len(), 11);
        for e in &corpus {
            assert!(e.ground_truth.is_consistent(), "{}", e.name);
            assert!(e.grid().validate().is_ok());
            assert_eq!(lookup(&e.name).unwrap().name, e.name);
        }
        assert!(lookup("power").unwrap().ground_truth.ae_converges);
        assert!(!lookup("oscillate").unwrap().ground_truth.in_measure);
        assert_eq!(lookup("trigpoly-3").unwrap().name, "trigpoly-3");
        assert!(matches!(lookup("nope"), Err(Error::InputNotFound(_))));
    }

    #[test]
    fn monte_carlo_entries_reproduce() {
        let e = lookup("random-walk-2d").unwrap();
        let seq = e.sequence(10).unwrap();
        let x = Point::Path(crate::measure::PathId { seed: 9, index: 4 });
        let (mut a, mut b) = (Vec::new(), Vec::new());
        seq.eval_raw(&x, 3, 7, &mut a).unwrap();
        seq.eval_raw(&x, 1, 7, &mut b).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(&b[4..], &a[..]);
    }

    #[test]
    fn periodic_sequence_has_limit() {
        let e = lookup("cosine").unwrap();
        let seq = e.sequence(8).unwrap();
        let (mut raw, mut norms) = (Vec::new(), Vec::new());
        seq.norms_centered(&Point::Real(1.3), 1, 8, &mut raw, &mut norms).unwrap();
        assert!(norms.iter().all(|v| v.abs() < 1e-12));
    }
}
