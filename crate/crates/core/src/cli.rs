//! The `aeconv` command-line front end.
//!
//! Every flag can also be given in a `key = value` file passed with
//! `--config`; flags on the command line win over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corpus::{builtin_corpus, lookup, CorpusEntry, CorpusInput, PopulationHint};
use crate::criterion::{
    default_pair_grid, gamma_table, in_probability_criterion, kappa_table, moment_convergence_check,
    tau_table, truncation_caveat, verdict, verdict_from_profile, ConvergenceVerdict,
    CriticalWindowTable, MCapRule, ProfilePoint, Thresholds, Verdict, WindowGrid,
};
use crate::error::{Error, Result};
use crate::fourier::{
    antonov_functional, circle_population, partial_sum, theta_sup_variant, theta_table, LnPlus,
    PartialSumMethod, PeriodicFunction,
};
use crate::measure::{Point, QuadratureRule, SamplePopulation};
use crate::report::{write_outputs, Interpretation, Report};
use crate::sequence::{FunctionSequence, VectorNorm};
use crate::spaces::{default_p_grid, lambda_bar_verdict, lp_bar_verdict, natural_function, DEFAULT_P_POINTS};
use crate::trial::{default_probe_grid, delta2_ratio, validate_class, TrialClass, TrialFunction, DEFAULT_CONTINUITY_TOL};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_OUT: &str = "aeconv-out";

#[derive(Debug, Parser)]
#[command(name = "aeconv", version, about = "Almost-everywhere convergence diagnostics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Window-functional analysis of a sequence.
    Analyze(AnalyzeArgs),
    /// Partial Fourier sums, the θ functional and the Antonov integral.
    Fourier(FourierArgs),
    /// Natural function, Grand Lebesgue norms and L_p tails.
    Spaces(SpacesArgs),
    /// Builtin sequences with known behavior.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Checks a trial function against its declared class.
    ValidateTrial(ValidateArgs),
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    List,
    Describe { name: String },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// `key = value` file mirroring the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated increasing list of n.
    #[arg(long = "n-grid")]
    pub n_grid: Option<String>,
    /// `4n`, `n+1`, `pass`, or a fixed index.
    #[arg(long = "m-cap")]
    pub m_cap: Option<String>,
    #[arg(long = "eps-pass")]
    pub eps_pass: Option<String>,
    #[arg(long = "eps-fail")]
    pub eps_fail: Option<String>,
    /// Quadrature rule: midpoint or gauss.
    #[arg(long)]
    pub rule: Option<String>,
    /// Quadrature nodes (per piece for piecewise populations).
    #[arg(long)]
    pub nodes: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Monte Carlo path count.
    #[arg(long)]
    pub paths: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads.
    #[arg(long)]
    pub workers: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// kappa, gamma, tau, theta, lambda, lp, in-prob or moment.
    #[arg(long)]
    pub mode: Option<String>,
    /// Corpus name or sampled CSV (`x,weight,f1,...,fN`).
    #[arg(long)]
    pub input: Option<String>,
    /// arctan, ratio1, ratio2, power:<p>, expm1.
    #[arg(long)]
    pub phi: Option<String>,
    /// euclidean, sup or one.
    #[arg(long)]
    pub norm: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    /// `n:m` pairs for in-prob mode.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Partial-sum route for theta: conv or coef.
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// Corpus name or CSV `x,value` on [0, 2π).
    #[arg(long = "g")]
    pub g: Option<String>,
    /// conv, coef or both.
    #[arg(long)]
    pub method: Option<String>,
    /// printed, conventional or both.
    #[arg(long, num_args = 0..=1, default_missing_value = "both")]
    pub antonov: Option<String>,
    /// Also report the form with the maximum over x inside the integral.
    #[arg(long = "sup-variant")]
    pub sup_variant: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SpacesArgs {
    #[arg(long)]
    pub input: Option<String>,
    /// Comma-separated p values in (1, R).
    #[arg(long = "p-grid")]
    pub p_grid: Option<String>,
    #[arg(long = "R")]
    pub r: Option<String>,
    #[arg(long = "N-max")]
    pub n_max: Option<String>,
    /// Exponent of the L_p tail.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub norm: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value = "arctan")]
    pub phi: String,
    /// Continuity tolerance.
    #[arg(long, default_value_t = DEFAULT_CONTINUITY_TOL)]
    pub tol: f64,
}

const KEYS: &[&str] = &[
    "mode", "input", "phi", "norm", "p", "pairs", "method", "antonov", "sup-variant", "n-grid",
    "m-cap", "eps-pass", "eps-fail", "rule", "nodes", "seed", "paths", "out", "workers", "p-grid",
    "R", "N-max",
];

/// Keys that steer execution but not results; left out of reports.
const EXECUTION_KEYS: &[&str] = &["out", "workers"];

fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().replace('_', "-");
    let k = match k.as_str() {
        "r" => "R".to_string(),
        "n-max" => "N-max".to_string(),
        "g" => "input".to_string(),
        _ => k,
    };
    KEYS.iter().copied().find(|key| *key == k)
}

/// Effective settings after merging the config file and flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config("config", format!("line {}: expected `key = value`", i + 1)))?;
            let key = canonical_key(k)
                .ok_or_else(|| Error::config(k.trim(), format!("line {}: unknown key", i + 1)))?;
            map.insert(key.to_string(), v.trim().to_string());
        }
        Ok(Settings(map))
    }

    /// Settings from `(key, value)` pairs, keys as in the config file.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            let key = canonical_key(k).ok_or_else(|| Error::config(k, "unknown key"))?;
            map.insert(key.to_string(), v.to_string());
        }
        Ok(Settings(map))
    }

    fn load(config: Option<&Path>) -> Result<Self> {
        match config {
            None => Ok(Settings::default()),
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| {
                    Error::config("config", format!("cannot read `{}`: {e}", p.display()))
                })?;
                Self::parse_file(&text)
            }
        }
    }

    pub fn set(&mut self, key: &str, value: Option<&String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn parse<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| Error::config(key, format!("`{v}`: {e}"))))
            .transpose()
    }

    pub fn list<T>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().parse::<T>().map_err(|e| Error::config(key, format!("`{s}`: {e}"))))
                    .collect()
            })
            .transpose()
    }

    /// Settings that determine results, as embedded in reports.
    pub fn report_config(&self) -> BTreeMap<String, String> {
        self.0
            .iter()
            .filter(|(k, _)| !EXECUTION_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.get("out").unwrap_or(DEFAULT_OUT))
    }
}

fn common_settings(c: &CommonArgs) -> Result<Settings> {
    let mut s = Settings::load(c.config.as_deref())?;
    s.set("n-grid", c.n_grid.as_ref());
    s.set("m-cap", c.m_cap.as_ref());
    s.set("eps-pass", c.eps_pass.as_ref());
    s.set("eps-fail", c.eps_fail.as_ref());
    s.set("rule", c.rule.as_ref());
    s.set("nodes", c.nodes.as_ref());
    s.set("seed", c.seed.as_ref());
    s.set("paths", c.paths.as_ref());
    s.set("out", c.out.as_ref());
    s.set("workers", c.workers.as_ref());
    Ok(s)
}

/// Analysis modes of `analyze`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Kappa,
    Gamma,
    Tau,
    Theta,
    Lambda,
    Lp,
    InProb,
    Moment,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "kappa" => Ok(Mode::Kappa),
            "gamma" => Ok(Mode::Gamma),
            "tau" => Ok(Mode::Tau),
            "theta" => Ok(Mode::Theta),
            "lambda" => Ok(Mode::Lambda),
            "lp" => Ok(Mode::Lp),
            "in-prob" | "inprob" | "in-probability" => Ok(Mode::InProb),
            "moment" => Ok(Mode::Moment),
            other => Err(format!(
                "unknown mode `{other}` (kappa|gamma|tau|theta|lambda|lp|in-prob|moment)"
            )),
        }
    }
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Kappa => "kappa",
            Mode::Gamma => "gamma",
            Mode::Tau => "tau",
            Mode::Theta => "theta",
            Mode::Lambda => "lambda",
            Mode::Lp => "lp",
            Mode::InProb => "in-prob",
            Mode::Moment => "moment",
        }
    }

    fn from_table(mode: crate::criterion::TableMode) -> Self {
        use crate::criterion::TableMode as T;
        match mode {
            T::Kappa => Mode::Kappa,
            T::Gamma => Mode::Gamma,
            T::Tau => Mode::Tau,
            T::Theta => Mode::Theta,
            T::Lambda => Mode::Lambda,
            T::Lp => Mode::Lp,
        }
    }
}

/// What an `--input` value resolved to.
enum Resolved {
    Entry(Box<CorpusEntry>),
    Samples {
        name: String,
        seq: FunctionSequence,
        pop: SamplePopulation,
    },
    Periodic(PeriodicFunction),
}

impl Resolved {
    fn name(&self) -> String {
        match self {
            Resolved::Entry(e) => e.name.clone(),
            Resolved::Samples { name, .. } => name.clone(),
            Resolved::Periodic(g) => g.name().to_string(),
        }
    }

    fn periodic(&self) -> Option<&PeriodicFunction> {
        match self {
            Resolved::Entry(e) => e.periodic(),
            Resolved::Periodic(g) => Some(g),
            Resolved::Samples { .. } => None,
        }
    }

    fn default_grid(&self) -> WindowGrid {
        match self {
            Resolved::Entry(e) => e.grid(),
            _ => WindowGrid::default(),
        }
    }

    fn default_thresholds(&self) -> Thresholds {
        match self {
            Resolved::Entry(e) => e.thresholds,
            Resolved::Periodic(_) => Thresholds {
                eps_pass: 0.05,
                eps_fail: 0.2,
            },
            Resolved::Samples { .. } => Thresholds::default(),
        }
    }

    fn default_mode(&self) -> Mode {
        match self {
            Resolved::Entry(e) => Mode::from_table(e.mode),
            Resolved::Periodic(_) => Mode::Theta,
            Resolved::Samples { .. } => Mode::Kappa,
        }
    }

    fn population(&self, s: &Settings) -> Result<SamplePopulation> {
        let seed = s.parse::<u64>("seed")?.unwrap_or(DEFAULT_SEED);
        let nodes = s.parse::<usize>("nodes")?;
        let rule = s.parse::<QuadratureRule>("rule")?;
        let paths = s.parse::<usize>("paths")?;
        let hint = match self {
            Resolved::Samples { pop, .. } => return Ok(pop.clone()),
            Resolved::Periodic(_) => PopulationHint::Circle { nodes: 2048 },
            Resolved::Entry(e) => e.population.clone(),
        };
        let hint = match hint {
            PopulationHint::Uniform { a, b, nodes: n, rule: r } => PopulationHint::Uniform {
                a,
                b,
                nodes: nodes.unwrap_or(n),
                rule: rule.unwrap_or(r),
            },
            PopulationHint::Piecewise {
                a,
                b,
                breakpoints,
                nodes_per_piece,
                rule: r,
            } => PopulationHint::Piecewise {
                a,
                b,
                breakpoints,
                nodes_per_piece: nodes.unwrap_or(nodes_per_piece),
                rule: rule.unwrap_or(r),
            },
            PopulationHint::MonteCarlo { paths: p } => PopulationHint::MonteCarlo {
                paths: paths.unwrap_or(p),
            },
            PopulationHint::Circle { nodes: n } => PopulationHint::Circle {
                nodes: nodes.unwrap_or(n),
            },
        };
        hint.build(seed).map_err(|e| match e {
            Error::BadNodeCount(m) => Error::config(if hint.is_monte_carlo() { "paths" } else { "nodes" }, m),
            other => other,
        })
    }

    fn sequence(&self, max_index: usize) -> Result<FunctionSequence> {
        match self {
            Resolved::Entry(e) => e.sequence(max_index),
            Resolved::Samples { seq, .. } => Ok(seq.clone()),
            Resolved::Periodic(g) => {
                let g2 = g.clone();
                Ok(crate::fourier::partial_sum_sequence(g, max_index, PartialSumMethod::Coefficients)?
                    .with_limit(move |x: &Point, out: &mut [f64]| out[0] = g2.eval(x.scalar())))
            }
        }
    }
}

fn resolve_input(s: &Settings, periodic: bool) -> Result<Resolved> {
    let input = s
        .get("input")
        .ok_or_else(|| Error::config("input", "an input (corpus name or file) is required"))?;
    let path = Path::new(input);
    if path.is_file() {
        return if periodic {
            read_periodic_csv(path).map(Resolved::Periodic)
        } else {
            read_sampled_csv(path)
        };
    }
    if input.ends_with(".csv") || input.contains('/') {
        return Err(Error::InputNotFound(format!("file `{input}` does not exist")));
    }
    let entry = lookup(input)?;
    if periodic && entry.periodic().is_none() {
        return Err(Error::config("input", format!("`{input}` is not a periodic function")));
    }
    Ok(Resolved::Entry(Box::new(entry)))
}

fn bad_file(path: &Path, message: impl Into<String>) -> Error {
    Error::BadInputFile {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| bad_file(path, format!("row {}: {e}", i + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad_file(path, "no data rows"));
    }
    Ok((header, rows))
}

/// `x,weight,f1,...,fN` with strictly increasing x.
fn read_sampled_csv(path: &Path) -> Result<Resolved> {
    let (header, rows) = read_rows(path)?;
    if header.len() < 3 || header[0] != "x" || header[1] != "weight" {
        return Err(bad_file(path, "expected header `x,weight,f1,...,fN`"));
    }
    let n = header.len() - 2;
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    if let Some(p) = xs.windows(2).position(|w| w[1] <= w[0]) {
        return Err(bad_file(path, format!("x must be strictly increasing (row {})", p + 2)));
    }
    let weights: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let cols: Vec<Vec<f64>> = (0..n).map(|k| rows.iter().map(|r| r[k + 2]).collect()).collect();
    let pop = SamplePopulation::new(xs.iter().copied().map(Point::Real).collect(), weights)?;
    let name = path.file_stem().map_or("samples".into(), |s| s.to_string_lossy().into_owned());
    let seq = FunctionSequence::scalar(name.clone(), move |k, x| {
        let x = x.scalar();
        match xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => cols[k - 1][i],
            Err(_) => f64::NAN,
        }
    })
    .with_max_index(n);
    Ok(Resolved::Samples { name, seq, pop })
}

/// `x,value` on [0, 2π).
fn read_periodic_csv(path: &Path) -> Result<PeriodicFunction> {
    let (header, rows) = read_rows(path)?;
    if header.len() != 2 {
        return Err(bad_file(path, "expected header `x,value`"));
    }
    let name = path.file_stem().map_or("g".into(), |s| s.to_string_lossy().into_owned());
    PeriodicFunction::from_samples(
        name,
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
    )
    .map_err(|e| bad_file(path, e.to_string()))
}

fn grid(s: &Settings, default: WindowGrid) -> Result<WindowGrid> {
    let n_grid = s.list::<usize>("n-grid")?.unwrap_or(default.n_grid);
    let m_cap = match s.get("m-cap") {
        Some(v) => MCapRule::parse(v)?,
        None => default.m_cap,
    };
    let g = WindowGrid::new(n_grid, m_cap);
    g.validate().map_err(|e| match e {
        Error::BadGrid(m) => Error::config("n-grid", m),
        Error::WindowEmpty { n, m } => Error::config("m-cap", format!("window [{n}, {m}] is empty")),
        other => other,
    })?;
    Ok(g)
}

fn thresholds(s: &Settings, default: Thresholds) -> Result<Thresholds> {
    let t = Thresholds {
        eps_pass: s.parse("eps-pass")?.unwrap_or(default.eps_pass),
        eps_fail: s.parse("eps-fail")?.unwrap_or(default.eps_fail),
    };
    t.validate()
        .map_err(|e| Error::config("eps-pass", e.to_string()))?;
    Ok(t)
}

fn trial(s: &Settings, default: &str) -> Result<TrialFunction> {
    let sel = s.get("phi").unwrap_or(default);
    TrialFunction::parse(sel).map_err(|e| Error::config("phi", e.to_string()))
}

fn table_bytes(t: &CriticalWindowTable) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    t.write_csv(&mut buf)?;
    Ok(buf)
}

/// A finished run, ready to be written.
pub struct Outcome {
    pub report: Report,
    pub table_csv: Vec<u8>,
    pub extra: Vec<(&'static str, Vec<u8>)>,
    pub out: PathBuf,
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        self.report.verdict
    }
}

struct RunContext<'a> {
    settings: &'a Settings,
    command: &'static str,
    input: String,
    interpretation: Interpretation,
}

impl RunContext<'_> {
    fn report(
        &self,
        mode: &str,
        phi: &str,
        m_cap: String,
        pop: &SamplePopulation,
        v: &ConvergenceVerdict,
    ) -> Report {
        Report::new(
            self.command,
            mode,
            &self.input,
            phi,
            m_cap,
            pop.describe(),
            v,
            self.interpretation.clone(),
            self.settings.report_config(),
        )
    }
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    moment: f64,
    running_sup: f64,
}

/// Runs `analyze` with merged settings and returns the report without writing it.
pub fn analyze(s: &Settings) -> Result<Outcome> {
    let resolved = resolve_input(s, false)?;
    let mode = s.parse::<Mode>("mode")?.unwrap_or_else(|| resolved.default_mode());
    let g = grid(s, resolved.default_grid())?;
    let th = thresholds(s, resolved.default_thresholds())?;
    let pop = resolved.population(s)?;
    let norm = s.parse::<VectorNorm>("norm")?.unwrap_or_default();
    let ctx = RunContext {
        settings: s,
        command: "analyze",
        input: resolved.name(),
        interpretation: Interpretation {
            norm: format!("{norm:?}").to_lowercase(),
            ..Interpretation::default()
        },
    };
    let n_max = s.parse::<usize>("N-max")?;
    let max_index = g.max_index().max(n_max.unwrap_or(0));
    let seq = || -> Result<FunctionSequence> { Ok(resolved.sequence(max_index)?.with_norm(norm)) };
    let m_label = g.m_cap.label();

    let (report, table_csv, extra) = match mode {
        Mode::Kappa | Mode::Gamma | Mode::Tau => {
            let phi = trial(s, "arctan")?;
            let seq = seq()?;
            let table = match mode {
                Mode::Kappa => kappa_table(&seq, &pop, &phi, &g)?,
                Mode::Gamma => gamma_table(&seq, &pop, &phi, &g)?,
                _ => tau_table(&seq, &pop, &phi, &g)?,
            };
            let v = verdict(&table, th)?;
            (ctx.report(mode.label(), phi.name(), m_label, &pop, &v), table_bytes(&table)?, vec![])
        }
        Mode::Theta => {
            let gfun = resolved
                .periodic()
                .ok_or_else(|| Error::config("mode", "theta needs a periodic input"))?;
            let phi = trial(s, "arctan")?;
            let method = s.parse::<PartialSumMethod>("method")?.unwrap_or_default();
            let table = theta_table(gfun, &pop, &phi, &g, method)?;
            let v = verdict(&table, th)?;
            (ctx.report("theta", phi.name(), m_label, &pop, &v), table_bytes(&table)?, vec![])
        }
        Mode::Lambda => {
            let seq = seq()?;
            let r = s.parse::<f64>("R")?.unwrap_or(f64::INFINITY);
            let p_grid = match s.list::<f64>("p-grid")? {
                Some(p) => p,
                None => default_p_grid(r, DEFAULT_P_POINTS).map_err(|e| Error::config("R", e.to_string()))?,
            };
            let spec = natural_function(&seq, &pop, &p_grid, r, n_max.unwrap_or(g.max_index()))?;
            let rep = lambda_bar_verdict(&seq, &pop, &spec, &g, th)?;
            let details = serde_json::json!({
                "kappa_verdict": rep.kappa_verdict,
                "kappa_consistent": rep.kappa_consistent,
                "natural_function": spec,
            });
            let report = ctx
                .report("lambda", "gls", m_label, &pop, &rep.verdict)
                .with_details(&details)?;
            (report, table_bytes(&rep.table)?, vec![("psi.csv", psi_csv(&spec)?)])
        }
        Mode::Lp => {
            let seq = seq()?;
            let p = s.parse::<f64>("p")?.unwrap_or(2.0);
            let rep = lp_bar_verdict(&seq, &pop, p, &g, th)?;
            let details = serde_json::json!({
                "p": p,
                "pairwise_profile": rep.pairwise_profile,
                "pairwise_verdict": rep.pairwise_verdict,
            });
            let report = ctx
                .report("lp", &format!("p={p}"), m_label, &pop, &rep.verdict)
                .with_details(&details)?;
            (report, table_bytes(&rep.table)?, vec![])
        }
        Mode::InProb => {
            let seq = seq()?;
            let pairs = match s.get("pairs") {
                Some(v) => parse_pairs(v)?,
                None => default_pair_grid(&g.n_grid),
            };
            let t = in_probability_criterion(&seq, &pop, &pairs)?;
            let v = t.verdict(th)?;
            let mut buf = Vec::new();
            t.write_csv(&mut buf)?;
            (ctx.report("in-prob", "arctan", "pairs".into(), &pop, &v), buf, vec![])
        }
        Mode::Moment => {
            let seq = seq()?;
            let phi = trial(s, "power:2")?;
            let rep = moment_convergence_check(&seq, &pop, &phi, &g, th)?;
            let profile: Vec<ProfilePoint> = rep
                .n_grid
                .iter()
                .zip(&rep.moments)
                .map(|(&n, &v)| ProfilePoint {
                    n,
                    m_cap: n,
                    value: v,
                    std_err: 0.0,
                })
                .collect();
            let caveat = truncation_caveat(&profile, &pop.describe());
            let v = verdict_from_profile(&profile, th, false, caveat)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for (i, &n) in rep.n_grid.iter().enumerate() {
                w.serialize(MomentRow {
                    n,
                    moment: rep.moments[i],
                    running_sup: rep.running_sup[i],
                })?;
            }
            let buf = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            let report = ctx.report("moment", phi.name(), "n".into(), &pop, &v).with_details(&rep)?;
            (report, buf, vec![])
        }
    };
    Ok(Outcome {
        report,
        table_csv,
        extra,
        out: s.out_dir(),
    })
}

fn parse_pairs(v: &str) -> Result<Vec<(usize, usize)>> {
    v.split(',')
        .map(|p| {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| Error::config("pairs", format!("`{p}` is not of the form n:m")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::config("pairs", format!("`{t}`: {e}")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn psi_csv(spec: &crate::spaces::GrandLebesgueSpec) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "psi"])?;
    for (p, v) in spec.p_grid.iter().zip(&spec.psi) {
        w.write_record(&[format!("{p}"), format!("{v}")])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

#[derive(Serialize)]
struct SupVariantRow {
    n: usize,
    m: usize,
    value: f64,
}

#[derive(Serialize)]
struct FourierDetails {
    method: String,
    antonov: BTreeMap<String, f64>,
    method_discrepancy: Option<f64>,
    theta_sup_variant: Option<Vec<SupVariantRow>>,
}

/// Runs `fourier`.
pub fn fourier(s: &Settings) -> Result<Outcome> {
    let resolved = resolve_input(s, true)?;
    let gfun = resolved.periodic().expect("resolved as periodic").clone();
    let g = grid(s, resolved.default_grid())?;
    let th = thresholds(s, resolved.default_thresholds())?;
    let pop = match &resolved {
        Resolved::Entry(_) => resolved.population(s)?,
        _ => circle_population(s.parse::<usize>("nodes")?.unwrap_or(2048))?,
    };
    let method_sel = s.get("method").unwrap_or("coef");
    let (method, both) = match method_sel {
        "both" => (PartialSumMethod::Coefficients, true),
        other => (
            other
                .parse::<PartialSumMethod>()
                .map_err(|e| Error::config("method", e))?,
            false,
        ),
    };
    let antonov_sel = s.get("antonov");
    let variants: Vec<LnPlus> = match antonov_sel {
        None => vec![],
        Some("both") => vec![LnPlus::Printed, LnPlus::Conventional],
        Some(v) => vec![v.parse::<LnPlus>().map_err(|e| Error::config("antonov", e))?],
    };
    let table = theta_table(&gfun, &pop, &TrialFunction::arctan(), &g, method)?;
    let v = verdict(&table, th)?;

    let mut antonov = BTreeMap::new();
    for l in &variants {
        antonov.insert(l.label().to_string(), antonov_functional(&gfun, &pop, *l)?.value);
    }
    let method_discrepancy = if both {
        let mut worst = 0.0f64;
        for &n in &g.n_grid {
            for j in 0..64 {
                let x = std::f64::consts::TAU * (j as f64 + 0.5) / 64.0;
                let a = partial_sum(&gfun, n, x, PartialSumMethod::Coefficients)?;
                let b = partial_sum(&gfun, n, x, PartialSumMethod::Convolution)?;
                worst = worst.max((a - b).abs());
            }
        }
        Some(worst)
    } else {
        None
    };
    let sup_variant = if s.get("sup-variant").is_some_and(|v| v == "true") {
        Some(
            table
                .rows
                .iter()
                .map(|r| {
                    Ok(SupVariantRow {
                        n: r.n,
                        m: r.m_cap,
                        value: theta_sup_variant(&gfun, &pop, r.n, r.m_cap, method)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let interpretation = Interpretation {
        ln_plus: match antonov_sel {
            Some("conventional") => "conventional".into(),
            Some("both") => "printed+conventional".into(),
            _ => "printed".into(),
        },
        ..Interpretation::default()
    };
    let ctx = RunContext {
        settings: s,
        command: "fourier",
        input: resolved.name(),
        interpretation,
    };
    let details = FourierDetails {
        method: method_sel.to_string(),
        antonov,
        method_discrepancy,
        theta_sup_variant: sup_variant,
    };
    let report = ctx
        .report("theta", "arctan", g.m_cap.label(), &pop, &v)
        .with_details(&details)?;
    Ok(Outcome {
        report,
        table_csv: table_bytes(&table)?,
        extra: vec![],
        out: s.out_dir(),
    })
}

/// Runs `spaces`: λ verdict in the main report, ψ and the L_p tail alongside.
pub fn spaces(s: &Settings) -> Result<Outcome> {
    let resolved = resolve_input(s, false)?;
    let g = grid(s, resolved.default_grid())?;
    let th = thresholds(s, Thresholds::default())?;
    let pop = resolved.population(s)?;
    let norm = s.parse::<VectorNorm>("norm")?.unwrap_or_default();
    let r = s.parse::<f64>("R")?.unwrap_or(f64::INFINITY);
    let n_max = s.parse::<usize>("N-max")?.unwrap_or(g.max_index());
    if n_max == 0 {
        return Err(Error::config("N-max", "must be at least 1"));
    }
    let p_grid = match s.list::<f64>("p-grid")? {
        Some(p) => p,
        None => default_p_grid(r, DEFAULT_P_POINTS).map_err(|e| Error::config("R", e.to_string()))?,
    };
    let p = s.parse::<f64>("p")?.unwrap_or(2.0);
    let seq = resolved.sequence(g.max_index().max(n_max))?.with_norm(norm);
    let spec = natural_function(&seq, &pop, &p_grid, r, n_max).map_err(|e| match e {
        Error::UnsortedGrid { position } => Error::config("p-grid", format!("not increasing at {position}")),
        Error::BadSpec(m) => Error::config("p-grid", m),
        other => other,
    })?;
    let lam = lambda_bar_verdict(&seq, &pop, &spec, &g, th)?;
    let lp = lp_bar_verdict(&seq, &pop, p, &g, th)?;
    let details = serde_json::json!({
        "natural_function": spec,
        "kappa_verdict": lam.kappa_verdict,
        "kappa_consistent": lam.kappa_consistent,
        "lp": {
            "p": p,
            "verdict": lp.verdict.verdict,
            "tail_profile": lp.verdict.tail_profile,
            "caveat": lp.verdict.caveat,
            "pairwise_profile": lp.pairwise_profile,
            "pairwise_verdict": lp.pairwise_verdict,
        },
    });
    let ctx = RunContext {
        settings: s,
        command: "spaces",
        input: resolved.name(),
        interpretation: Interpretation {
            norm: format!("{norm:?}").to_lowercase(),
            ..Interpretation::default()
        },
    };
    let report = ctx
        .report("lambda", "gls", g.m_cap.label(), &pop, &lam.verdict)
        .with_details(&details)?;
    Ok(Outcome {
        report,
        table_csv: table_bytes(&lam.table)?,
        extra: vec![("psi.csv", psi_csv(&spec)?), ("lp_table.csv", table_bytes(&lp.table)?)],
        out: s.out_dir(),
    })
}

fn describe_entry(e: &CorpusEntry) -> String {
    let kind = match &e.input {
        CorpusInput::Sequence(s) => format!("sequence, dimension {}", s.dim()),
        CorpusInput::Periodic(_) => "periodic function on [0, 2π)".into(),
    };
    let lp: Vec<String> = e
        .ground_truth
        .lp_converges
        .iter()
        .map(|(p, c)| format!("p={p}: {}", yes_no(*c)))
        .collect();
    format!(
        "name:          {}\nsummary:       {}\nkind:          {kind}\ndefault mode:  {}\npopulation:    {}\nn grid:        {:?}\nm cap:         {}\nthresholds:    eps_pass = {}, eps_fail = {}\na.e.:          {}\nin measure:    {}\nL_p:           {}\nnotes:         {}\n",
        e.name,
        e.summary,
        e.mode.label(),
        serde_json::to_string(&e.population).unwrap_or_default(),
        e.n_grid,
        e.m_cap.label(),
        e.thresholds.eps_pass,
        e.thresholds.eps_fail,
        yes_no(e.ground_truth.ae_converges),
        yes_no(e.ground_truth.in_measure),
        lp.join(", "),
        e.oracle_notes
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate_trial(args: &ValidateArgs) -> Result<i32> {
    let phi = TrialFunction::parse(&args.phi).map_err(|e| Error::config("phi", e.to_string()))?;
    let grid = default_probe_grid();
    let report = validate_class(&phi, &grid, args.tol)?;
    let delta2 = if phi.class() == TrialClass::K {
        delta2_ratio(&phi, &grid).ok()
    } else {
        None
    };
    let out = serde_json::json!({ "validation": report, "delta2_ratio": delta2 });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if report.passed { 0 } else { 1 })
}

fn finish(outcome: Outcome) -> Result<i32> {
    write_outputs(&outcome.out, &outcome.report, &outcome.table_csv, &outcome.extra)?;
    let r = &outcome.report;
    let last = r.tail_profile.last();
    println!(
        "{} {} {}: S({}) = {:.6} -> {}",
        r.command,
        r.mode,
        r.input,
        last.map_or(0, |p| p.n),
        last.map_or(f64::NAN, |p| p.value),
        r.verdict.label()
    );
    eprintln!("{}", r.caveat);
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    Ok(r.verdict.exit_code())
}

fn with_workers<T: Send>(s: &Settings, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match s.parse::<usize>("workers")? {
        None => f(),
        Some(0) => Err(Error::config("workers", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?
            .install(f),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(a) => {
            let mut s = common_settings(&a.common)?;
            s.set("mode", a.mode.as_ref());
            s.set("input", a.input.as_ref());
            s.set("phi", a.phi.as_ref());
            s.set("norm", a.norm.as_ref());
            s.set("p", a.p.as_ref());
            s.set("pairs", a.pairs.as_ref());
            s.set("method", a.method.as_ref());
            let outcome = with_workers(&s, || analyze(&s))?;
            finish(outcome)
        }
        Command::Fourier(a) => {
            let mut s = common_settings(&a.common)?;
            s.set("input", a.g.as_ref());
            s.set("method", a.method.as_ref());
            s.set("antonov", a.antonov.as_ref());
            if a.sup_variant {
                s.set("sup-variant", Some(&"true".to_string()));
            }
            let outcome = with_workers(&s, || fourier(&s))?;
            finish(outcome)
        }
        Command::Spaces(a) => {
            let mut s = common_settings(&a.common)?;
            s.set("input", a.input.as_ref());
            s.set("p-grid", a.p_grid.as_ref());
            s.set("R", a.r.as_ref());
            s.set("N-max", a.n_max.as_ref());
            s.set("p", a.p.as_ref());
            s.set("norm", a.norm.as_ref());
            let outcome = with_workers(&s, || spaces(&s))?;
            finish(outcome)
        }
        Command::Corpus { action } => {
            match action {
                CorpusAction::List => {
                    for e in builtin_corpus() {
                        println!(
                            "{:<16} {:<6} a.e. {:<3} in measure {:<3} {}",
                            e.name,
                            e.mode.label(),
                            yes_no(e.ground_truth.ae_converges),
                            yes_no(e.ground_truth.in_measure),
                            e.summary
                        );
                    }
                }
                CorpusAction::Describe { name } => print!("{}", describe_entry(&lookup(&name)?)),
            }
            Ok(0)
        }
        Command::ValidateTrial(a) => validate_trial(&a),
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_parsing() {
        let s = Settings::parse_file("# run\nmode = kappa\nn_grid = 4, 8,16\nr = 8\n\n").unwrap();
        assert_eq!(s.get("mode"), Some("kappa"));
        assert_eq!(s.list::<usize>("n-grid").unwrap(), Some(vec![4, 8, 16]));
        assert_eq!(s.parse::<f64>("R").unwrap(), Some(8.0));
        assert!(matches!(
            Settings::parse_file("bogus = 1"),
            Err(Error::ConfigInvalid { field, .. }) if field == "bogus"
        ));
        assert!(matches!(
            Settings::parse_file("mode kappa"),
            Err(Error::ConfigInvalid { .. })
        ));
    }

    #[test]
    fn field_named_errors() {
        let s = Settings::parse_file("nodes = many").unwrap();
        assert!(matches!(s.parse::<usize>("nodes"), Err(Error::ConfigInvalid { field, .. }) if field == "nodes"));
        assert_eq!(parse_pairs("4:5, 8:16").unwrap(), vec![(4, 5), (8, 16)]);
        assert!(parse_pairs("4-5").is_err());
        assert_eq!("in-prob".parse::<Mode>().unwrap(), Mode::InProb);
    }

    #[test]
    fn execution_keys_are_not_reported() {
        let s = Settings::parse_file("out = x\nworkers = 3\nmode = lp").unwrap();
        let c = s.report_config();
        assert_eq!(c.len(), 1);
        assert_eq!(c["mode"], "lp");
    }
}
