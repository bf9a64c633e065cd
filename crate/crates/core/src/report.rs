//! JSON verdict reports, CSV tables, and atomic file output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::criterion::{ConvergenceVerdict, ProfilePoint, Thresholds, Verdict};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Interpretation choices in effect for a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interpretation {
    /// `pointwise`: θ integrates the pointwise window maximum over x.
    pub theta_form: String,
    pub ln_plus: String,
    pub norm: String,
    /// Which L_p tail profile drives the L_p verdict.
    pub lp_profile: String,
}

impl Default for Interpretation {
    fn default() -> Self {
        Self {
            theta_form: "pointwise".into(),
            ln_plus: "printed".into(),
            norm: "euclidean".into(),
            lp_profile: "sup".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub command: String,
    pub mode: String,
    pub input: String,
    pub phi: String,
    pub n_grid: Vec<usize>,
    pub m_cap: String,
    pub population: String,
    pub verdict: Verdict,
    pub tail_profile: Vec<ProfilePoint>,
    pub thresholds: Thresholds,
    pub caveat: String,
    pub warnings: Vec<String>,
    pub interpretation: Interpretation,
    pub config: BTreeMap<String, String>,
    /// Mode-specific results.
    pub details: serde_json::Value,
}

impl Report {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        command: &str,
        mode: &str,
        input: &str,
        phi: &str,
        m_cap: String,
        population: String,
        verdict: &ConvergenceVerdict,
        interpretation: Interpretation,
        config: BTreeMap<String, String>,
    ) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            version: TOOL_VERSION.into(),
            command: command.into(),
            mode: mode.into(),
            input: input.into(),
            phi: phi.into(),
            n_grid: verdict.tail_profile.iter().map(|p| p.n).collect(),
            m_cap,
            population,
            verdict: verdict.verdict,
            tail_profile: verdict.tail_profile.clone(),
            thresholds: verdict.thresholds,
            caveat: verdict.caveat.clone(),
            warnings: verdict.warnings.clone(),
            interpretation,
            config,
            details: serde_json::Value::Null,
        }
    }

    pub fn with_details<T: Serialize>(mut self, details: &T) -> Result<Self> {
        self.details = serde_json::to_value(details)?;
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// `n,m_cap,value,std_err` rows.
pub fn profile_csv(profile: &[ProfilePoint]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "m_cap", "value", "std_err"])?;
    for p in profile {
        w.write_record(&[
            p.n.to_string(),
            p.m_cap.to_string(),
            format!("{}", p.value),
            format!("{}", p.std_err),
        ])?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::config("out", format!("`{}` is not a file path", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// The standard output set: `verdict.json`, `table.csv`, `tail_profile.csv`,
/// plus any extra named files.
pub fn write_outputs(
    dir: &Path,
    report: &Report,
    table_csv: &[u8],
    extra: &[(&str, Vec<u8>)],
) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_atomic(&dir.join("table.csv"), table_csv)?;
    write_atomic(&dir.join("tail_profile.csv"), &profile_csv(&report.tail_profile)?)?;
    for (name, bytes) in extra {
        write_atomic(&dir.join(name), bytes)?;
    }
    write_atomic(&dir.join("verdict.json"), report.to_json()?.as_bytes())?;
    Ok(())
}
