// Every builtin corpus entry under its default mode, against its ground truth.

use std::error::Error;

use aeconv::corpus::{builtin_corpus, PopulationHint};
use aeconv::criterion::{gamma_table, kappa_table, tau_table, verdict, TableMode, Verdict};
use aeconv::fourier::{theta_table, PartialSumMethod};
use aeconv::trial::TrialFunction;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let phi = TrialFunction::arctan();
    for entry in builtin_corpus() {
        let hint = match entry.population {
            PopulationHint::MonteCarlo { .. } => PopulationHint::MonteCarlo { paths: 2000 },
            ref h => h.clone(),
        };
        let pop = hint.build(11)?;
        let grid = entry.grid();
        let table = match (entry.mode, entry.periodic()) {
            (TableMode::Theta, Some(g)) => theta_table(g, &pop, &phi, &grid, PartialSumMethod::Coefficients)?,
            (mode, _) => {
                let seq = entry.sequence(grid.max_index())?;
                match mode {
                    TableMode::Tau => tau_table(&seq, &pop, &phi, &grid)?,
                    TableMode::Gamma => gamma_table(&seq, &pop, &phi, &grid)?,
                    _ => kappa_table(&seq, &pop, &phi, &grid)?,
                }
            }
        };
        let v = verdict(&table, entry.thresholds)?;
        let expected = if entry.ground_truth.ae_converges { Verdict::Converges } else { Verdict::Diverges };
        println!(
            "{:<16} {:<6} S = {:<10.3e} {:<13} expected {:<10} {}",
            entry.name,
            entry.mode.label(),
            v.tail_profile.last().unwrap().value,
            v.verdict.label(),
            expected.label(),
            if v.verdict == expected { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
