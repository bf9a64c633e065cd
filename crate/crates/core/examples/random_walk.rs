// Monte Carlo τ for a random walk in ℝ² with summable steps Z_j/j².

use std::error::Error;

use aeconv::corpus::lookup;
use aeconv::criterion::{tau_table, verdict, WindowGrid};
use aeconv::measure::monte_carlo_population;
use aeconv::trial::TrialFunction;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let entry = lookup("random-walk-2d")?;
    let seq = entry.sequence(0)?;
    let pop = monte_carlo_population(7, 2000)?;
    let table = tau_table(&seq, &pop, &TrialFunction::arctan(), &WindowGrid::default())?;
    let v = verdict(&table, entry.thresholds)?;
    for p in &v.tail_profile {
        println!("  tau({:>3}) = {:.2e} ± {:.1e}", p.n, p.value, p.std_err);
    }
    println!("verdict: {} ({})", v.verdict.label(), pop.describe());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
