// The typewriter sequence converges in measure and in every L_p, but at no
// point. The κ profile stays at π/4 while the pairwise criteria vanish.

use std::error::Error;

use aeconv::corpus::lookup;
use aeconv::criterion::{in_probability_criterion, kappa_table, verdict, MCapRule, Thresholds, WindowGrid};
use aeconv::spaces::lp_bar_verdict;
use aeconv::trial::TrialFunction;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let entry = lookup("typewriter")?;
    let pop = entry.population.build(0)?;
    let seq = entry.sequence(0)?;

    let table = kappa_table(&seq, &pop, &TrialFunction::arctan(), &entry.grid())?;
    let k = verdict(&table, Thresholds::default())?;
    println!("kappa, one full pass per window:");
    for p in &k.tail_profile {
        println!("  S({:>3}) = {:.6}  (m_cap {})", p.n, p.value, p.m_cap);
    }
    println!("  verdict {}", k.verdict.label());

    let grid = WindowGrid::dyadic(16, 1024, MCapRule::default());
    let pairs: Vec<(usize, usize)> = grid.n_grid.iter().flat_map(|&n| [(n, n + 1), (n, 2 * n)]).collect();
    let ip = in_probability_criterion(&seq, &pop, &pairs)?;
    let v = ip.verdict(Thresholds::default())?;
    println!("in probability: S(1024) = {:.6}, verdict {}", v.tail_profile.last().unwrap().value, v.verdict.label());

    let lp = lp_bar_verdict(&seq, &pop, 1.0, &entry.grid(), Thresholds::default())?;
    println!("L_1 tail: S(128) = {:.6}, verdict {}", lp.verdict.tail_profile.last().unwrap().value, lp.verdict.verdict.label());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
