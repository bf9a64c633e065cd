// Turning a σ-finite measure into an equivalent probability population.
//
// The half-line [0, ∞) is cut into unit blocks; block m gets weight 2^-m
// (renormalized over the kept blocks) spread by Lebesgue mass inside it.

use std::error::Error;

use aeconv::measure::{
    equivalent_probability_measure, half_line_blocks, integrate, PartitionBlock, QuadratureRule,
    DEFAULT_TRUNCATION,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let blocks: Vec<PartitionBlock> = (1..=3)
        .map(|m| PartitionBlock::interval(m, (m - 1) as f64, m as f64, QuadratureRule::Midpoint))
        .collect();
    let pop = equivalent_probability_measure(&blocks, 4)?;
    println!("three unit blocks, total weight {:.15}", pop.total_weight());
    for m in 1..=3 {
        println!("  block {m}: {:.15}", pop.block_weight(m).unwrap_or(0.0));
    }
    assert!((pop.block_weight(3).unwrap() - 1.0 / 7.0).abs() < 1e-15);

    let pop = equivalent_probability_measure(
        &half_line_blocks(DEFAULT_TRUNCATION, QuadratureRule::GaussLegendre),
        16,
    )?;
    let mean = integrate(|x| x.scalar(), &pop)?;
    println!(
        "half-line, {} blocks: E[x] = {:.6} over {} nodes",
        DEFAULT_TRUNCATION,
        mean.value,
        pop.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
