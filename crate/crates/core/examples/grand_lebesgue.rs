// Natural function ψ(p) = sup_n |f_n|_p and the λ functional.

use std::error::Error;

use aeconv::criterion::{Thresholds, WindowGrid};
use aeconv::measure::{uniform_population, QuadratureRule};
use aeconv::sequence::FunctionSequence;
use aeconv::spaces::{default_p_grid, gls_norm, lambda_bar_verdict, natural_function};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pop = uniform_population(0.0, 1.0, 200, QuadratureRule::GaussLegendre)?;
    let seq = FunctionSequence::scalar("recip-power", |k, x| x.scalar().powi(k as i32) / k as f64);
    let grid = WindowGrid::default();
    let spec = natural_function(&seq, &pop, &default_p_grid(8.0, 12)?, 8.0, grid.max_index())?;
    for (p, psi) in spec.p_grid.iter().zip(&spec.psi).step_by(3) {
        println!("  psi({p:.3}) = {psi:.6}");
    }
    println!("||f_1||_G = {:.12}", gls_norm(|x| x.scalar(), &pop, &spec)?);

    let rep = lambda_bar_verdict(&seq, &pop, &spec, &grid, Thresholds::default())?;
    for p in &rep.verdict.tail_profile {
        println!("  lambda({:>3}) = {:.6}", p.n, p.value);
    }
    println!(
        "lambda verdict {}, kappa verdict {:?}, consistent: {}",
        rep.verdict.verdict.label(),
        rep.kappa_verdict,
        rep.kappa_consistent
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
