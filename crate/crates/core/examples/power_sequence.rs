// κ table and verdict for f_n(x) = x^n on [0, 1].

use std::error::Error;
use std::f64::consts::{FRAC_PI_4, LN_2};

use aeconv::criterion::{kappa_table, kappa_window, verdict, Thresholds, WindowGrid};
use aeconv::measure::{uniform_population, QuadratureRule};
use aeconv::sequence::FunctionSequence;
use aeconv::trial::TrialFunction;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pop = uniform_population(0.0, 1.0, 200, QuadratureRule::GaussLegendre)?;
    let seq = FunctionSequence::scalar("power", |k, x| x.scalar().powi(k as i32));
    let phi = TrialFunction::arctan();

    let k1 = kappa_window(&seq, &pop, &phi, 1, 10)?;
    println!("kappa_1^10 = {:.10}  (pi/4 - ln2/2 = {:.10})", k1.value, FRAC_PI_4 - LN_2 / 2.0);

    let table = kappa_table(&seq, &pop, &phi, &WindowGrid::default())?;
    let v = verdict(&table, Thresholds::default())?;
    for p in &v.tail_profile {
        println!("  S({:>3}) = {:.6}", p.n, p.value);
    }
    println!("verdict: {}", v.verdict.label());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
