// Class checks for trial functions and the Δ₂ ratio of unbounded ones.

use std::error::Error;

use aeconv::trial::{default_probe_grid, delta2_ratio, validate_class, TrialFunction, DEFAULT_CONTINUITY_TOL};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = default_probe_grid();
    for sel in ["arctan", "ratio1", "ratio2", "power:2", "power:0.5", "expm1"] {
        let phi = TrialFunction::parse(sel)?;
        let r = validate_class(&phi, &grid, DEFAULT_CONTINUITY_TOL)?;
        let d2 = delta2_ratio(&phi, &grid).map(|v| format!("{v:.3e}")).unwrap_or_else(|e| e.to_string());
        println!(
            "{sel:<10} class {:?}: passed {:<5} max {:.3e}  delta2 {d2}",
            r.declared_class, r.passed, r.boundedness.empirical_max
        );
    }
    let identity = TrialFunction::custom("identity", aeconv::trial::TrialClass::KB, |x| x);
    let r = validate_class(&identity, &grid, DEFAULT_CONTINUITY_TOL)?;
    println!("identity: positivity {} evenness {}", r.positivity.passed, r.evenness.passed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
