// Dirichlet kernels, partial sums of a square wave, θ, and the Antonov integral.

use std::error::Error;
use std::f64::consts::{FRAC_PI_2, TAU};

use aeconv::corpus::square_wave;
use aeconv::criterion::{Thresholds, WindowGrid};
use aeconv::fourier::{
    antonov_both, circle_population, difference_kernel, dirichlet_kernel, partial_sum, theta_verdict,
    PartialSumMethod,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("D_5(0) = {:.6} = 11/2pi = {:.6}", dirichlet_kernel(5, 0.0), 11.0 / TAU);
    println!(
        "D_5(1) - D_3(1) = {:.12}, difference kernel {:.12}",
        dirichlet_kernel(5, 1.0) - dirichlet_kernel(3, 1.0),
        difference_kernel(5, 3, 1.0)?
    );

    let g = square_wave();
    for n in [1, 9, 33] {
        let coef = partial_sum(&g, n, FRAC_PI_2, PartialSumMethod::Coefficients)?;
        let conv = partial_sum(&g, n, FRAC_PI_2, PartialSumMethod::Convolution)?;
        println!("s_{n}(pi/2): coefficients {coef:.8}, convolution {conv:.8}");
    }

    let pop = circle_population(1024)?;
    let grid = WindowGrid::dyadic(4, 64, Default::default());
    let (_, v) = theta_verdict(&g, &pop, &grid, Thresholds::new(0.05, 0.2)?, PartialSumMethod::Coefficients)?;
    for p in &v.tail_profile {
        println!("  theta({:>2}) = {:.5}", p.n, p.value);
    }
    println!("verdict at eps_pass = 0.05: {}", v.verdict.label());

    let a = antonov_both(&g, &pop)?;
    println!("Antonov integral: printed {:.6}, conventional {:.6}", a.printed.value, a.conventional.value);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
