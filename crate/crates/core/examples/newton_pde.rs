//! Newton-Krylov solves of `-□u + λu = u^q` from random positive starts.
//! The constant `λ^{1/(q-1)}` solves the equation for every `λ`; for small
//! `λ` it is the only positive solution, and for `λ(q-1) > λ₁ = 1` it is
//! unstable but still attracts nearby starts.
//!
//! `cargo run --release --example newton_pde`

use std::time::Instant;

use kahler_sobolev::spectral::{self, corpus, NewtonOptions};

fn main() -> kahler_sobolev::Result<()> {
    let grid = spectral::make_grid(16)?;
    let opts = NewtonOptions::default();
    for lambda in [0.4, 0.9, 1.6] {
        let start = Instant::now();
        let runs = corpus::newton_corpus(&grid, lambda, 2.0, 20, 7, &opts)?;
        let constant = runs.iter().filter(|r| r.is_constant).count();
        let converged = runs.iter().filter(|r| r.converged).count();
        let steps: usize = runs.iter().map(|r| r.iterations).sum();
        println!(
            "λ = {lambda}: {converged}/20 converged, {constant} constant (expected {}), {steps} Newton steps, {:.2} s",
            lambda,
            start.elapsed().as_secs_f64()
        );
        for r in runs.iter().filter(|r| r.converged && !r.is_constant).take(3) {
            println!("    nonconstant solution: min {:.4}, residual {:.1e}", r.min_value, r.residual);
        }
    }
    Ok(())
}
