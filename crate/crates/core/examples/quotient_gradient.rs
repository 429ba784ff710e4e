//! The energy quotient, its gradient and a finite-difference check.
//!
//! `cargo run --example quotient_gradient`

use kahler_sobolev::spectral::{self, corpus, SphereField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kahler_sobolev::Result<()> {
    let grid = spectral::make_grid(12)?;
    let (lambda, q) = (0.6, 2.0);
    let constant = SphereField::constant(&grid, 1.0);
    let g = spectral::quotient_gradient(&constant, lambda, q)?;
    println!("constants are critical: |∇Q(1)| = {:.2e}", g.l2_norm());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = corpus::random_positive(&grid, &mut rng, 1.0, 0.4);
    println!("Q(u) = {:.9}, Q(1) = {:.9}", spectral::quotient(&u, lambda, q)?, spectral::quotient(&constant, lambda, q)?);
    for c in corpus::gradient_fd_check(&u, lambda, q, 5, 11)? {
        println!("  analytic {:+.10e}  differences {:+.10e}  rel {:.1e}", c.analytic, c.finite_difference, c.rel_error);
    }
    Ok(())
}
