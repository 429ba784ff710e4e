//! The sharp Sobolev inequality on the sphere, its equality case to second
//! order, and what happens with a constant that is too small.
//!
//! `cargo run --example sobolev_inequality`

use kahler_sobolev::spectral::{self, corpus, SphereField};

fn main() -> kahler_sobolev::Result<()> {
    let grid = spectral::make_grid(16)?;
    let z = SphereField::z(&grid);
    let phi = SphereField::constant(&grid, 1.0).lincomb(1.0, &z, 1.0);
    for c in [0.5, 0.45, 0.3] {
        let r = spectral::sobolev_check(&phi, 2.0, c, "1+z")?;
        println!("φ = 1+z, q = 2, C = {c}: lhs {:.6}, rhs {:.6}, margin {:+.6}", r.lhs, r.rhs, r.margin);
    }
    let trials = corpus::sobolev_corpus(&grid, 2.0, 0.5, 100, 1)?;
    let worst = trials.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).expect("nonempty");
    println!("100 random fields at C = 0.5: smallest margin {:.3e} ({})", worst.margin, worst.trial);

    for q in [1.5, 2.0, 3.0] {
        let p = spectral::perturbation_tcoeff(&z, q, 0.5)?;
        println!(
            "t² terms along 1 + t z, q = {q}: lhs {:.6}, rhs {:.6}, finite-difference fit {:.6}",
            p.lhs_t2, p.rhs_t2, p.fitted_t2
        );
    }
    Ok(())
}
