//! Quadrature grid, harmonic transforms and the spectrum of `-□` on the
//! round sphere.
//!
//! `cargo run --example sphere_spectrum`

use kahler_sobolev::spectral::{self, SphereField};

fn main() -> kahler_sobolev::Result<()> {
    for band in [4, 8, 16] {
        let grid = spectral::make_grid(band)?;
        let (lambda1, mult) = spectral::lambda1_rayleigh(&grid)?;
        let z2 = SphereField::z(&grid).map_pointwise(|v| v * v)?.average();
        println!(
            "L = {band:>2}: {} x {} nodes, area - 4π = {:.1e}, λ₁ = {lambda1:.12} (x{mult}), avg z² - 1/3 = {:.1e}",
            grid.nlat(),
            grid.nlon(),
            grid.total_area() - 4.0 * std::f64::consts::PI,
            z2 - 1.0 / 3.0
        );
    }
    // a degree-3 field: -□ acts as l(l+1)/2 = 6
    let grid = spectral::make_grid(8)?;
    let f = SphereField::from_fn(&grid, |[x, y, z]| x * y * z)?;
    let ratio = -spectral::box_op(&f).inner(&f) / f.inner(&f);
    println!("xyz: ⟨-□f, f⟩/⟨f, f⟩ = {ratio:.12}");
    Ok(())
}
