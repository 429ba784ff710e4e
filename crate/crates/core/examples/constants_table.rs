//! Sobolev constants for a few dimensions across the admissible exponents.
//!
//! `cargo run --example constants_table`

use kahler_sobolev::constants::{admissible_grid, ConstantsReport};

fn main() -> kahler_sobolev::Result<()> {
    println!("{:>3} {:>8} {:>10} {:>10} {:>10} {:>10}", "n", "q", "(q-1)/2", "C_S", "Riemann", "λ₁ lower");
    for dims in admissible_grid(1..=4, 4) {
        let c = ConstantsReport::compute(dims)?;
        println!(
            "{:>3} {:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            c.n, c.q, c.c_conj, c.c_s, c.c_riem_bridged, c.lambda1_lower
        );
    }
    Ok(())
}
