//! The admissible interval for `k` and how it closes at the critical exponent.
//!
//! `cargo run --example k_interval`

use kahler_sobolev::constants::{k_interval, k_lower_bound_eps0, Dimensions};

fn main() -> kahler_sobolev::Result<()> {
    let n = 3;
    let critical = (n as f64 + 1.0) / (n as f64 - 1.0);
    for i in 1..=8 {
        let q = 1.0 + (critical - 1.0) * i as f64 / 8.0;
        let dims = Dimensions::new(n, q)?;
        let iv = k_interval(dims)?;
        println!(
            "q = {q:.4}  k in [{:.6}, {:.6}]  product {:.3e}  lower bound at ε = 0: {:.6}{}",
            iv.k_lo,
            iv.k_hi,
            iv.product() - 1.0,
            k_lower_bound_eps0(dims)?,
            if iv.is_degenerate() { "  (degenerate)" } else { "" }
        );
    }
    // n = 1 has no finite interval
    match k_interval(Dimensions::new(1, 2.0)?) {
        Ok(iv) => println!("unexpected interval {iv:?}"),
        Err(e) => println!("n = 1: {e}"),
    }
    Ok(())
}
