//! Best choice of `k` and the resulting range of `λ` with only constant
//! positive solutions, for increasing `λ₁`.
//!
//! `cargo run --example optimize_k`

use kahler_sobolev::constants::{cs_bm, f_of_k, optimize_k, Dimensions};

fn main() -> kahler_sobolev::Result<()> {
    let dims = Dimensions::new(2, 2.0)?;
    println!("1/(2 C_S) = {:.9}", 0.5 / cs_bm(dims)?);
    for lambda1 in [1.0, 1.5, 2.0, 5.0, 20.0] {
        let opt = optimize_k(dims, lambda1)?;
        let at_lo = f_of_k(dims, opt.k_lo, lambda1)?;
        println!(
            "λ₁ = {lambda1:>4}: k* = {:.6} in [{:.4}, {:.4}], threshold {:.9} (F at k_lo {:.9})",
            opt.k_star, opt.k_lo, opt.k_hi, opt.lambda_threshold, at_lo
        );
    }
    Ok(())
}
