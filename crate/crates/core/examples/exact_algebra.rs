//! Exact rational functions and quadratic surds.
//!
//! `cargo run --example exact_algebra`

use kahler_sobolev::algebra::parse::parse;
use kahler_sobolev::algebra::{rf_equal, Point, Surd, Var};
use num_rational::BigRational;

fn main() -> kahler_sobolev::Result<()> {
    // two spellings of the same function
    let a = parse("(k^2 - 1)/(k - 1) + q/(q*n)")?;
    let b = parse("k + 1 + 1/n")?;
    println!("a = {a}\nb = {b}\nequal: {}", rf_equal(&a, &b));

    let mut pt = Point::new();
    pt.insert(Var::K, BigRational::new(3.into(), 7.into()));
    pt.insert(Var::Q, BigRational::new(5.into(), 2.into()));
    pt.insert(Var::N, BigRational::from_integer(2.into()));
    println!("a at k = 3/7, q = 5/2, n = 2: {}", a.value_at(&pt)?);

    // (1 + √w)(1 - √w) = 1 - w with w = (n+1)(n+1-(n-1)q)
    let w = parse("(n + 1)*(n + 1 - (n - 1)*q)")?;
    let one = parse("1")?;
    let plus = Surd::new(one.clone(), one.clone(), w.clone());
    let minus = Surd::new(one.clone(), -&one, w.clone());
    let prod = plus.mul(&minus)?;
    let want = Surd::rational(&one - &w, &w);
    println!("(1 + √w)(1 - √w) = 1 - w: {}", prod.sub(&want)?.is_zero());
    Ok(())
}
