//! Builds reports through the library instead of the `ksl` binary.
//!
//! `cargo run --example cli_reports`

use kahler_sobolev::cli::{self, Command, Format, RunConfig};

fn main() -> kahler_sobolev::Result<()> {
    let mut cfg = RunConfig::defaults(Command::OptimizeK);
    cfg.n = vec![2, 3];
    cfg.q = vec![1.2, 1.4];
    cfg.format = Format::Csv;
    let report = cli::execute(&cfg);
    print!("{}", cli::render(&cfg, &report)?);
    println!("all checks pass: {}", report.passed());

    // a domain error becomes a report entry
    cfg.command = Command::Constants;
    cfg.q = vec![7.0];
    let report = cli::execute(&cfg);
    println!("errors: {:?}", report.errors);
    Ok(())
}
