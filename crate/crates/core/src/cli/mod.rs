//! The `ksl` command line: argument parsing, dispatch and report files.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or a module
//! error (reported verbatim), 2 on bad flags or an unreadable config.

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

pub use config::{Cli, Command, Format, KChoice, RunConfig};
pub use report::Report;

use crate::Result;

/// Builds the report for a resolved configuration without touching disk.
pub fn execute(cfg: &RunConfig) -> Report {
    if let Err(e) = cfg.validate() {
        let mut rep = Report::default();
        rep.error(&e);
        return rep;
    }
    match cfg.command {
        Command::Constants => commands::constants(cfg),
        Command::Interval => commands::interval(cfg),
        Command::OptimizeK => commands::optimize_k(cfg),
        Command::AlgebraVerify => commands::algebra_verify(cfg),
        Command::SphereVerify => commands::sphere_verify(cfg),
        Command::PdeSolve => commands::pde_solve(cfg),
        Command::All => {
            let mut rep = Report::default();
            for f in [
                commands::constants,
                commands::interval,
                commands::optimize_k,
                commands::algebra_verify,
                commands::sphere_verify,
                commands::pde_solve,
            ] {
                rep.merge(f(cfg));
            }
            rep
        }
    }
}

/// Config echo placed in every report.
pub fn config_value(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

/// Renders the report in the configured format.
pub fn render(cfg: &RunConfig, rep: &Report) -> Result<String> {
    match cfg.format {
        Format::Json => Ok(rep.to_json(&config_value(cfg))),
        Format::Csv => rep.to_csv(),
    }
}

fn write_report(cfg: &RunConfig, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.out)?;
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let path = cfg.out.join(format!("{}.{ext}", cfg.command.name()));
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Entry point of the `ksl` binary.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_out = std::env::var_os("KSL_OUT").map(PathBuf::from);
    run_with(argv, env_out, &mut std::io::stdout(), &mut std::io::stderr())
}

/// [`run`] with the environment and output streams made explicit.
pub fn run_with<I, T>(argv: I, env_out: Option<PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let cfg = match config::resolve(cli, env_out) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "ksl: {e}");
            return 2;
        }
    };
    let start = Instant::now();
    let rep = execute(&cfg);
    let elapsed = start.elapsed().as_secs_f64();
    for e in &rep.errors {
        let _ = writeln!(err, "ksl: {e}");
    }
    let emitted = render(&cfg, &rep).and_then(|text| {
        let _ = write!(out, "{text}");
        write_report(&cfg, &text)
    });
    match emitted {
        Ok(path) => {
            let failed = rep.checks.iter().filter(|c| !c.pass).count();
            let _ = writeln!(
                err,
                "ksl {}: {} checks, {failed} failed, {} errors in {elapsed:.2} s; report at {}",
                cfg.command.name(),
                rep.checks.len(),
                rep.errors.len(),
                path.display()
            );
            if let Some(Some(summary)) = rep.results.get("pde.summary").map(|v| v.as_str()) {
                let _ = writeln!(err, "{summary}");
            }
            for c in rep.checks.iter().filter(|c| !c.pass) {
                let _ = writeln!(err, "FAILED {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
            }
            i32::from(!rep.passed())
        }
        Err(e) => {
            let _ = writeln!(err, "ksl: {e}");
            1
        }
    }
}
