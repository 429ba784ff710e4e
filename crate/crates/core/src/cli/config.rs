//! Flags, the optional `key = value` config file and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sobolev constants for each (n, q)
    Constants,
    /// Admissible k interval for each (n, q)
    Interval,
    /// Best k and the resulting threshold on lambda (or F at a fixed k)
    OptimizeK,
    /// Exact re-derivation of every coefficient identity
    AlgebraVerify,
    /// Numerical checks on the round sphere
    SphereVerify,
    /// Newton solves of -□u + λu = u^q from random positive starts
    PdeSolve,
    /// Every command above with the same parameters
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Interval => "interval",
            Command::OptimizeK => "optimize-k",
            Command::AlgebraVerify => "algebra-verify",
            Command::SphereVerify => "sphere-verify",
            Command::PdeSolve => "pde-solve",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ksl", version, about = "Sobolev constants and uniqueness checks on Kähler manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: Params,
}

/// Every flag is optional; unset values fall back to the config file and
/// then to the defaults of [`RunConfig`].
#[derive(Debug, Default, Args)]
pub struct Params {
    /// Complex dimensions, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Exponents, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Evenly spaced exponents as start:stop:count
    #[arg(long = "q-grid", global = true)]
    pub q_grid: Option<String>,
    /// Parameter k, or "auto" to optimize
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// First nonzero eigenvalue of □
    #[arg(long, global = true)]
    pub lambda1: Option<f64>,
    /// Coefficient λ of the PDE
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    /// Spherical-harmonic band limit
    #[arg(long = "L", global = true)]
    pub band: Option<usize>,
    /// Number of random starts for pde-solve
    #[arg(long, global = true)]
    pub count: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (overridden by KSL_OUT)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// File of `key = value` lines using the flag names as keys
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Choice of `k` for `optimize-k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KChoice {
    Auto,
    Value(f64),
}

impl Serialize for KChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KChoice::Auto => s.serialize_str("auto"),
            KChoice::Value(k) => s.serialize_f64(*k),
        }
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Vec<u32>,
    pub q: Vec<f64>,
    pub k: KChoice,
    pub lambda1: f64,
    pub lambda: f64,
    #[serde(rename = "L")]
    pub band: usize,
    pub count: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        RunConfig {
            command,
            n: vec![2],
            q: vec![2.0],
            k: KChoice::Auto,
            lambda1: 1.0,
            lambda: 0.4,
            band: 16,
            count: 1,
            seed: 7,
            format: Format::Json,
            out: PathBuf::from("ksl-out"),
        }
    }

    /// Every `(n, q)` pair, `n` outermost.
    pub fn tuples(&self) -> Vec<(u32, f64)> {
        self.n.iter().flat_map(|&n| self.q.iter().map(move |&q| (n, q))).collect()
    }

    /// Checks the values every module requires before anything runs.
    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n.iter().find(|&&n| n < 1) {
            return Err(Error::Domain(format!("complex dimension n = {n} must be at least 1")));
        }
        if let Some(q) = self.q.iter().find(|&&q| !(q > 1.0)) {
            return Err(Error::Domain(format!("exponent q = {q} must exceed 1")));
        }
        if !(self.lambda1 >= 1.0) {
            return Err(Error::Domain(format!("lambda1 = {} must be at least 1", self.lambda1)));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::Domain(format!("lambda = {} must be positive", self.lambda)));
        }
        if self.band < 2 {
            return Err(Error::Domain(format!("band limit L = {} must be at least 2", self.band)));
        }
        if self.count == 0 {
            return Err(Error::Domain("count must be at least 1".into()));
        }
        if let KChoice::Value(k) = self.k {
            if !(k > 0.0) {
                return Err(Error::Domain(format!("k = {k} must be positive")));
            }
        }
        Ok(())
    }
}

fn parse_k(s: &str) -> Result<KChoice> {
    if s.trim().eq_ignore_ascii_case("auto") {
        return Ok(KChoice::Auto);
    }
    s.trim().parse().map(KChoice::Value).map_err(|_| Error::Config(format!("k must be a number or \"auto\", got {s:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad value {x:?} for {key}")))).collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad value {s:?} for {key}")))
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Config(format!("q-grid must be start:stop:count, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let c: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match c {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..c).map(|i| a + (b - a) * i as f64 / (c - 1) as f64).collect()),
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Flags over config file over defaults. `env_out` (from `KSL_OUT`) beats
/// both for the output directory.
pub fn resolve(cli: Cli, env_out: Option<PathBuf>) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(cli.command);
    if let Some(path) = &cli.params.config {
        for (key, value) in read_config_file(path)? {
            match key.as_str() {
                "n" => cfg.n = parse_list(&key, &value)?,
                "q" => cfg.q = parse_list(&key, &value)?,
                "q-grid" | "q_grid" => cfg.q = parse_grid(&value)?,
                "k" => cfg.k = parse_k(&value)?,
                "lambda1" => cfg.lambda1 = parse_one(&key, &value)?,
                "lambda" => cfg.lambda = parse_one(&key, &value)?,
                "L" | "band" => cfg.band = parse_one(&key, &value)?,
                "count" => cfg.count = parse_one(&key, &value)?,
                "seed" => cfg.seed = parse_one(&key, &value)?,
                "out" => cfg.out = PathBuf::from(value),
                "format" => {
                    cfg.format = Format::from_str(&value, true).map_err(|_| Error::Config(format!("unknown format {value:?}")))?
                }
                _ => return Err(Error::Config(format!("unknown config key {key:?}"))),
            }
        }
    }
    let p = cli.params;
    if !p.n.is_empty() {
        cfg.n = p.n;
    }
    if let Some(g) = p.q_grid {
        cfg.q = parse_grid(&g)?;
    }
    if !p.q.is_empty() {
        cfg.q = p.q;
    }
    if let Some(k) = p.k {
        cfg.k = parse_k(&k)?;
    }
    cfg.lambda1 = p.lambda1.unwrap_or(cfg.lambda1);
    cfg.lambda = p.lambda.unwrap_or(cfg.lambda);
    cfg.band = p.band.unwrap_or(cfg.band);
    cfg.count = p.count.unwrap_or(cfg.count);
    cfg.seed = p.seed.unwrap_or(cfg.seed);
    cfg.format = p.format.unwrap_or(cfg.format);
    if let Some(out) = p.out {
        cfg.out = out;
    }
    if let Some(out) = env_out {
        cfg.out = out;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ksl").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_beat_config_and_env_beats_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# sample\nn = 3\nq = 1.2, 1.4\nlambda1 = 2\nout = from-file\nformat = csv\n").unwrap();
        let c = resolve(cli(&["constants", "--config", path.to_str().unwrap(), "--n", "4", "--out", "flag"]), None).unwrap();
        assert_eq!(c.n, vec![4]);
        assert_eq!(c.q, vec![1.2, 1.4]);
        assert_eq!(c.lambda1, 2.0);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.out, PathBuf::from("flag"));
        let c = resolve(cli(&["constants", "--out", "flag"]), Some(PathBuf::from("env"))).unwrap();
        assert_eq!(c.out, PathBuf::from("env"));
    }

    #[test]
    fn grid_and_k() {
        let c = resolve(cli(&["optimize-k", "--q-grid", "1.1:1.5:5", "--k", "0.3"]), None).unwrap();
        assert_eq!(c.q.len(), 5);
        assert!((c.q[4] - 1.5).abs() < 1e-15);
        assert_eq!(c.k, KChoice::Value(0.3));
        assert!(resolve(cli(&["optimize-k", "--k", "soon"]), None).is_err());
    }

    #[test]
    fn bad_config_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        std::fs::write(&path, "colour = red\n").unwrap();
        assert!(matches!(resolve(cli(&["all", "--config", path.to_str().unwrap()]), None), Err(Error::Config(_))));
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::defaults(Command::Constants);
        assert!(c.validate().is_ok());
        c.q = vec![0.5];
        assert!(matches!(c.validate(), Err(Error::Domain(_))));
    }
}
