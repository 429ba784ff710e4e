//! One report builder per subcommand.

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::{KChoice, RunConfig};
use super::report::{num, Report};
use crate::algebra::verify::{self, PassReport, Status, VerifyOptions};
use crate::constants::{self, ConstantsReport, Dimensions};
use crate::spectral::{self, corpus, NewtonOptions, SphereField};
use crate::Result;

type Row = IndexMap<String, Value>;

fn row(table: &str, cells: impl IntoIterator<Item = (&'static str, Value)>) -> Row {
    let mut r: Row = IndexMap::new();
    r.insert("table".into(), json!(table));
    r.extend(cells.into_iter().map(|(k, v)| (k.to_string(), v)));
    r
}

/// `cmd` alone for a single tuple, `cmd.<i>` otherwise.
fn prefix(cmd: &str, i: usize, total: usize) -> String {
    if total == 1 {
        cmd.to_string()
    } else {
        format!("{cmd}.{i}")
    }
}

/// Copies every cell but the table name into flat results under `pre`.
fn publish(rep: &mut Report, pre: &str, r: Row) {
    for (k, v) in r.iter().skip(1) {
        rep.set(format!("{pre}.{k}"), v.clone());
    }
    rep.rows.push(r);
}

pub fn constants(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    let tuples = cfg.tuples();
    for (i, &(n, q)) in tuples.iter().enumerate() {
        let pre = prefix("constants", i, tuples.len());
        match Dimensions::new(n, q).and_then(ConstantsReport::compute) {
            Ok(c) => {
                rep.check(format!("{pre}.lambda1_lower_at_most_1"), c.lambda1_lower <= 1.0 + 1e-12, None);
                let cells = [
                    ("n", json!(n)),
                    ("q", num(q)),
                    ("c_s", num(c.c_s)),
                    ("c_riem_raw", num(c.c_riem_raw)),
                    ("c_riem_bridged", num(c.c_riem_bridged)),
                    ("c_conj", num(c.c_conj)),
                    ("lambda1_lower", num(c.lambda1_lower)),
                    ("boundary", json!(c.boundary)),
                ];
                publish(&mut rep, &pre, row("constants", cells));
            }
            Err(e) => rep.error(&e),
        }
    }
    rep
}

pub fn interval(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    let tuples = cfg.tuples();
    for (i, &(n, q)) in tuples.iter().enumerate() {
        let pre = prefix("interval", i, tuples.len());
        match Dimensions::new(n, q).and_then(constants::k_interval) {
            Ok(iv) => {
                rep.check_close(format!("{pre}.product_is_one"), iv.product(), 1.0, 1e-12);
                // both ends solve k² + (2 - 4(n+1)/((n-1)q))k + 1 = 0
                let b = 2.0 - 4.0 * (n as f64 + 1.0) / ((n as f64 - 1.0) * q);
                for (end, k) in [("k_lo", iv.k_lo), ("k_hi", iv.k_hi)] {
                    let scale = k * k + (b * k).abs() + 1.0;
                    rep.check_close(format!("{pre}.{end}_is_root"), (k * k + b * k + 1.0) / scale, 0.0, 1e-12);
                }
                let cells = [
                    ("n", json!(n)),
                    ("q", num(q)),
                    ("k_lo", num(iv.k_lo)),
                    ("k_hi", num(iv.k_hi)),
                    ("product", num(iv.product())),
                    ("degenerate", json!(iv.is_degenerate())),
                ];
                publish(&mut rep, &pre, row("interval", cells));
            }
            Err(e) => rep.error(&e),
        }
    }
    rep
}

fn optimize_one(n: u32, q: f64, k: KChoice, lambda1: f64, pre: &str, rep: &mut Report) -> Result<Row> {
    let dims = Dimensions::new(n, q)?;
    let mut cells = vec![("n", json!(n)), ("q", num(q)), ("lambda1", num(lambda1))];
    match k {
        KChoice::Auto => {
            let opt = constants::optimize_k(dims, lambda1)?;
            let at_ends = [constants::f_of_k(dims, opt.k_lo, lambda1)?, constants::f_of_k(dims, opt.k_hi, lambda1)?];
            let best_end = at_ends[0].max(at_ends[1]);
            rep.check(
                format!("{pre}.threshold_beats_endpoints"),
                opt.lambda_threshold >= best_end - 1e-12,
                Some(format!("F(k*) = {}, best endpoint {}", opt.lambda_threshold, best_end)),
            );
            cells.extend([
                ("k", num(opt.k_star)),
                ("lambda_threshold", num(opt.lambda_threshold)),
                ("k_lo", num(opt.k_lo)),
                ("k_hi", num(opt.k_hi)),
                ("c_s_general", num(constants::cs_general(dims, opt.k_star, lambda1)?)),
                ("lambda1_coefficient", num(constants::lambda1_coefficient(dims, opt.k_star)?)),
            ]);
        }
        KChoice::Value(k) => {
            cells.extend([
                ("k", num(k)),
                ("f_of_k", num(constants::f_of_k(dims, k, lambda1)?)),
                ("c_s_general", num(constants::cs_general(dims, k, lambda1)?)),
                ("lambda1_coefficient", num(constants::lambda1_coefficient(dims, k)?)),
            ]);
        }
    }
    Ok(row("optimize-k", cells))
}

pub fn optimize_k(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    let tuples = cfg.tuples();
    for (i, &(n, q)) in tuples.iter().enumerate() {
        let pre = prefix("optimize_k", i, tuples.len());
        match optimize_one(n, q, cfg.k, cfg.lambda1, &pre, &mut rep) {
            Ok(r) => publish(&mut rep, &pre, r),
            Err(e) => rep.error(&e),
        }
    }
    rep
}

fn publish_pass(rep: &mut Report, pass: &PassReport) {
    let key = pass.name.replace('.', "_");
    rep.check(format!("algebra.{key}"), pass.passed(), None);
    for (i, s) in pass.steps.iter().enumerate() {
        let pre = format!("algebra.{key}.step{}", i + 1);
        let status = match s.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
        };
        rep.set(format!("{pre}.name"), json!(s.name));
        rep.set(format!("{pre}.status"), json!(status));
        rep.set(format!("{pre}.checks"), json!(s.checks));
        rep.set(format!("{pre}.instantiations"), json!(s.instantiations.len()));
        if let Some(r) = &s.residual {
            rep.set(format!("{pre}.residual"), json!(r));
        }
        rep.rows.push(row(
            "algebra-verify",
            [
                ("pass", json!(key)),
                ("step", json!(i + 1)),
                ("name", json!(s.name)),
                ("status", json!(status)),
                ("checks", json!(s.checks)),
                ("instantiations", json!(s.instantiations.len())),
                ("sign_checks", json!(s.sign_checks)),
                ("cleared_factor", json!(s.cleared_factor)),
                ("residual", json!(s.residual)),
            ],
        ));
    }
}

pub fn algebra_verify(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    let opts = VerifyOptions { seed: cfg.seed, ..VerifyOptions::default() };
    let mut passes = Vec::new();
    for idx in 1..=3 {
        match verify::verify_lemma22_with(idx, &opts) {
            Ok(p) => passes.push(p),
            Err(e) => rep.error(&e),
        }
    }
    passes.push(verify::verify_lemma23_with(&opts));
    passes.push(verify::verify_lemma24_with(&opts));
    passes.push(verify::verify_remark_b1_with(&opts));
    passes.push(verify::verify_lemma31_with(&opts));
    passes.push(verify::verify_section2_chain_with(&opts));
    passes.push(verify::verify_section3_chain_with(&opts));
    let psi = Dimensions::new(2, 2.0)
        .and_then(constants::psi_coefficients)
        .and_then(|(a, b, g)| verify::verify_psi_monotone(a, b, g));
    match psi {
        Ok(p) => passes.push(p),
        Err(e) => rep.error(&e),
    }
    for p in &passes {
        publish_pass(&mut rep, p);
    }
    rep
}

pub fn sphere_verify(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    if let Err(e) = sphere_checks(cfg, &mut rep) {
        rep.error(&e);
    }
    rep
}

fn sphere_checks(cfg: &RunConfig, rep: &mut Report) -> Result<()> {
    let grid = spectral::make_grid(cfg.band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pre = "sphere";
    rep.set(format!("{pre}.L"), json!(cfg.band));

    let (lambda1, mult) = spectral::lambda1_rayleigh(&grid)?;
    rep.set(format!("{pre}.lambda1"), num(lambda1));
    rep.set(format!("{pre}.lambda1_multiplicity"), json!(mult));
    rep.check_close(format!("{pre}.lambda1_is_one"), lambda1, 1.0, 1e-8);
    rep.check(format!("{pre}.lambda1_multiplicity_is_3"), mult == 3, Some(format!("got {mult}")));

    let z = SphereField::z(&grid);
    let avg_z2 = z.map_pointwise(|v| v * v)?.average();
    rep.set(format!("{pre}.avg_z2"), num(avg_z2));
    rep.check_close(format!("{pre}.avg_z2_is_one_third"), avg_z2, 1.0 / 3.0, 1e-10);

    let f = SphereField::random(&grid, &mut rng, corpus::TRIAL_DEGREE, 0.3, 1.0);
    let g = SphereField::random(&grid, &mut rng, corpus::TRIAL_DEGREE, -0.2, 1.0);
    let sa = spectral::self_adjointness_residual(&f, &g);
    let ibp = spectral::ibp_residual(&f);
    rep.set(format!("{pre}.self_adjointness_residual"), num(sa));
    rep.set(format!("{pre}.ibp_residual"), num(ibp));
    rep.check(format!("{pre}.self_adjoint"), sa < 1e-10, Some(format!("residual {sa:e}")));
    rep.check(format!("{pre}.integration_by_parts"), ibp < 1e-10, Some(format!("residual {ibp:e}")));

    // sharp constant on the sphere: C = (q-1)/2 at q = 2
    let one_plus_z = SphereField::constant(&grid, 1.0).lincomb(1.0, &z, 1.0);
    let ineq = spectral::sobolev_check(&one_plus_z, 2.0, 0.5, "1+z")?;
    rep.set(format!("{pre}.sobolev.lhs"), num(ineq.lhs));
    rep.set(format!("{pre}.sobolev.rhs"), num(ineq.rhs));
    rep.set(format!("{pre}.sobolev.margin"), num(ineq.margin));
    rep.check_close(format!("{pre}.sobolev.lhs_value"), ineq.lhs, 2f64.powf(2.0 / 3.0), 1e-6);
    rep.check_close(format!("{pre}.sobolev.rhs_value"), ineq.rhs, 5.0 / 3.0, 1e-6);
    let trials = corpus::sobolev_corpus(&grid, 2.0, 0.5, 100, cfg.seed)?;
    let worst = trials.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    rep.set(format!("{pre}.sobolev.corpus_trials"), json!(trials.len()));
    rep.set(format!("{pre}.sobolev.corpus_min_margin"), num(worst));
    rep.check(format!("{pre}.sobolev.corpus_nonnegative"), worst >= -1e-9, Some(format!("min margin {worst:e}")));

    let pert = spectral::perturbation_tcoeff(&z, 2.0, 0.5)?;
    rep.set(format!("{pre}.perturbation.lhs_t2"), num(pert.lhs_t2));
    rep.set(format!("{pre}.perturbation.rhs_t2"), num(pert.rhs_t2));
    rep.set(format!("{pre}.perturbation.fitted_t2"), num(pert.fitted_t2));
    rep.set(format!("{pre}.perturbation.fit_rel_error"), num(pert.fit_rel_error));
    rep.check_close(format!("{pre}.perturbation.lhs_t2_value"), pert.lhs_t2, 2.0 / 3.0, 1e-8);
    rep.check_close(format!("{pre}.perturbation.rhs_t2_value"), pert.rhs_t2, 2.0 / 3.0, 1e-8);
    rep.check(format!("{pre}.perturbation.fit"), pert.fit_rel_error < 1e-6, Some(format!("relative error {:e}", pert.fit_rel_error)));

    let q = cfg.q[0];
    let mut worst_fd = 0.0f64;
    for base in 0..3 {
        let u = corpus::random_positive(&grid, &mut rng, 1.0, 0.4);
        for c in corpus::gradient_fd_check(&u, cfg.lambda, q, 5, cfg.seed.wrapping_add(base))? {
            worst_fd = worst_fd.max(c.rel_error);
        }
    }
    rep.set(format!("{pre}.gradient.max_rel_error"), num(worst_fd));
    rep.check(format!("{pre}.gradient.finite_differences"), worst_fd < 1e-6, Some(format!("max relative error {worst_fd:e}")));
    Ok(())
}

pub fn pde_solve(cfg: &RunConfig) -> Report {
    let mut rep = Report::default();
    let grid = match spectral::make_grid(cfg.band) {
        Ok(g) => g,
        Err(e) => {
            rep.error(&e);
            return rep;
        }
    };
    let opts = NewtonOptions::default();
    for (i, &q) in cfg.q.iter().enumerate() {
        let pre = prefix("pde", i, cfg.q.len());
        let runs = match corpus::newton_corpus(&grid, cfg.lambda, q, cfg.count, cfg.seed, &opts) {
            Ok(r) => r,
            Err(e) => {
                rep.error(&e);
                continue;
            }
        };
        let expected = cfg.lambda.powf(1.0 / (q - 1.0));
        let converged = runs.iter().filter(|r| r.converged).count();
        let constant = runs.iter().filter(|r| r.constant.is_some_and(|c| (c - expected).abs() <= 1e-8)).count();
        let summary = if constant == runs.len() {
            format!("constant solution {expected:.6}")
        } else {
            format!("{constant} of {} runs reached the constant solution {expected:.6}", runs.len())
        };
        rep.set(format!("{pre}.lambda"), num(cfg.lambda));
        rep.set(format!("{pre}.q"), num(q));
        rep.set(format!("{pre}.expected_constant"), num(expected));
        rep.set(format!("{pre}.converged"), json!(converged));
        rep.set(format!("{pre}.constant"), json!(constant));
        rep.set(format!("{pre}.summary"), json!(summary));
        rep.check(format!("{pre}.all_converged"), converged == runs.len(), Some(format!("{converged}/{}", runs.len())));
        for (t, r) in runs.iter().enumerate() {
            rep.rows.push(row(
                "pde-solve",
                [
                    ("q", num(q)),
                    ("lambda", num(cfg.lambda)),
                    ("trial", json!(t)),
                    ("converged", json!(r.converged)),
                    ("iterations", json!(r.iterations)),
                    ("halvings", json!(r.halvings)),
                    ("residual", num(r.residual)),
                    ("is_constant", json!(r.is_constant)),
                    ("constant", r.constant.map(num).unwrap_or(Value::Null)),
                    ("expected_constant", num(r.expected_constant)),
                    ("min_value", num(r.min_value)),
                    ("message", json!(r.message)),
                ],
            ));
        }
    }
    rep
}
