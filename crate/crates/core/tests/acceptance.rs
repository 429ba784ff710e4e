//! One line per acceptance criterion. Runs as a plain program so the lines
//! always reach the test log; exits nonzero on any unexpected failure.

use std::process::ExitCode;
use std::time::Instant;

use kahler_sobolev::algebra::verify::{self, PassReport, Status};
use kahler_sobolev::constants::{self, admissible_grid, Dimensions};
use kahler_sobolev::spectral::{self, corpus, NewtonOptions, SphereField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sub-checks whose failure is a documented arithmetic slip in the stated
/// target value rather than a defect; see the decisions ledger.
const RECORDED_DEVIATIONS: &[&str] = &["threshold equals the literal 0.881846"];

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool, String)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push((name.into(), pass, detail.into()));
    }

    fn close(&mut self, name: impl Into<String>, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.check(name, err <= tol, format!("got {got:.12}, want {want:.12}, |diff| {err:.2e} vs {tol:.0e}"));
    }

    fn timed(&mut self, name: &str, secs: f64, limit: f64) {
        self.check(name, secs < limit, format!("{secs:.3} s vs {limit} s"));
    }
}

fn grid200() -> Vec<Dimensions> {
    let g = admissible_grid(2..=6, 40);
    assert_eq!(g.len(), 200);
    g
}

/// Largest deviation of `f` over the grid with its worst point.
fn worst(f: impl Fn(Dimensions) -> f64) -> (f64, String) {
    grid200()
        .into_iter()
        .map(|d| (f(d), format!("n={} q={:.6}", d.n(), d.q())))
        .fold((-1.0, String::new()), |a, b| if b.0 > a.0 { b } else { a })
}

fn sup_check(c: &mut Criterion, name: &str, tol: f64, f: impl Fn(Dimensions) -> f64) {
    let (err, at) = worst(f);
    c.check(name, err <= tol, format!("max {err:.2e} at {at} vs {tol:.0e}"));
}

fn criterion1() -> Criterion {
    let mut c = Criterion::new(1, "closed-form Sobolev constant");
    let start = Instant::now();
    let d = Dimensions::new(2, 2.0).unwrap();
    // 1 - √3/4
    c.close("cs_bm(2,2)", constants::cs_bm(d).unwrap(), 0.566987298, 1e-9);
    for q in [1.1, 1.5, 2.0, 3.0, 5.0] {
        let got = constants::cs_bm(Dimensions::new(1, q).unwrap()).unwrap();
        c.close(format!("cs_bm(1,{q})"), got, (q - 1.0) / 2.0, 1e-12);
    }
    c.timed("runtime", start.elapsed().as_secs_f64(), 1.0);
    c
}

/// Roots of k² + (2 - 4(n+1)/((n-1)q))k + 1, computed without cancellation.
fn quadratic_roots(d: Dimensions) -> (f64, f64) {
    let (n, q) = (d.n() as f64, d.q());
    let half_b = 1.0 - 2.0 * (n + 1.0) / ((n - 1.0) * q);
    let disc = (half_b * half_b - 1.0).max(0.0);
    let hi = -half_b + disc.sqrt();
    (1.0 / hi, hi)
}

fn criterion2() -> Criterion {
    let mut c = Criterion::new(2, "admissible k interval");
    sup_check(&mut c, "k_lo·k_hi = 1", 1e-12, |d| (constants::k_interval(d).unwrap().product() - 1.0).abs());
    sup_check(&mut c, "endpoints are the quadratic's roots", 1e-12, |d| {
        let iv = constants::k_interval(d).unwrap();
        let (lo, hi) = quadratic_roots(d);
        (iv.k_lo - lo).abs().max((iv.k_hi - hi).abs())
    });
    c
}

fn criterion3() -> Criterion {
    let mut c = Criterion::new(3, "lambda1 drops out at the lower end");
    sup_check(&mut c, "lambda1 coefficient at k_lo", 1e-10, |d| {
        let k = constants::k_interval(d).unwrap().k_lo;
        constants::lambda1_coefficient(d, k).unwrap().abs()
    });
    sup_check(&mut c, "cs_general spread over lambda1 in {1,2,5}", 1e-10, |d| {
        let k = constants::k_interval(d).unwrap().k_lo;
        let v: Vec<f64> = [1.0, 2.0, 5.0].iter().map(|&l| constants::cs_general(d, k, l).unwrap()).collect();
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min)
    });
    sup_check(&mut c, "cs_general at k_lo equals cs_bm", 1e-10, |d| {
        let k = constants::k_interval(d).unwrap().k_lo;
        (constants::cs_general(d, k, 1.0).unwrap() - constants::cs_bm(d).unwrap()).abs()
    });
    c
}

fn criterion4() -> Criterion {
    let mut c = Criterion::new(4, "three independent closed forms agree");
    sup_check(&mut c, "k_lower_bound_eps0 = k_lo", 1e-12, |d| {
        (constants::k_lower_bound_eps0(d).unwrap() - constants::k_interval(d).unwrap().k_lo).abs()
    });
    sup_check(&mut c, "section2_threshold = 1/(2 cs_bm)", 1e-10, |d| {
        (constants::section2_threshold(d).unwrap() - 0.5 / constants::cs_bm(d).unwrap()).abs()
    });
    c
}

fn criterion5() -> Criterion {
    let mut c = Criterion::new(5, "exact coefficient identities");
    let start = Instant::now();
    let mut passes: Vec<PassReport> = (1..=3).map(|i| verify::verify_lemma22(i).unwrap()).collect();
    passes.push(verify::verify_lemma23());
    passes.push(verify::verify_remark_b1());
    passes.push(verify::verify_lemma24());
    passes.push(verify::verify_lemma31());
    passes.push(verify::verify_section2_chain());
    passes.push(verify::verify_section3_chain());
    let secs = start.elapsed().as_secs_f64();
    for p in &passes {
        let bad: Vec<&str> = p.steps.iter().filter(|s| s.status != Status::Pass).map(|s| s.name.as_str()).collect();
        let thin: Vec<&str> = p
            .steps
            .iter()
            .filter(|s| s.instantiations.len() < 3 || !s.instantiations.iter().all(|i| i.agree))
            .map(|s| s.name.as_str())
            .collect();
        let detail = format!("{} steps, failed {bad:?}, under 3 agreeing points {thin:?}", p.steps.len());
        c.check(p.name.clone(), p.passed() && thin.is_empty(), detail);
    }
    let b1 = passes.iter().find(|p| p.name == "remark_b1").unwrap();
    c.check("B1 at gamma = 2a is q", b1.steps.first().is_some_and(|s| s.status == Status::Pass), b1.steps[0].name.clone());
    c.timed("runtime", secs, 30.0);
    c
}

fn criterion6() -> Criterion {
    let mut c = Criterion::new(6, "operator on the round sphere");
    let grid = spectral::make_grid(16).unwrap();
    let (lambda1, mult) = spectral::lambda1_rayleigh(&grid).unwrap();
    c.close("lambda1 at L = 16", lambda1, 1.0, 1e-8);
    c.check("lambda1 multiplicity", mult == 3, format!("{mult}"));
    let z2 = SphereField::z(&grid).map_pointwise(|v| v * v).unwrap().average();
    c.close("avg z²", z2, 1.0 / 3.0, 1e-10);
    // independent oracle: dense midpoint rule for ½∫μ² dμ
    let m = 200_000;
    let dense: f64 = (0..m).map(|i| (-1.0 + (i as f64 + 0.5) * 2.0 / m as f64).powi(2)).sum::<f64>() / m as f64;
    c.close("avg z² against dense quadrature", z2, dense, 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let f = SphereField::random(&grid, &mut rng, 12, 0.4, 1.0);
    let g = SphereField::random(&grid, &mut rng, 12, -0.7, 1.0);
    let sa = spectral::self_adjointness_residual(&f, &g);
    c.check("self-adjointness residual", sa < 1e-10, format!("{sa:.2e}"));
    c
}

fn criterion7() -> Criterion {
    let mut c = Criterion::new(7, "sharp Sobolev inequality for n = 1");
    let grid = spectral::make_grid(16).unwrap();
    let phi = SphereField::constant(&grid, 1.0).lincomb(1.0, &SphereField::z(&grid), 1.0);
    let r = spectral::sobolev_check(&phi, 2.0, 0.5, "1+z").unwrap();
    // avg (1+z)³ = 2, avg (1+z)² = 4/3, avg |∂z|² = 1/3
    c.close("lhs", r.lhs, 2f64.powf(2.0 / 3.0), 1e-6);
    c.close("rhs", r.rhs, 4.0 / 3.0 + 0.5 * 2.0 / 3.0, 1e-6);
    c.close("margin", r.margin, 0.079265, 1e-6);
    let trials = corpus::sobolev_corpus(&grid, 2.0, 0.5, 100, 17).unwrap();
    let min = trials.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
    c.check("random corpus margin", trials.len() == 100 && min >= -1e-9, format!("100 trials, min margin {min:.3e}"));
    c
}

fn criterion8() -> Criterion {
    let mut c = Criterion::new(8, "second-order equality case");
    let grid = spectral::make_grid(16).unwrap();
    let r = spectral::perturbation_tcoeff(&SphereField::z(&grid), 2.0, 0.5).unwrap();
    c.close("lhs t² coefficient", r.lhs_t2, 2.0 / 3.0, 1e-8);
    c.close("rhs t² coefficient", r.rhs_t2, 2.0 / 3.0, 1e-8);
    c.check("fitted t² coefficient", r.fit_rel_error < 1e-6, format!("relative error {:.2e}", r.fit_rel_error));
    c
}

fn criterion9() -> Criterion {
    let mut c = Criterion::new(9, "quotient gradient");
    let grid = spectral::make_grid(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let mut count = 0;
    for base in 0..3 {
        let u = corpus::random_positive(&grid, &mut rng, 1.0, 0.5);
        for g in corpus::gradient_fd_check(&u, 0.7, 2.0, 5, 1000 + base).unwrap() {
            worst = worst.max(g.rel_error);
            count += 1;
        }
    }
    c.check("finite differences", count == 15 && worst < 1e-6, format!("{count} directions, max relative error {worst:.2e}"));
    c
}

fn criterion10() -> Criterion {
    let mut c = Criterion::new(10, "Newton solves at L = 16");
    let grid = spectral::make_grid(16).unwrap();
    let start = Instant::now();
    for lambda in [0.4, 0.9] {
        let runs = corpus::newton_corpus(&grid, lambda, 2.0, 20, 7, &NewtonOptions::default()).unwrap();
        let hits = runs.iter().filter(|r| r.converged && r.constant.is_some_and(|v| (v - lambda).abs() <= 1e-8)).count();
        let err = runs.iter().filter_map(|r| r.constant).map(|v| (v - lambda).abs()).fold(0.0, f64::max);
        c.check(format!("lambda = {lambda}"), hits == 20, format!("{hits}/20 at the constant {lambda}, max error {err:.2e}"));
    }
    c.timed("runtime", start.elapsed().as_secs_f64(), 30.0);
    c
}

fn criterion11() -> Criterion {
    let mut c = Criterion::new(11, "optimal k");
    let d = Dimensions::new(2, 2.0).unwrap();
    let opt = constants::optimize_k(d, 1.0).unwrap();
    c.close("k* = 2 - √3", opt.k_star, 2.0 - 3f64.sqrt(), 1e-6);
    c.close("threshold equals the literal 0.881846", opt.lambda_threshold, 0.881846, 1e-8);
    c.close("threshold equals 1/(1 + (2-√3)/2)", opt.lambda_threshold, 1.0 / (1.0 + (2.0 - 3f64.sqrt()) / 2.0), 1e-8);
    // brute force on 10⁶ points; at λ₁ = 1 the bound reduces to
    // (1 - q(kn+n-1)(n-1)/(4n²+4n+q))/(q-1), which is 1 - 2(2k+1)/26 here
    let (lo, hi) = (opt.k_lo, opt.k_hi);
    let f = |k: f64| 1.0 - 2.0 * (2.0 * k + 1.0) / 26.0;
    let m = 1_000_000;
    let (k_best, f_best) = (0..m)
        .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
        .map(|k| (k, f(k)))
        .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    c.close("k* against grid oracle", opt.k_star, k_best, 1e-6);
    c.close("threshold against grid oracle", opt.lambda_threshold, f_best, 1e-8);
    c
}

fn main() -> ExitCode {
    let all = [
        criterion1 as fn() -> Criterion,
        criterion2,
        criterion3,
        criterion4,
        criterion5,
        criterion6,
        criterion7,
        criterion8,
        criterion9,
        criterion10,
        criterion11,
    ];
    let mut unexpected = 0;
    for run in all {
        let c = run();
        let failed: Vec<_> = c.checks.iter().filter(|x| !x.1).collect();
        let recorded = failed.iter().all(|x| RECORDED_DEVIATIONS.contains(&x.0.as_str()));
        let verdict = match (failed.is_empty(), recorded) {
            (true, _) => "PASS",
            (false, true) => "FAIL (recorded deviation)",
            (false, false) => "FAIL",
        };
        println!("criterion {:>2} {verdict}: {}", c.id, c.title);
        for (name, pass, detail) in &c.checks {
            println!("    [{}] {name}: {detail}", if *pass { "ok" } else { "fail" });
        }
        if !recorded {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
