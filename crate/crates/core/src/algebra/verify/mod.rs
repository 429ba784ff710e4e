//! Mechanical re-derivation of the coefficient identities.
//!
//! Each step is a function of a [`Ctx`]. Run symbolically it must produce
//! identities that hold exactly; run again with coefficients fixed at random
//! rational points it must produce the same identities between rational
//! numbers. The second run does not reuse the symbolic result, so it is an
//! independent path through the same derivation.

mod lemmas;
mod psi;
mod section2;
mod section3;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::formal::{Ctx, FormalExpr, FormalTerm};
use super::rational::{Point, RationalFunction as Rf};
use super::surd::Surd;
use super::var::Var;
use crate::Result;

pub use lemmas::{
    i6_by_equation, i4_by_equation, i7_by_hessian, square_coefficients, cs_coefficients, i6_by_hessian, verify_lemma22,
    verify_lemma22_with, verify_lemma23, verify_lemma23_with, verify_lemma24, verify_lemma24_with, verify_lemma31,
    verify_lemma31_with, verify_remark_b1, verify_remark_b1_with,
};
pub use psi::verify_psi_monotone;
pub use section2::{verify_section2_chain, verify_section2_chain_with};
pub use section3::{verify_section3_chain, verify_section3_chain_with};

/// Default seed for the random instantiation points.
pub const DEFAULT_SEED: u64 = 0x6b73_6c5f_616c_6731;

/// Coefficients on the four basis integrals of a final inequality.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub a: Rf,
    pub b: Rf,
    pub c: Rf,
    pub d: Rf,
}

impl CoefficientSet {
    /// Reads the coefficients of `e` on the given four terms.
    pub fn of(e: &FormalExpr, basis: [FormalTerm; 4]) -> Self {
        let [a, b, c, d] = basis.map(|t| e.coeff(&t));
        CoefficientSet { a, b, c, d }
    }

    pub fn map(&self, f: impl Fn(&Rf) -> Result<Rf>) -> Result<Self> {
        Ok(CoefficientSet { a: f(&self.a)?, b: f(&self.b)?, c: f(&self.c)?, d: f(&self.d)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One numeric re-run of a step.
#[derive(Debug, Clone, Serialize)]
pub struct Instantiation {
    pub point: BTreeMap<String, String>,
    pub agree: bool,
    /// Left-hand values of the checked identities at this point.
    pub values: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub name: String,
    pub status: Status,
    /// First nonzero difference, or the error that stopped the step.
    pub residual: Option<String>,
    pub checks: usize,
    pub instantiations: Vec<Instantiation>,
    pub cleared_factor: Option<String>,
    pub side_conditions: Vec<String>,
    pub sign_checks: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PassReport {
    pub name: String,
    pub steps: Vec<StepReport>,
}

impl PassReport {
    pub fn passed(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.status == Status::Pass)
    }

    pub fn step(&self, name: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.name == name)
    }
}

/// Settings for the numeric re-runs.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random points per step (at least three are always used).
    pub instantiations: usize,
    /// Additional fixed points, checked before the random ones.
    pub extra_points: Vec<Point>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: DEFAULT_SEED, instantiations: 3, extra_points: Vec::new() }
    }
}

/// What a derivation step produces.
#[derive(Debug, Default)]
pub struct StepOut {
    checks: Vec<(String, Rf, Rf)>,
    positive: Vec<(String, Rf)>,
    cleared: Option<String>,
    side: Vec<String>,
}

impl StepOut {
    pub fn new() -> Self {
        StepOut::default()
    }

    /// Requires `lhs ≡ rhs`.
    pub fn eq(mut self, label: impl Into<String>, lhs: Rf, rhs: Rf) -> Self {
        self.checks.push((label.into(), lhs, rhs));
        self
    }

    /// Requires equal coefficients on every basis term.
    pub fn exprs(mut self, label: &str, lhs: &FormalExpr, rhs: &FormalExpr) -> Self {
        let mut support = lhs.support();
        support.extend(rhs.support());
        support.sort();
        support.dedup();
        for t in support {
            self.checks.push((format!("{label} [{t}]"), lhs.coeff(&t), rhs.coeff(&t)));
        }
        self
    }

    pub fn coeffs(self, label: &str, lhs: &CoefficientSet, rhs: &CoefficientSet) -> Self {
        self.eq(format!("{label} A"), lhs.a.clone(), rhs.a.clone())
            .eq(format!("{label} B"), lhs.b.clone(), rhs.b.clone())
            .eq(format!("{label} C"), lhs.c.clone(), rhs.c.clone())
            .eq(format!("{label} D"), lhs.d.clone(), rhs.d.clone())
    }

    /// Requires a surd to vanish identically.
    pub fn surd_zero(self, label: &str, s: &Surd) -> Self {
        self.eq(format!("{label} (rational part)"), s.u.clone(), Rf::zero())
            .eq(format!("{label} (root part)"), s.v.clone(), Rf::zero())
    }

    pub fn surd_eq(self, label: &str, a: &Surd, b: &Surd) -> Result<Self> {
        Ok(self.surd_zero(label, &a.sub(b)?))
    }

    /// Requires `value > 0` at the admissible sample points of the chain.
    pub fn positive(mut self, label: impl Into<String>, value: Rf) -> Self {
        self.positive.push((label.into(), value));
        self
    }

    pub fn cleared(mut self, factor: &Rf) -> Self {
        self.cleared = Some(factor.to_string());
        self
    }

    pub fn side(mut self, cond: impl Into<String>) -> Self {
        self.side.push(cond.into());
        self
    }
}

/// A named derivation step.
pub struct Step<'a> {
    pub name: &'a str,
    /// Variables left symbolic in the numeric re-runs (those the step
    /// substitutes for, takes limits in, or reads coefficients of).
    pub keep_symbolic: &'a [Var],
    pub run: &'a dyn Fn(&Ctx) -> Result<StepOut>,
}

fn seed_for(base: u64, name: &str) -> u64 {
    name.bytes().fold(base ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut num: i64 = rng.gen_range(1..=9);
    if rng.gen_bool(0.5) {
        num = -num;
    }
    let den: i64 = rng.gen_range(1..=6);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn render_point(p: &Point) -> BTreeMap<String, String> {
    p.iter().map(|(v, x)| (v.name().to_string(), x.to_string())).collect()
}

fn first_residual(checks: &[(String, Rf, Rf)]) -> Option<String> {
    checks.iter().find_map(|(label, l, r)| {
        let d = l - r;
        (!d.is_zero()).then(|| format!("{label}: difference {d}"))
    })
}

fn instantiate(step: &Step, point: Point) -> Result<Instantiation> {
    let out = (step.run)(&Ctx::at(point.clone()))?;
    let agree = first_residual(&out.checks).is_none();
    let values = out.checks.iter().map(|(label, l, _)| (label.clone(), l.to_string())).collect();
    Ok(Instantiation { point: render_point(&point), agree, values })
}

/// Runs one step symbolically and at rational points.
pub fn run_step(step: &Step, sign_points: &[Point], opts: &VerifyOptions) -> StepReport {
    let mut report = StepReport {
        name: step.name.to_string(),
        status: Status::Fail,
        residual: None,
        checks: 0,
        instantiations: Vec::new(),
        cleared_factor: None,
        side_conditions: Vec::new(),
        sign_checks: 0,
    };
    let out = match (step.run)(&Ctx::symbolic()) {
        Ok(out) => out,
        Err(e) => {
            report.residual = Some(e.to_string());
            return report;
        }
    };
    report.checks = out.checks.len();
    report.cleared_factor = out.cleared.clone();
    report.side_conditions = out.side.clone();
    report.residual = first_residual(&out.checks);
    let mut ok = report.residual.is_none() && !out.checks.is_empty();

    for (label, value) in &out.positive {
        for p in sign_points {
            report.sign_checks += 1;
            match value.value_at(p) {
                Ok(x) if x.is_positive() => {}
                Ok(x) => {
                    ok = false;
                    report.residual.get_or_insert(format!("{label} = {x} is not positive at {:?}", render_point(p)));
                }
                Err(e) => {
                    ok = false;
                    report.residual.get_or_insert(format!("{label}: {e}"));
                }
            }
        }
    }

    let free = |p: &Point| -> Point { p.iter().filter(|(v, _)| !step.keep_symbolic.contains(v)).map(|(v, x)| (*v, x.clone())).collect() };
    for p in &opts.extra_points {
        match instantiate(step, free(p)) {
            Ok(inst) => report.instantiations.push(inst),
            Err(e) => {
                ok = false;
                report.residual.get_or_insert(format!("instantiation at {:?}: {e}", render_point(p)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(opts.seed, step.name));
    let want = opts.instantiations.max(3);
    let mut found = 0;
    for _ in 0..200 {
        if found == want {
            break;
        }
        let point: Point = Var::ALL
            .iter()
            .filter(|v| !step.keep_symbolic.contains(v))
            .map(|&v| (v, random_rational(&mut rng)))
            .collect();
        // a point on a denominator is simply redrawn
        if let Ok(inst) = instantiate(step, point) {
            report.instantiations.push(inst);
            found += 1;
        }
    }
    if found < 3 || report.instantiations.iter().any(|i| !i.agree) {
        ok = false;
        report.residual.get_or_insert_with(|| "numeric instantiations disagree".to_string());
    }
    if ok {
        report.status = Status::Pass;
    }
    report
}

/// Runs the given steps as one pass.
pub fn run_pass(name: &str, steps: &[Step], sign_points: &[Point], opts: &VerifyOptions) -> PassReport {
    PassReport { name: name.to_string(), steps: steps.iter().map(|s| run_step(s, sign_points, opts)).collect() }
}

/// Builds a formal expression from displayed coefficient texts.
pub(crate) fn display(ctx: &Ctx, terms: &[(FormalTerm, &str)], env: &[(&str, &Rf)]) -> Result<FormalExpr> {
    let mut e = FormalExpr::zero();
    for (t, src) in terms {
        e.add_term(t.clone(), ctx.expr_env(src, env)?);
    }
    Ok(e)
}

/// Admissible sample points for sign checks: `n ≥ 2`, `1 < q < (n+1)/(n-1)`,
/// `k` inside the admissible interval, small `ε ≥ 0`, positive `x`.
pub fn admissible_points() -> Vec<Point> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let rows = [
        (2, r(3, 2), r(1, 1), r(0, 1), r(1, 1)),
        (3, r(6, 5), r(1, 2), r(1, 10), r(3, 4)),
        (5, r(11, 10), r(2, 1), r(1, 20), r(2, 1)),
        (4, r(13, 10), r(1, 1), r(0, 1), r(1, 2)),
    ];
    rows.into_iter()
        .map(|(n, q, k, eps, x)| {
            let mut p = Point::new();
            p.insert(Var::N, r(n, 1));
            p.insert(Var::Q, q);
            p.insert(Var::K, k);
            p.insert(Var::Eps, eps);
            p.insert(Var::X, x);
            p.insert(Var::Lambda, r(1, 2));
            p.insert(Var::Lambda1, r(1, 1));
            for v in [Var::Gamma, Var::A, Var::B, Var::Beta, Var::Y] {
                p.insert(v, r(1, 1));
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn false_claim(ctx: &Ctx) -> Result<StepOut> {
        Ok(StepOut::new().eq("shifted", ctx.var(Var::Q), &ctx.var(Var::Q) + &Rf::one()))
    }

    fn numeric_only_claim(ctx: &Ctx) -> Result<StepOut> {
        // true symbolically only because q is held as a symbol
        let q = ctx.var(Var::Q);
        let lhs = if ctx.is_symbolic() { q.clone() } else { &q + &Rf::one() };
        Ok(StepOut::new().eq("drift", lhs, q))
    }

    fn empty(_: &Ctx) -> Result<StepOut> {
        Ok(StepOut::new())
    }

    #[test]
    fn runner_rejects_wrong_steps() {
        let opts = VerifyOptions::default();
        for run in [false_claim as fn(&Ctx) -> Result<StepOut>, numeric_only_claim, empty] {
            let step = Step { name: "bad", keep_symbolic: &[], run: &run };
            assert_eq!(run_step(&step, &[], &opts).status, Status::Fail);
        }
    }

    #[test]
    fn f_at_sample_point() {
        let p: Point = [(Var::N, rat(2, 1)), (Var::Q, rat(2, 1)), (Var::K, rat(1, 1)), (Var::Lambda1, rat(1, 1))].into();
        let f = Ctx::symbolic()
            .expr(
                "1/(q - 1)*(1 - (n + (n - 1)*k)*(k*n + n - 1)*q/((4*n^2 + 4*n + q)*k))*lambda1 \
                 + q*n*(k*n + n - 1)/((q - 1)*(4*n^2 + 4*n + q)*k)",
            )
            .unwrap();
        assert_eq!(f.value_at(&p).unwrap(), rat(10, 13));
    }

    #[test]
    fn chains_agree_on_the_k_quadratic() {
        let ctx = Ctx::at([(Var::N, rat(2, 1)), (Var::Q, rat(2, 1)), (Var::Eps, rat(0, 1))].into());
        let kquad = ctx.expr(section2::K_QUADRATIC).unwrap();
        assert_eq!(kquad, &ctx.expr("4*(k^2 - 4*k + 1)").unwrap() * &Rf::one());
    }
}
