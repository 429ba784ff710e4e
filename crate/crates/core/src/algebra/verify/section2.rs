//! The uniqueness chain with parameters `a, b, k, ε` that recovers `C_S`.

use super::lemmas::{i4_by_equation, square_coefficients, cs_coefficients};
use super::{admissible_points, run_pass, CoefficientSet, PassReport, Step, StepOut, VerifyOptions};
use crate::algebra::formal::{Ctx, FormalExpr, FormalTerm as T};
use crate::algebra::rational::RationalFunction as Rf;
use crate::algebra::surd::{eval_at, Surd};
use crate::algebra::var::Var;
use crate::Result;

pub(crate) const P: &str = "(1 + (n - 1)/n*(k + eps))";
pub(crate) const K_QUADRATIC: &str =
    "n*(n - 1)*q*k^2 + k*(q*(2*n^2 + n*(n - 1)*eps - 2*n) - 4*n^2 - 4*n) + q*eps*(n - 1)^2 + q*n*(n - 1)";
const B_CHOICE: &str = "(gamma*eps/2 + a - gamma/2)/k + gamma/2";
const A_CHOICE: &str = "q*(1 + (n - 1)/n*(k + eps))*n*beta/(2*(n + 1))";
const QUAD: &str = "beta^2*(q^2*P*(n*k + n - 1)*n/(4*k*(n + 1)^2) - q + 1) + beta*(2 - q/(n + 1)) + 1";

fn as_expr(c: &CoefficientSet) -> FormalExpr {
    FormalExpr::from_terms([(T::i1(), c.a.clone()), (T::i2(), c.b.clone()), (T::i3(), c.c.clone()), (T::i5(), c.d.clone())])
}

/// The squared-Hessian bound plus `k` times the Cauchy-Schwarz bound, with the mixed Hessian split into its
/// trace-free part and `(□v)²/n`, read on `(I1, I2, I3, T)`.
fn combined(ctx: &Ctx) -> Result<CoefficientSet> {
    let e = as_expr(&square_coefficients(ctx)?).add(&as_expr(&cs_coefficients(ctx)?).scale(&ctx.var(Var::K)));
    let split = FormalExpr::from_terms([(T::TraceFree, Rf::one()), (T::i4(), ctx.expr("1/n")?)]);
    let e = e.substitute(&T::i5(), &split).substitute(&T::i4(), &i4_by_equation(ctx)?);
    Ok(CoefficientSet::of(&e, [T::i1(), T::i2(), T::i3(), T::TraceFree]))
}

fn disp_combined(ctx: &Ctx) -> Result<CoefficientSet> {
    let d = ctx.expr("2*a/gamma - 1 + k*(1 - 2*b/gamma)")?;
    let env = [("D", &d)];
    Ok(CoefficientSet {
        a: ctx.expr_env(
            "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + (3*gamma - 4*a)*(beta + 1) + (2 - 2*a/gamma)*(beta + 1)^2 \
             + k*(b^2*(1 - 1/n) + (beta + 1)^2*(2*b/gamma - 1/n) + 2*b*(beta + 1)*(1 - 1/n)) + D/n*(beta + 1)^2",
            &env,
        )?,
        b: ctx.expr_env(
            "(3*gamma - 4*a)/beta + (2 - 2*a/gamma)*(q - gamma/beta) \
             + k*((2*b/gamma - 1/n)*(q - gamma/beta) + 2*b/beta*(1 - 1/n)) + D/n*(q - gamma/beta)",
            &env,
        )?,
        c: ctx.expr_env(
            "((4*a - 3*gamma)/beta + (2 - 2*a/gamma)*(gamma/beta - 1) + k*(2*b/gamma - 1/n)*(gamma/beta - 1) \
             - 2*b*k/beta*(1 - 1/n) + (gamma/beta - 1)*D/n)*lambda - 1",
            &env,
        )?,
        d,
    })
}

fn substituted(ctx: &Ctx) -> Result<CoefficientSet> {
    let b = ctx.expr(B_CHOICE)?;
    combined(ctx)?.map(|c| c.subs(Var::B, &b))
}

fn disp_substituted(ctx: &Ctx) -> Result<CoefficientSet> {
    let bb = ctx.expr(B_CHOICE)?;
    let p = ctx.expr(P)?;
    let env = [("bb", &bb), ("P", &p)];
    Ok(CoefficientSet {
        a: ctx.expr_env(
            "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + (3*gamma - 4*a)*(beta + 1) + (beta + 1)^2*P \
             + bb^2*k*(1 - 1/n) + 2*bb*k*(beta + 1)*(1 - 1/n)",
            &env,
        )?,
        b: ctx.expr_env("(3*gamma - 4*a)/beta + (q - gamma/beta)*P + 2*bb*k/beta*(1 - 1/n)", &env)?,
        c: ctx.expr_env("((4*a - 3*gamma)/beta + (gamma/beta - 1)*P - 2*bb*k/beta*(1 - 1/n))*lambda - 1", &env)?,
        d: ctx.expr("-eps")?,
    })
}

pub(crate) fn disp_gamma0(ctx: &Ctx) -> Result<CoefficientSet> {
    let p = ctx.expr(P)?;
    let env = [("P", &p)];
    Ok(CoefficientSet {
        a: ctx.expr_env("2*a + a^2 + a^2/k*((n - 1)/n) - 2*a*(beta + 1)*((n + 1)/n) + P*(beta + 1)^2", &env)?,
        b: ctx.expr_env("-2*a/beta*((n + 1)/n) + q*P", &env)?,
        c: ctx.expr_env("(2*a/beta*((n + 1)/n) - P)*lambda - 1", &env)?,
        d: ctx.expr("-eps")?,
    })
}

fn quad(ctx: &Ctx) -> Result<Rf> {
    let p = ctx.expr(P)?;
    ctx.expr_env(QUAD, &[("P", &p)])
}

fn step_combined(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().coeffs("", &combined(ctx)?, &disp_combined(ctx)?).side("k >= 0"))
}

fn step_b_choice(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().coeffs("", &substituted(ctx)?, &disp_substituted(ctx)?))
}

fn step_gamma0(ctx: &Ctx) -> Result<StepOut> {
    let lim = substituted(ctx)?.map(|c| c.limit_zero(Var::Gamma))?;
    let b0 = ctx.expr(B_CHOICE)?.limit_zero(Var::Gamma)?;
    Ok(StepOut::new().coeffs("", &lim, &disp_gamma0(ctx)?).eq("b at gamma = 0", b0, ctx.expr("a/k")?))
}

fn step_a_choice(ctx: &Ctx) -> Result<StepOut> {
    let b = disp_gamma0(ctx)?.b.subs(Var::A, &ctx.expr(A_CHOICE)?)?;
    Ok(StepOut::new().eq("B", b, Rf::zero()))
}

fn step_quadratic(ctx: &Ctx) -> Result<StepOut> {
    let a = disp_gamma0(ctx)?.a.subs(Var::A, &ctx.expr(A_CHOICE)?)?;
    let p = ctx.expr(P)?;
    Ok(StepOut::new().eq("A", a, &p * &quad(ctx)?).cleared(&p).positive("cleared factor", p))
}

fn step_discriminant(ctx: &Ctx) -> Result<StepOut> {
    let f = quad(ctx)?;
    let c: Vec<Rf> = (0..3).map(|d| f.coeff_in(Var::Beta, d)).collect::<Result<_>>()?;
    let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&crate::algebra::poly::int(4));
    let factor = ctx.expr("q/(k*(n + 1)^2)")?;
    Ok(StepOut::new()
        .eq("discriminant", disc, -&(&factor * &ctx.expr(K_QUADRATIC)?))
        .cleared(&factor)
        .positive("cleared factor", factor))
}

/// Coefficients of the k quadratic in `k`, low degree first.
fn kquad_in_k(ctx: &Ctx) -> Result<[Rf; 3]> {
    let f = ctx.expr(K_QUADRATIC)?;
    Ok([f.coeff_in(Var::K, 0)?, f.coeff_in(Var::K, 1)?, f.coeff_in(Var::K, 2)?])
}

fn delta(ctx: &Ctx) -> Result<Rf> {
    let [a0, a1, a2] = kquad_in_k(ctx)?;
    Ok(&(&a1 * &a1) - &(&a2 * &a0).scale(&crate::algebra::poly::int(4)))
}

fn step_delta(ctx: &Ctx) -> Result<StepOut> {
    let d = delta(ctx)?;
    let d0 = d.subs(Var::Eps, &Rf::zero())?;
    let w = ctx.expr("q^2 + 4*q*n*(n + 1)")?;
    let eps_max = Surd::new(
        ctx.expr("(4*n*(n + 1) - 2*q*(n - 1))/(n*(n - 1)*q)")?,
        ctx.expr("-2*(n - 1)/(n*(n - 1)*q)")?,
        w,
    );
    let lead = d.coeff_in(Var::Eps, 2)?;
    let psi_lead = d.checked_div(&ctx.expr("(2*n*(n - 1)*q)^2")?)?.coeff_in(Var::Eps, 2)?;
    Ok(StepOut::new()
        .eq("delta at eps = 0", d0, ctx.expr("(4*n^2 + 4*n)^2 - 16*(n^2 + n)*q*(n^2 - n)")?)
        .surd_zero("delta at eps_max", &eval_at(&d, Var::Eps, &eps_max)?)
        .eq("leading coefficient in eps", lead.clone(), ctx.expr("q^2*n^2*(n - 1)^2")?)
        .eq("normalised leading coefficient (alpha^2)", psi_lead, ctx.expr("1/4")?)
        .positive("leading coefficient in eps", lead)
        .positive("root coefficient of eps_max is negative (smaller root)", ctx.expr("2/(n*q)")?)
        .side("n*(n - 1)*q > 0"))
}

fn k_roots(ctx: &Ctx) -> Result<(Surd, Surd)> {
    let [_, a1, a2] = kquad_in_k(ctx)?;
    let w = delta(ctx)?;
    let inv = a2.scale(&crate::algebra::poly::int(2)).recip()?;
    let u = -&(&a1 * &inv);
    Ok((Surd::new(u.clone(), -&inv, w.clone()), Surd::new(u, inv, w)))
}

fn step_k_bounds(ctx: &Ctx) -> Result<StepOut> {
    let (lo, hi) = k_roots(ctx)?;
    let f = ctx.expr(K_QUADRATIC)?;
    let w = delta(ctx)?;
    let den = "(2*n*(n - 1)*q)";
    let disp_u = ctx.expr(&format!("(4*n^2 + 4*n - q*(2*n^2 + n*(n - 1)*eps - 2*n))/{den}"))?;
    let disp_v = ctx.expr(&format!("1/{den}"))?;
    let shifted_u = ctx.expr(&format!("(4*n^2 + 4*n - q*(2*n^2 - n*(n - 1)*eps - 2*n))/{den}"))?;
    let eps = ctx.var(Var::Eps);
    Ok(StepOut::new()
        .surd_zero("the k quadratic at lower root", &eval_at(&f, Var::K, &lo)?)
        .surd_zero("the k quadratic at upper root", &eval_at(&f, Var::K, &hi)?)
        .surd_eq("lower bound for k", &lo, &Surd::new(disp_u.clone(), -&disp_v, w.clone()))?
        .surd_eq("upper bound for k", &hi, &Surd::new(disp_u, disp_v.clone(), w.clone()))?
        .surd_eq("lower bound for k + eps", &lo.add_rf(&eps), &Surd::new(shifted_u.clone(), -&disp_v, w.clone()))?
        .surd_eq("upper bound for k + eps", &hi.add_rf(&eps), &Surd::new(shifted_u, disp_v, w))?
        .positive("leading coefficient of the k quadratic", ctx.expr("n*(n - 1)*q")?)
        .side("n*(n - 1)*q > 0"))
}

/// Lower root of the k quadratic at `ε = 0` over `w = (n²+n)² - (n²-n)q(n²+n)`.
pub(crate) fn k_lo_eps0(ctx: &Ctx) -> Result<Surd> {
    let w = ctx.expr("(n^2 + n)^2 - (n^2 - n)*q*(n^2 + n)")?;
    Ok(Surd::new(ctx.expr("(2*n^2 + 2*n - q*(n^2 - n))/(n*(n - 1)*q)")?, ctx.expr("-2/(n*(n - 1)*q)")?, w))
}

/// Lower end of the admissible `k` interval over `w_B = (n+1-(n-1)q)/(n+1)`.
pub(crate) fn k_lo_interval(ctx: &Ctx) -> Result<Surd> {
    let s = ctx.expr("2*(n + 1)/(q*(n - 1))")?;
    let w = ctx.expr("(n + 1 - (n - 1)*q)/(n + 1)")?;
    Ok(Surd::new(&s - &Rf::one(), -&s, w))
}

/// `2·C_S` over `w_C = (n+1)(n+1-(n-1)q)`.
pub(crate) fn two_cs(ctx: &Ctx) -> Result<Surd> {
    let w = ctx.expr("(n + 1)*(n + 1 - (n - 1)*q)")?;
    Ok(Surd::new(ctx.expr("(q - 1)*(2*n + q + 2)/(q*n)")?, ctx.expr("-2*(q - 1)/(q*n)")?, w))
}

fn step_k_lower_eps0(ctx: &Ctx) -> Result<StepOut> {
    let (lo, _) = k_roots(ctx)?;
    let lo0 = Surd::new(lo.u.subs(Var::Eps, &Rf::zero())?, lo.v.subs(Var::Eps, &Rf::zero())?, lo.radicand().subs(Var::Eps, &Rf::zero())?);
    let disp = k_lo_eps0(ctx)?;
    let four = Rf::int(4);
    let nn1 = ctx.expr("n*(n + 1)")?;
    let interval = k_lo_interval(ctx)?;
    Ok(StepOut::new()
        .surd_eq("lower bound at eps = 0", &lo0.rebase(&four, disp.radicand())?, &disp)?
        .surd_eq("matches the interval end", &disp.rebase(&nn1, interval.radicand())?, &interval)?
        .positive("rebase factor n*(n + 1)", nn1))
}

fn step_threshold(ctx: &Ctx) -> Result<StepOut> {
    let c = disp_gamma0(ctx)?.c.subs(Var::A, &ctx.expr(A_CHOICE)?)?;
    let p_at_lo = eval_at(&ctx.expr("1 + (n - 1)/n*k")?, Var::K, &k_lo_eps0(ctx)?)?;
    let target = two_cs(ctx)?;
    let n = ctx.var(Var::N);
    let p_at_lo = p_at_lo.rebase(&n, target.radicand())?;
    let p_disp = Surd::new(ctx.expr("(2*n + q + 2)/(q*n)")?, ctx.expr("-2/(q*n)")?, target.radicand().clone());
    let q1 = ctx.expr("q - 1")?;
    Ok(StepOut::new()
        .eq("C after the a-choice", c, ctx.expr(&format!("(q - 1)*{P}*lambda - 1"))?)
        .surd_eq("1 + (n-1)k/n at the lower bound", &p_at_lo, &p_disp)?
        .surd_eq("(q - 1)(1 + (n-1)k/n) equals 2 C_S", &p_at_lo.scale(&q1), &target)?
        .positive("rebase factor n", n))
}

type StepFn = fn(&Ctx) -> Result<StepOut>;

pub fn verify_section2_chain() -> PassReport {
    verify_section2_chain_with(&VerifyOptions::default())
}

pub fn verify_section2_chain_with(opts: &VerifyOptions) -> PassReport {
    let list: [(&str, &[Var], StepFn); 9] = [
        ("step1 combined coefficients", &[], step_combined),
        ("step2 b-choice forces D = -eps", &[Var::B], step_b_choice),
        ("step3 gamma = 0", &[Var::B, Var::Gamma], step_gamma0),
        ("step4 a-choice kills B", &[Var::A], step_a_choice),
        ("step5 A as a quadratic in beta", &[Var::A], step_quadratic),
        ("step6 discriminant and the k quadratic", &[Var::Beta], step_discriminant),
        ("step7 discriminant of the k quadratic in k", &[Var::K, Var::Eps], step_delta),
        ("step8 bounds for k and k + eps", &[Var::K, Var::Eps], step_k_bounds),
        ("step9 lower bound at eps = 0", &[Var::K, Var::Eps], step_k_lower_eps0),
    ];
    let mut steps: Vec<Step> = list.iter().map(|(name, keep, f)| Step { name, keep_symbolic: keep, run: f }).collect();
    steps.push(Step { name: "step10 threshold equals 1/(2 C_S)", keep_symbolic: &[Var::A, Var::K], run: &step_threshold });
    run_pass("section2", &steps, &admissible_points(), opts)
}
