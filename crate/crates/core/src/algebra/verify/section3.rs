//! The chain with the eigenvalue `λ₁` that yields `F(k)` and the `k` interval.

use super::lemmas::{square_partial, cs_partial, i6_by_hessian};
use super::section2::{k_lo_interval, two_cs, K_QUADRATIC};
use super::{admissible_points, display, run_pass, CoefficientSet, PassReport, Step, StepOut, VerifyOptions};
use crate::algebra::formal::{Ctx, FormalExpr, FormalTerm as T};
use crate::algebra::poly::int;
use crate::algebra::rational::RationalFunction as Rf;
use crate::algebra::surd::{eval_at, Surd};
use crate::algebra::var::Var;
use crate::Result;

const S: &str = "(3*gamma - 4*a + 2*b*k*(1 - 1/n))";
const B_CHOICE: &str = "gamma/2*(1 - 1/k) + a/k";
const P: &str = "(1 + (n - 1)*k/n)";
const X_HI: &str = "(4*n^2 + 4*n + q)*k/(2*(n + 1)*(k*n + n - 1))";
const X_LO: &str = "(k*n + n - k)*q/(2*(n + 1))";
const QK: &str = "(k^2 + (2 - 4*(n + 1)/((n - 1)*q))*k + 1)";
const F: &str = "1/(q - 1)*(1 - (n + (n - 1)*k)*(k*n + n - 1)*q/((4*n^2 + 4*n + q)*k))*lambda1 \
                 + q*n*(k*n + n - 1)/((q - 1)*(4*n^2 + 4*n + q)*k)";

fn basis() -> [T; 4] {
    [T::i1(), T::i4(), T::i3(), T::i5()]
}

fn combined(ctx: &Ctx) -> Result<FormalExpr> {
    Ok(square_partial(ctx)?.add(&cs_partial(ctx)?.scale(&ctx.var(Var::K))))
}

fn disp_combined(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[
            (T::i1(), "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + k*b^2*(1 - 1/n)"),
            (T::i4(), "2 - 2*a/gamma + k*(2*b/gamma - 1/n)"),
            (T::i6(), S),
            (T::i5(), "2*a/gamma - 1 + k*(1 - 2*b/gamma)"),
            (T::i3(), "-1"),
        ],
        &[],
    )
}

/// `A(γ), B(γ), C(γ), D(γ)` on `(I1, I4, I3, I5)` once `I6` is eliminated.
fn eliminated(ctx: &Ctx) -> Result<CoefficientSet> {
    Ok(CoefficientSet::of(&combined(ctx)?.substitute(&T::i6(), &i6_by_hessian(ctx)?), basis()))
}

fn disp_gamma(ctx: &Ctx) -> Result<CoefficientSet> {
    let s = ctx.expr(S)?;
    let env = [("S", &s)];
    Ok(CoefficientSet {
        a: ctx.expr_env(
            "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + b^2*k*(1 - 1/n) \
             + S*(beta*q - beta - gamma - 1)*(beta + 1)/(beta*q - gamma)",
            &env,
        )?,
        b: ctx.expr_env("2 - 2*a/gamma + k*(2*b/gamma - 1/n) + S/(beta*q - gamma)", &env)?,
        c: ctx.expr_env("-(lambda*(q - 1)/(beta*q - gamma)*S + 1)", &env)?,
        d: ctx.expr("2*a/gamma - 1 + k*(1 - 2*b/gamma)")?,
    })
}

fn with_b(ctx: &Ctx) -> Result<CoefficientSet> {
    let b = ctx.expr(B_CHOICE)?;
    eliminated(ctx)?.map(|c| c.subs(Var::B, &b))
}

fn disp_with_b(ctx: &Ctx) -> Result<CoefficientSet> {
    let bb = ctx.expr(B_CHOICE)?;
    let env = [("bb", &bb)];
    let s = "(3*gamma - 4*a + 2*bb*k*(1 - 1/n))";
    Ok(CoefficientSet {
        a: ctx.expr_env(
            &format!(
                "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + bb^2*k*(1 - 1/n) \
                 + {s}*(beta*q - beta - gamma - 1)*(beta + 1)/(beta*q - gamma)"
            ),
            &env,
        )?,
        b: ctx.expr_env(&format!("1 + (n - 1)*k/n + {s}/(beta*q - gamma)"), &env)?,
        c: ctx.expr_env(&format!("-(lambda*(q - 1)/(beta*q - gamma)*{s} + 1)"), &env)?,
        d: Rf::zero(),
    })
}

fn disp_gamma0(ctx: &Ctx) -> Result<CoefficientSet> {
    Ok(CoefficientSet {
        a: ctx.expr("2*a + a^2 + a^2/k*((n - 1)/n) - 2*a*((n + 1)/n)*(beta*q - beta - 1)*(beta + 1)/(beta*q)")?,
        b: ctx.expr("1 + (n - 1)*k/n - 2*a/(beta*q)*((n + 1)/n)")?,
        c: ctx.expr("lambda*(q - 1)/(beta*q)*(2*a*(n + 1)/n) - 1")?,
        d: Rf::zero(),
    })
}

/// The γ = 0 coefficients with `a = xy` and `β = y`.
fn in_xy(ctx: &Ctx) -> Result<CoefficientSet> {
    let a = ctx.expr("x*y")?;
    let beta = ctx.var(Var::Y);
    disp_gamma0(ctx)?.map(|c| c.subs(Var::A, &a)?.subs(Var::Beta, &beta))
}

fn quad_y(ctx: &Ctx) -> Result<Rf> {
    ctx.expr(
        "y^2*(x + x*((n - 1)/(k*n)) - 2*((n + 1)/n) + 2*((n + 1)/(q*n))) \
         + y*(2 + 2*((n + 1)/(q*n)) - 2*((q - 1)/q)*((n + 1)/n)) + 2*((n + 1)/(q*n))",
    )
}

fn step_combined(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("combined inequality", &combined(ctx)?, &disp_combined(ctx)?).side("k >= 0"))
}

fn step_eliminated(ctx: &Ctx) -> Result<StepOut> {
    let e = combined(ctx)?.substitute(&T::i6(), &i6_by_hessian(ctx)?);
    let rest = e.sub(&FormalExpr::from_terms(basis().into_iter().map(|t| {
        let c = e.coeff(&t);
        (t, c)
    })));
    let mut out = StepOut::new().coeffs("", &eliminated(ctx)?, &disp_gamma(ctx)?);
    if !rest.is_zero() {
        out = out.exprs("no terms outside the basis", &rest, &FormalExpr::zero());
    }
    Ok(out.side("gamma != beta*q"))
}

fn step_b_choice(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().coeffs("", &with_b(ctx)?, &disp_with_b(ctx)?))
}

fn step_gamma0(ctx: &Ctx) -> Result<StepOut> {
    let lim = with_b(ctx)?.map(|c| c.limit_zero(Var::Gamma))?;
    Ok(StepOut::new().coeffs("", &lim, &disp_gamma0(ctx)?))
}

fn step_xy(ctx: &Ctx) -> Result<StepOut> {
    let c = in_xy(ctx)?;
    let x = ctx.var(Var::X);
    Ok(StepOut::new()
        .eq("A = x * (quadratic in y)", c.a, &x * &quad_y(ctx)?)
        .eq("B in terms of x", c.b, ctx.expr(&format!("{P} - 2*x*(n + 1)/(q*n)"))?)
        .eq("C in terms of x", c.c, ctx.expr("2*lambda*(q - 1)*(n + 1)*x/(q*n) - 1")?)
        .side("x != 0"))
}

fn step_x_upper(ctx: &Ctx) -> Result<StepOut> {
    let f = quad_y(ctx)?;
    let c: Vec<Rf> = (0..3).map(|d| f.coeff_in(Var::Y, d)).collect::<Result<_>>()?;
    let disc = &(&c[1] * &c[1]) - &(&c[2] * &c[0]).scale(&int(4));
    let shown = ctx.expr(
        "(2 + 2*((n + 1)/(q*n)) - 2*((q - 1)/q)*((n + 1)/n))^2 \
         - 8*((n + 1)/(q*n))*(x + x*((n - 1)/(k*n)) - 2*((n + 1)/n) + 2*((n + 1)/(q*n)))",
    )?;
    let factor = ctx.expr("8*(n + 1)*(k*n + n - 1)/(q*k*n^2)")?;
    let linear = -&(&factor * &ctx.expr(&format!("x - {X_HI}"))?);
    Ok(StepOut::new()
        .eq("discriminant in y", disc.clone(), shown)
        .eq("discriminant = -factor * (x - x_hi)", disc, linear)
        .cleared(&factor)
        .positive("cleared factor", factor))
}

fn step_x_lower(ctx: &Ctx) -> Result<StepOut> {
    let b = in_xy(ctx)?.b;
    let factor = ctx.expr("2*(n + 1)/(q*n)")?;
    Ok(StepOut::new()
        .eq("B = -factor * (x - x_lo)", b, -&(&factor * &ctx.expr(&format!("x - {X_LO}"))?))
        .cleared(&factor)
        .positive("cleared factor", factor))
}

fn interval(ctx: &Ctx) -> Result<(Surd, Surd)> {
    let lo = k_lo_interval(ctx)?;
    let hi = Surd::new(lo.u.clone(), -&lo.v, lo.radicand().clone());
    Ok((lo, hi))
}

fn step_compatibility(ctx: &Ctx) -> Result<StepOut> {
    let gap = ctx.expr(&format!("{X_HI} - {X_LO}"))?;
    let factor = ctx.expr("n*(n - 1)*q/(2*(n + 1)*(k*n + n - 1))")?;
    let qk = ctx.expr(QK)?;
    let kquad = ctx.expr(K_QUADRATIC)?.subs(Var::Eps, &Rf::zero())?;
    let (lo, hi) = interval(ctx)?;
    let one = Surd::rational(Rf::one(), lo.radicand());
    Ok(StepOut::new()
        .eq("x_hi - x_lo = -factor * Q(k)", gap, -&(&factor * &qk))
        .eq("the k quadratic at eps = 0 is n(n-1)q Q(k)", kquad, &ctx.expr("n*(n - 1)*q")? * &qk)
        .surd_zero("Q at the lower end", &eval_at(&qk, Var::K, &lo)?)
        .surd_zero("Q at the upper end", &eval_at(&qk, Var::K, &hi)?)
        .surd_eq("product of the ends", &lo.mul(&hi)?, &one)?
        .cleared(&factor)
        .positive("cleared factor", factor)
        .side("n >= 2"))
}

fn rhs(ctx: &Ctx) -> Result<Rf> {
    ctx.expr(&format!("lambda1/(q - 1) + (1 - lambda1*{P})/(2*(q - 1)*(n + 1)*x/(q*n))"))
}

fn step_star3(ctx: &Ctx) -> Result<StepOut> {
    let c = in_xy(ctx)?;
    let lhs = &c.c + &(&c.b * &ctx.var(Var::Lambda1));
    let factor = ctx.expr("2*(q - 1)*(n + 1)*x/(q*n)")?;
    let shifted = &ctx.var(Var::Lambda) - &rhs(ctx)?;
    Ok(StepOut::new()
        .eq("C + B lambda1 = factor * (lambda - rhs)", lhs, &factor * &shifted)
        .cleared(&factor)
        .positive("cleared factor", factor)
        .side("q > 1")
        .side("x > 0"))
}

fn step_f(ctx: &Ctx) -> Result<StepOut> {
    let at_hi = rhs(ctx)?.subs(Var::X, &ctx.expr(X_HI)?)?;
    let f = ctx.expr(F)?;
    let coeff = f.coeff_in(Var::Lambda1, 1)?;
    let shown = ctx.expr(&format!("-q*n*(n - 1)*{QK}/((4*n^2 + 4*n + q)*k*(q - 1))"))?;
    Ok(StepOut::new().eq("rhs at x_hi", at_hi, f).eq("lambda1 coefficient", coeff, shown))
}

fn step_recovery(ctx: &Ctx) -> Result<StepOut> {
    let (lo, _) = interval(ctx)?;
    let f = ctx.expr(F)?;
    let coeff = f.coeff_in(Var::Lambda1, 1)?;
    let rest = f.coeff_in(Var::Lambda1, 0)?;
    let target = two_cs(ctx)?;
    let value = eval_at(&rest, Var::K, &lo)?.rebase(&ctx.expr("1/(n + 1)")?, target.radicand())?;
    let one = Surd::rational(Rf::one(), target.radicand());
    Ok(StepOut::new()
        .surd_zero("lambda1 coefficient at the lower end", &eval_at(&coeff, Var::K, &lo)?)
        .surd_eq("2 C_S F(k_lo) = 1", &value.mul(&target)?, &one)?
        .positive("rebase factor 1/(n + 1)", ctx.expr("1/(n + 1)")?))
}

type StepFn = fn(&Ctx) -> Result<StepOut>;

pub fn verify_section3_chain() -> PassReport {
    verify_section3_chain_with(&VerifyOptions::default())
}

pub fn verify_section3_chain_with(opts: &VerifyOptions) -> PassReport {
    let list: [(&str, &[Var], StepFn); 11] = [
        ("step1 combined inequality", &[], step_combined),
        ("step2 eliminate the I6 term", &[], step_eliminated),
        ("step3 b-choice forces D = 0", &[Var::B], step_b_choice),
        ("step4 gamma = 0", &[Var::B, Var::Gamma], step_gamma0),
        ("step5 rewrite in x and y", &[Var::A, Var::Beta], step_xy),
        ("step6 discriminant gives the upper bound for x", &[Var::Y, Var::A, Var::Beta], step_x_upper),
        ("step7 B <= 0 gives the lower bound for x", &[Var::A, Var::Beta], step_x_lower),
        ("step8 compatibility quadratic in k", &[Var::K, Var::Eps], step_compatibility),
        ("step9 C >= -B lambda1 rearranged", &[Var::A, Var::Beta], step_star3),
        ("step10 F(k) at the upper bound for x", &[Var::X, Var::Lambda1], step_f),
        ("step11 lower end recovers 1/(2 C_S)", &[Var::K, Var::Lambda1], step_recovery),
    ];
    let steps: Vec<Step> = list.iter().map(|(name, keep, f)| Step { name, keep_symbolic: keep, run: f }).collect();
    run_pass("section3", &steps, &admissible_points(), opts)
}
