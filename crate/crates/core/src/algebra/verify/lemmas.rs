//! The integral identities for `v` and the two parametrised inequalities.

use super::{admissible_points, display, run_pass, CoefficientSet, PassReport, Step, StepOut, VerifyOptions};
use crate::algebra::formal::{axioms, poly, Ctx, FormalExpr, FormalTerm as T};
use crate::algebra::rational::RationalFunction as Rf;
use crate::algebra::var::Var;
use crate::{Error, Result};

type StepFn = fn(&Ctx) -> Result<StepOut>;

/// `I6` rewritten with the equation for `v`.
pub fn i6_by_equation(ctx: &Ctx) -> Result<FormalExpr> {
    axioms::expand_box(ctx, &T::i6())
}

/// `I4` after one box expansion and integration by parts, before `I6` is
/// replaced.
pub(crate) fn i4_partial(ctx: &Ctx) -> Result<FormalExpr> {
    let e = axioms::apply_box(ctx, &FormalExpr::term(T::i4(), Rf::one()), &T::i4())?;
    let e = axioms::apply_ibp(ctx, &e, &T::j(poly("beta + gamma + 1 - beta*q")))?;
    axioms::apply_ibp(ctx, &e, &T::j(poly("gamma + 1")))
}

/// `I4` in terms of `I1, I2, I3`.
pub fn i4_by_equation(ctx: &Ctx) -> Result<FormalExpr> {
    Ok(i4_partial(ctx)?.substitute(&T::i6(), &i6_by_equation(ctx)?))
}

/// `I7` from the mixed Hessian integration by parts.
pub fn i7_by_hessian(ctx: &Ctx) -> Result<FormalExpr> {
    axioms::mixed_hessian_relation(ctx)?.solve_for(&T::i7())
}

/// `I6` in terms of `I4, I3, I1`.
pub fn i6_by_hessian(ctx: &Ctx) -> Result<FormalExpr> {
    let eq6 = i4_partial(ctx)?.sub(&FormalExpr::term(T::i4(), Rf::one()));
    let eq7 = i6_by_equation(ctx)?.sub(&FormalExpr::term(T::i6(), Rf::one())).solve_for(&T::i2())?;
    eq6.substitute(&T::i2(), &eq7).solve_for(&T::i6())
}

fn disp_i6(ctx: &Ctx) -> Result<FormalExpr> {
    display(ctx, &[(T::i2(), "1/beta"), (T::i3(), "-lambda/beta"), (T::i1(), "beta + 1")], &[])
}

fn disp_i4_partial(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[
            (T::i2(), "(beta*q - beta - gamma - 1)/beta"),
            (T::i3(), "lambda*(gamma + 1)/beta"),
            (T::i6(), "beta + 1"),
        ],
        &[],
    )
}

fn disp_i4(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[(T::i2(), "(beta*q - gamma)/beta"), (T::i3(), "lambda*(gamma - beta)/beta"), (T::i1(), "(beta + 1)^2")],
        &[],
    )
}

fn disp_i7(ctx: &Ctx) -> Result<FormalExpr> {
    display(ctx, &[(T::i4(), "1/gamma"), (T::i6(), "1"), (T::i5(), "-1/gamma")], &[])
}

fn disp_i6_hessian(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[
            (T::i4(), "1/(beta*q - gamma)"),
            (T::i3(), "-lambda*(q - 1)/(beta*q - gamma)"),
            (T::i1(), "(beta*q - beta - gamma - 1)*(beta + 1)/(beta*q - gamma)"),
        ],
        &[],
    )
}

/// The pure-Hessian square with parameter `a`, after the `I9` rewrite.
pub(crate) fn square_expansion(ctx: &Ctx) -> Result<FormalExpr> {
    let a = ctx.var(Var::A);
    let e = FormalExpr::from_terms([(T::i8(), Rf::one()), (T::i9(), a.scale(&crate::algebra::poly::int(2))), (T::i1(), &a * &a)]);
    Ok(e.substitute(&T::i9(), &axioms::pure_hess_grad(ctx)?))
}

/// Upper bound for the square before the equation for `v` is used.
pub(crate) fn square_partial(ctx: &Ctx) -> Result<FormalExpr> {
    let e = square_expansion(ctx)?.substitute(&T::i8(), &axioms::pure_hessian_bound(ctx)?);
    Ok(e.substitute(&T::i7(), &i7_by_hessian(ctx)?))
}

const BASIS: fn() -> [T; 4] = || [T::i1(), T::i2(), T::i3(), T::i5()];

/// `(A₁, B₁, C₁, D₁)` on `(I1, I2, I3, I5)`.
pub fn square_coefficients(ctx: &Ctx) -> Result<CoefficientSet> {
    let e = square_partial(ctx)?.substitute(&T::i6(), &i6_by_equation(ctx)?).substitute(&T::i4(), &i4_by_equation(ctx)?);
    Ok(CoefficientSet::of(&e, BASIS()))
}

pub(crate) fn disp_square(ctx: &Ctx) -> Result<CoefficientSet> {
    Ok(CoefficientSet {
        a: ctx.expr(
            "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2 + (3*gamma - 4*a)*(beta + 1) + (2 - 2*a/gamma)*(beta + 1)^2",
        )?,
        b: ctx.expr("(3*gamma - 4*a)/beta + (2 - 2*a/gamma)*((beta*q - gamma)/beta)")?,
        c: ctx.expr("(4*a - 3*gamma)*lambda/beta + (2 - 2*a/gamma)*lambda*(gamma - beta)/beta - 1")?,
        d: ctx.expr("2*a/gamma - 1")?,
    })
}

pub(crate) fn disp_square_partial(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[
            (T::i1(), "gamma*(gamma - 1) - 2*a*(gamma - 1) + a^2"),
            (T::i6(), "3*gamma - 4*a"),
            (T::i4(), "2 - 2*a/gamma"),
            (T::i5(), "2*a/gamma - 1"),
            (T::i3(), "-1"),
        ],
        &[],
    )
}

/// Cauchy-Schwarz with parameter `b` after the `I7` rewrite.
pub(crate) fn cs_partial(ctx: &Ctx) -> Result<FormalExpr> {
    let e = axioms::cauchy_schwarz(ctx, &ctx.var(Var::B))?;
    Ok(e.substitute(&T::i7(), &i7_by_hessian(ctx)?))
}

pub(crate) fn disp_cs_partial(ctx: &Ctx) -> Result<FormalExpr> {
    display(
        ctx,
        &[
            (T::i5(), "1 - 2*b/gamma"),
            (T::i1(), "b^2*(1 - 1/n)"),
            (T::i4(), "2*b/gamma - 1/n"),
            (T::i6(), "2*b*(1 - 1/n)"),
        ],
        &[],
    )
}

/// `(A₂, B₂, C₂, D₂)` on `(I1, I2, I3, I5)`.
pub fn cs_coefficients(ctx: &Ctx) -> Result<CoefficientSet> {
    let e = cs_partial(ctx)?.substitute(&T::i4(), &i4_by_equation(ctx)?).substitute(&T::i6(), &i6_by_equation(ctx)?);
    Ok(CoefficientSet::of(&e, BASIS()))
}

pub(crate) fn disp_cs(ctx: &Ctx) -> Result<CoefficientSet> {
    Ok(CoefficientSet {
        a: ctx.expr("b^2*(1 - 1/n) + (beta + 1)^2*(2*b/gamma - 1/n) + 2*(beta + 1)*b*(1 - 1/n)")?,
        b: ctx.expr("(2*b/gamma - 1/n)*(q - gamma/beta) + 2*b/beta*(1 - 1/n)")?,
        c: ctx.expr("lambda*((2*b/gamma - 1/n)*((gamma - beta)/beta) - 2*b/beta*(1 - 1/n))")?,
        d: ctx.expr("1 - 2*b/gamma")?,
    })
}

fn step_i6(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("I6", &i6_by_equation(ctx)?, &disp_i6(ctx)?))
}

fn step_i4_partial(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("I4", &i4_partial(ctx)?, &disp_i4_partial(ctx)?))
}

fn step_i4(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("I4", &i4_by_equation(ctx)?, &disp_i4(ctx)?))
}

fn step_i7(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("I7", &i7_by_hessian(ctx)?, &disp_i7(ctx)?))
}

fn step_box_squared(ctx: &Ctx) -> Result<StepOut> {
    step_i4_partial(ctx)
}

fn step_gradient_identity(ctx: &Ctx) -> Result<StepOut> {
    let i2 = i6_by_equation(ctx)?.sub(&FormalExpr::term(T::i6(), Rf::one())).solve_for(&T::i2())?;
    let want = display(ctx, &[(T::i6(), "beta"), (T::i3(), "lambda"), (T::i1(), "-beta*(beta + 1)")], &[])?;
    Ok(StepOut::new().exprs("I2", &i2, &want))
}

fn step_hessian_eliminated(ctx: &Ctx) -> Result<StepOut> {
    let eq6 = i4_partial(ctx)?;
    let eq7 = display(ctx, &[(T::i6(), "beta"), (T::i3(), "lambda"), (T::i1(), "-beta*(beta + 1)")], &[])?;
    let i4 = eq6.substitute(&T::i2(), &eq7);
    let want = display(
        ctx,
        &[
            (T::i6(), "beta*q - gamma"),
            (T::i3(), "lambda*(q - 1)"),
            (T::i1(), "-(beta*q - beta - gamma - 1)*(beta + 1)"),
        ],
        &[],
    )?;
    Ok(StepOut::new().exprs("I4", &i4, &want))
}

fn step_hessian_final(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("I6", &i6_by_hessian(ctx)?, &disp_i6_hessian(ctx)?).side("beta*q - gamma != 0"))
}

fn step_hessian_cross(ctx: &Ctx) -> Result<StepOut> {
    // Independent route: solve the I4 relation for I2 and feed it into the I6 relation.
    let rel2 = i4_by_equation(ctx)?.sub(&FormalExpr::term(T::i4(), Rf::one()));
    let i2 = rel2.solve_for(&T::i2())?;
    let rel1 = i6_by_equation(ctx)?.sub(&FormalExpr::term(T::i6(), Rf::one())).substitute(&T::i2(), &i2);
    // rel1 = 0 is now I6 = (...)·I4 + ... ; normalise on I6
    let i6 = rel1.solve_for(&T::i6())?;
    Ok(StepOut::new().exprs("I6", &i6, &disp_i6_hessian(ctx)?))
}

const HESSIAN_STEPS: [(&str, StepFn); 5] = [
    ("box-squared identity", step_box_squared),
    ("gradient identity solved for I2", step_gradient_identity),
    ("I2 eliminated", step_hessian_eliminated),
    ("I6 in terms of I4, I3, I1", step_hessian_final),
    ("agrees with the I6 and I4 relations solved for I6", step_hessian_cross),
];

fn steps<'a>(list: &'a [(&'a str, StepFn)], keep: &'a [Var]) -> Vec<Step<'a>> {
    list.iter().map(|(name, f)| Step { name, keep_symbolic: keep, run: f }).collect()
}

pub fn verify_lemma22(idx: u8) -> Result<PassReport> {
    verify_lemma22_with(idx, &VerifyOptions::default())
}

pub fn verify_lemma22_with(idx: u8, opts: &VerifyOptions) -> Result<PassReport> {
    let list: Vec<(&str, StepFn)> = match idx {
        1 => vec![("I6 by the equation for v", step_i6)],
        2 => vec![("I4 by the equation for v and parts", step_i4_partial), ("I6 replaced by its relation", step_i4)],
        3 => {
            let mut v: Vec<(&str, StepFn)> =
                vec![("I7 from the mixed Hessian relation", step_i7)];
            v.extend(HESSIAN_STEPS);
            v
        }
        _ => return Err(Error::domain(format!("identity index must be 1, 2 or 3, got {idx}"))),
    };
    Ok(run_pass(&format!("lemma22.{idx}"), &steps(&list, &[]), &[], opts))
}

pub fn verify_lemma31() -> PassReport {
    verify_lemma31_with(&VerifyOptions::default())
}

pub fn verify_lemma31_with(opts: &VerifyOptions) -> PassReport {
    run_pass("lemma31", &steps(&HESSIAN_STEPS, &[]), &[], opts)
}

fn step_square_expansion(ctx: &Ctx) -> Result<StepOut> {
    let want = display(
        ctx,
        &[(T::i8(), "1"), (T::i7(), "-2*a"), (T::i1(), "-2*a*(gamma - 1) + a^2"), (T::i6(), "-2*a")],
        &[],
    )?;
    Ok(StepOut::new().exprs("square", &square_expansion(ctx)?, &want))
}

fn step_square_partial(ctx: &Ctx) -> Result<StepOut> {
    let coeff = square_expansion(ctx)?.coeff(&T::i8());
    Ok(StepOut::new()
        .exprs("bound", &square_partial(ctx)?, &disp_square_partial(ctx)?)
        .positive("coefficient of I8 when bounded", coeff))
}

fn step_square_final(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().coeffs("", &square_coefficients(ctx)?, &disp_square(ctx)?))
}

pub fn verify_lemma23() -> PassReport {
    verify_lemma23_with(&VerifyOptions::default())
}

pub fn verify_lemma23_with(opts: &VerifyOptions) -> PassReport {
    let list: [(&str, StepFn); 3] = [
        ("square expanded", step_square_expansion),
        ("I8 bounded and I7 eliminated", step_square_partial),
        ("coefficients A1..D1", step_square_final),
    ];
    run_pass("lemma23", &steps(&list, &[]), &admissible_points(), opts)
}

fn step_b1_value(ctx: &Ctx) -> Result<StepOut> {
    let two_a = ctx.expr("2*a")?;
    let b1 = square_coefficients(ctx)?.b.subs(Var::Gamma, &two_a)?;
    let middle = ctx.expr("2*a/beta + (q - 2*a/beta)")?;
    Ok(StepOut::new().eq("B1 at gamma = 2a", b1, ctx.var(Var::Q)).eq("displayed simplification", middle, ctx.var(Var::Q)))
}

fn step_d1_value(ctx: &Ctx) -> Result<StepOut> {
    let d1 = square_coefficients(ctx)?.d.subs(Var::Gamma, &ctx.expr("2*a")?)?;
    Ok(StepOut::new().eq("D1 at gamma = 2a", d1, Rf::zero()))
}

fn step_b1_combined(ctx: &Ctx) -> Result<StepOut> {
    let c = square_coefficients(ctx)?;
    let left = ctx.expr("(2 - 2*a/gamma)*(q - gamma/beta)*lambda + (2 - 2*a/gamma)*lambda*(gamma/beta - 1) - 1")?;
    let lam = ctx.var(Var::Lambda);
    Ok(StepOut::new()
        .eq("left side minus C1 is lambda*B1", &left - &c.c, &lam * &c.b)
        .eq("left side simplified", left, ctx.expr("(2 - 2*a/gamma)*(q - 1)*lambda - 1")?)
        .side("lambda > 0, so B1 <= 0 makes the left side at most C1"))
}

fn step_b1_bound(ctx: &Ctx) -> Result<StepOut> {
    let bound = ctx.expr("1/((q - 1)*(2 - 2*a/gamma))")?.subs(Var::Gamma, &ctx.expr("2*a")?)?;
    Ok(StepOut::new().eq("bound at gamma = 2a", bound, ctx.expr("1/(q - 1)")?))
}

pub fn verify_remark_b1() -> PassReport {
    verify_remark_b1_with(&VerifyOptions::default())
}

pub fn verify_remark_b1_with(opts: &VerifyOptions) -> PassReport {
    let keep = [Var::Gamma];
    let list: [(&str, StepFn); 4] = [
        ("B1 at gamma = 2a equals q", step_b1_value),
        ("D1 at gamma = 2a vanishes", step_d1_value),
        ("B1 and C1 combined", step_b1_combined),
        ("lambda bound at gamma = 2a", step_b1_bound),
    ];
    let mut report = run_pass("remark_b1", &steps(&list[..2], &keep), &[], opts);
    report.steps.extend(run_pass("", &steps(&list[2..3], &[]), &[], opts).steps);
    report.steps.extend(run_pass("", &steps(&list[3..], &keep), &[], opts).steps);
    report
}

fn step_cs_expansion(ctx: &Ctx) -> Result<StepOut> {
    let want = display(
        ctx,
        &[(T::i5(), "1"), (T::i1(), "b^2*(1 - 1/n)"), (T::i7(), "2*b"), (T::i4(), "-1/n"), (T::i6(), "-2*b/n")],
        &[],
    )?;
    Ok(StepOut::new().exprs("expansion", &axioms::cauchy_schwarz(ctx, &ctx.var(Var::B))?, &want))
}

fn step_cs_partial(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().exprs("after I7", &cs_partial(ctx)?, &disp_cs_partial(ctx)?))
}

fn step_cs_final(ctx: &Ctx) -> Result<StepOut> {
    Ok(StepOut::new().coeffs("", &cs_coefficients(ctx)?, &disp_cs(ctx)?))
}

pub fn verify_lemma24() -> PassReport {
    verify_lemma24_with(&VerifyOptions::default())
}

pub fn verify_lemma24_with(opts: &VerifyOptions) -> PassReport {
    let list: [(&str, StepFn); 3] = [
        ("Cauchy-Schwarz expanded", step_cs_expansion),
        ("I7 eliminated", step_cs_partial),
        ("coefficients A2..D2", step_cs_final),
    ];
    run_pass("lemma24", &steps(&list, &[]), &[], opts)
}
