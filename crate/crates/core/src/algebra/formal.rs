//! Formal integrals over a positive function `v` and the axioms that relate
//! them.
//!
//! An integral is never evaluated. It is a basis vector, and a derivation is
//! exact linear algebra over rational-function coefficients. Exponents of `v`
//! are always symbolic polynomials in `γ, β, q`, so that the basis is the same
//! whether the coefficients are symbolic or instantiated at a point.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use super::parse::parse_with;
use super::poly::Poly;
use super::rational::{Point, RationalFunction as Rf};
use super::var::Var;
use crate::{Error, Result};

/// A basis integral.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormalTerm {
    /// `∫ v^exp |∂v|^(2·grad) (□v)^boxes`
    Power { exp: Poly, grad: u8, boxes: u8 },
    /// `∫ |v_{ij̄}|² v^γ`
    MixedHessSq,
    /// `∫ v^(γ-1) v_{ij̄} v_ī v_j`
    MixedHessGrad,
    /// `∫ v^γ |v_{īj̄}|²`
    PureHessSq,
    /// `∫ v^(γ-1) v_i v_j v_{īj̄}`
    PureHessGrad,
    /// `∫ (|v_{ij̄}|² - (□v)²/n) v^γ`
    TraceFree,
}

/// Parses a symbolic polynomial (used for exponents).
pub fn poly(src: &str) -> Poly {
    let r = super::parse::parse(src).unwrap_or_else(|e| panic!("bad polynomial {src:?}: {e}"));
    assert_eq!(r.denominator_factors().count(), 0, "{src:?} is not a polynomial");
    r.numerator().clone()
}

impl FormalTerm {
    pub fn power(exp: &str, grad: u8, boxes: u8) -> Self {
        FormalTerm::Power { exp: poly(exp), grad, boxes }
    }

    /// `∫ v^(γ-2) |∂v|⁴`
    pub fn i1() -> Self {
        FormalTerm::power("gamma - 2", 2, 0)
    }

    /// `∫ v^(β+γ-βq) |∂v|²`
    pub fn i2() -> Self {
        FormalTerm::power("beta + gamma - beta*q", 1, 0)
    }

    /// `∫ v^γ |∂v|²`
    pub fn i3() -> Self {
        FormalTerm::power("gamma", 1, 0)
    }

    /// `∫ v^γ (□v)²`
    pub fn i4() -> Self {
        FormalTerm::power("gamma", 0, 2)
    }

    pub fn i5() -> Self {
        FormalTerm::MixedHessSq
    }

    /// `∫ v^(γ-1) |∂v|² □v`
    pub fn i6() -> Self {
        FormalTerm::power("gamma - 1", 1, 1)
    }

    pub fn i7() -> Self {
        FormalTerm::MixedHessGrad
    }

    pub fn i8() -> Self {
        FormalTerm::PureHessSq
    }

    pub fn i9() -> Self {
        FormalTerm::PureHessGrad
    }

    /// `∫ v^p □v`
    pub fn j(p: Poly) -> Self {
        FormalTerm::Power { exp: p, grad: 0, boxes: 1 }
    }

    /// `∫ v^(p-1) |∂v|²`
    pub fn k(p: &Poly) -> Self {
        FormalTerm::Power { exp: p - &Poly::one(), grad: 1, boxes: 0 }
    }

    fn label(&self) -> Option<&'static str> {
        let named = [
            (FormalTerm::i1(), "I1"),
            (FormalTerm::i2(), "I2"),
            (FormalTerm::i3(), "I3"),
            (FormalTerm::i4(), "I4"),
            (FormalTerm::i5(), "I5"),
            (FormalTerm::i6(), "I6"),
            (FormalTerm::i7(), "I7"),
            (FormalTerm::i8(), "I8"),
            (FormalTerm::i9(), "I9"),
            (FormalTerm::TraceFree, "T"),
        ];
        named.into_iter().find(|(t, _)| t == self).map(|(_, s)| s)
    }
}

impl fmt::Display for FormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.label() {
            return f.write_str(l);
        }
        match self {
            FormalTerm::Power { exp, grad, boxes } => {
                write!(f, "∫v^({exp})")?;
                if *grad > 0 {
                    write!(f, "|∂v|^{}", 2 * grad)?;
                }
                if *boxes > 0 {
                    write!(f, "(□v)^{boxes}")?;
                }
                Ok(())
            }
            _ => unreachable!("all tags are labelled"),
        }
    }
}

impl Serialize for FormalTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Linear combination of basis integrals.
#[derive(Debug, Clone, Default)]
pub struct FormalExpr {
    terms: BTreeMap<FormalTerm, Rf>,
}

impl FormalExpr {
    pub fn zero() -> Self {
        FormalExpr::default()
    }

    pub fn term(t: FormalTerm, c: Rf) -> Self {
        let mut e = FormalExpr::zero();
        e.add_term(t, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FormalTerm, Rf)>) -> Self {
        let mut e = FormalExpr::zero();
        for (t, c) in terms {
            e.add_term(t, c);
        }
        e
    }

    pub fn add_term(&mut self, t: FormalTerm, c: Rf) {
        let sum = match self.terms.remove(&t) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(t, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &FormalTerm) -> Rf {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormalTerm, &Rf)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<FormalTerm> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, o: &FormalExpr) -> FormalExpr {
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &FormalExpr) -> FormalExpr {
        self.add(&o.scale(&Rf::int(-1)))
    }

    pub fn scale(&self, c: &Rf) -> FormalExpr {
        FormalExpr::from_terms(self.terms.iter().map(|(t, a)| (t.clone(), a * c)))
    }

    /// Replaces every occurrence of `t` by `by`.
    pub fn substitute(&self, t: &FormalTerm, by: &FormalExpr) -> FormalExpr {
        let mut out = self.clone();
        if let Some(c) = out.terms.remove(t) {
            out = out.add(&by.scale(&c));
        }
        out
    }

    /// Solves the relation `self = 0` for `t`.
    pub fn solve_for(&self, t: &FormalTerm) -> Result<FormalExpr> {
        let c = self.coeff(t);
        if c.is_zero() {
            return Err(Error::Algebra(format!("{t} does not occur in the relation")));
        }
        let mut rest = self.clone();
        rest.terms.remove(t);
        Ok(rest.scale(&(-&c.recip()?)))
    }

    /// Coefficient-wise differences against `other` that are not zero.
    pub fn mismatches(&self, other: &FormalExpr) -> Vec<(FormalTerm, Rf)> {
        self.sub(other).terms.into_iter().collect()
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&Rf) -> Result<Rf>) -> Result<FormalExpr> {
        let mut out = FormalExpr::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for FormalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("({c})·{t}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Evaluation context: variables in `point` are replaced by their values,
/// all others stay symbolic.
#[derive(Debug, Clone, Default)]
pub struct Ctx {
    point: Point,
}

impl Ctx {
    pub fn symbolic() -> Self {
        Ctx::default()
    }

    pub fn at(point: Point) -> Self {
        Ctx { point }
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn is_symbolic(&self) -> bool {
        self.point.is_empty()
    }

    pub fn var(&self, v: Var) -> Rf {
        match self.point.get(&v) {
            Some(x) => Rf::constant(x.clone()),
            None => Rf::var(v),
        }
    }

    /// Parses a coefficient expression.
    pub fn expr(&self, src: &str) -> Result<Rf> {
        self.expr_env(src, &[])
    }

    /// Parses with extra named sub-expressions.
    pub fn expr_env(&self, src: &str, env: &[(&str, &Rf)]) -> Result<Rf> {
        let look = |name: &str| {
            if let Some((_, r)) = env.iter().find(|(n, _)| *n == name) {
                return Some((*r).clone());
            }
            Var::parse(name).map(|v| self.var(v))
        };
        parse_with(src, &look)
    }

    /// A symbolic polynomial read in this context.
    pub fn poly(&self, p: &Poly) -> Rf {
        let f = |v: Var| self.point.get(&v).cloned();
        Rf::from_poly(p.eval_partial(&f))
    }

    pub fn constant(&self, c: BigRational) -> Rf {
        Rf::constant(c)
    }
}

/// The trusted relations between basis integrals.
pub mod axioms {
    use super::*;

    /// Substitutes one factor `□v` from the equation satisfied by `v`:
    /// `□v = (1/β)v^(β+1-βq) - (λ/β)v + (β+1)|∂v|²/v`.
    pub fn expand_box(ctx: &Ctx, t: &FormalTerm) -> Result<FormalExpr> {
        let FormalTerm::Power { exp, grad, boxes } = t else {
            return Err(Error::Algebra(format!("{t} has no □v factor to expand")));
        };
        if *boxes == 0 {
            return Err(Error::Algebra(format!("{t} has no □v factor to expand")));
        }
        let (g, c) = (*grad, boxes - 1);
        Ok(FormalExpr::from_terms([
            (FormalTerm::Power { exp: exp + &poly("beta + 1 - beta*q"), grad: g, boxes: c }, ctx.expr("1/beta")?),
            (FormalTerm::Power { exp: exp + &Poly::one(), grad: g, boxes: c }, ctx.expr("-lambda/beta")?),
            (FormalTerm::Power { exp: exp - &Poly::one(), grad: g + 1, boxes: c }, ctx.expr("beta + 1")?),
        ]))
    }

    /// Rewrites `t` inside `e` with [`expand_box`].
    pub fn apply_box(ctx: &Ctx, e: &FormalExpr, t: &FormalTerm) -> Result<FormalExpr> {
        Ok(e.substitute(t, &expand_box(ctx, t)?))
    }

    /// Integration by parts: `∫ v^p □v = -p ∫ v^(p-1) |∂v|²`.
    pub fn ibp(ctx: &Ctx, t: &FormalTerm) -> Result<FormalExpr> {
        match t {
            FormalTerm::Power { exp, grad: 0, boxes: 1 } => Ok(FormalExpr::term(FormalTerm::k(exp), -&ctx.poly(exp))),
            _ => Err(Error::Algebra(format!("{t} is not of the form ∫v^p□v"))),
        }
    }

    pub fn apply_ibp(ctx: &Ctx, e: &FormalExpr, t: &FormalTerm) -> Result<FormalExpr> {
        Ok(e.substitute(t, &ibp(ctx, t)?))
    }

    /// `∫ v^(γ-1) v_i v_j v_{īj̄} = -I7 - (γ-1) I1 - I6`.
    pub fn pure_hess_grad(ctx: &Ctx) -> Result<FormalExpr> {
        Ok(FormalExpr::from_terms([
            (FormalTerm::i7(), Rf::int(-1)),
            (FormalTerm::i1(), ctx.expr("1 - gamma")?),
            (FormalTerm::i6(), Rf::int(-1)),
        ]))
    }

    /// Integration by parts on the mixed Hessian, as a relation equal to zero:
    /// `I5 - I4 - γ I6 + γ I7 = 0`.
    pub fn mixed_hessian_relation(ctx: &Ctx) -> Result<FormalExpr> {
        Ok(FormalExpr::from_terms([
            (FormalTerm::i5(), Rf::one()),
            (FormalTerm::i4(), Rf::int(-1)),
            (FormalTerm::i6(), -&ctx.var(Var::Gamma)),
            (FormalTerm::i7(), ctx.var(Var::Gamma)),
        ]))
    }

    /// Upper bound for `I8` from the Bochner argument under `Ric ≥ 1`:
    /// `I8 ≤ γ(γ-1) I1 + γ I7 + 2γ I6 + I4 - I3`.
    pub fn pure_hessian_bound(ctx: &Ctx) -> Result<FormalExpr> {
        Ok(FormalExpr::from_terms([
            (FormalTerm::i1(), ctx.expr("gamma*(gamma - 1)")?),
            (FormalTerm::i7(), ctx.var(Var::Gamma)),
            (FormalTerm::i6(), ctx.expr("2*gamma")?),
            (FormalTerm::i4(), Rf::one()),
            (FormalTerm::i3(), Rf::int(-1)),
        ]))
    }

    /// `xx + 2b·xy + b²·yy` for basis terms.
    pub fn square_expansion(b: &Rf, xx: FormalTerm, xy: FormalTerm, yy: FormalTerm) -> FormalExpr {
        FormalExpr::from_terms([(xx, Rf::one()), (xy, b.scale(&crate::algebra::poly::int(2))), (yy, b * b)])
    }

    /// Cauchy-Schwarz on the mixed Hessian, as an expression that is `≥ 0`:
    /// `|v_{ij̄} + b v_i v_j̄ / v|² v^γ - (1/n)(□v + b|∂v|²/v)² v^γ`.
    pub fn cauchy_schwarz(ctx: &Ctx, b: &Rf) -> Result<FormalExpr> {
        let lhs = square_expansion(b, FormalTerm::i5(), FormalTerm::i7(), FormalTerm::i1());
        let rhs = square_expansion(b, FormalTerm::i4(), FormalTerm::i6(), FormalTerm::i1());
        Ok(lhs.sub(&rhs.scale(&ctx.expr("1/n")?)))
    }
}
