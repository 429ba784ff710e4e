//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a product of monic atoms (single variables or
//! monic polynomials without monomial content). Keeping it factored lets
//! every operation cancel by trial division without a multivariate GCD, which
//! is all the verification chains need: their denominators are products of a
//! handful of small factors such as `β`, `γ`, `k`, `n` and `βq - γ`.
//!
//! Equality never relies on the representation being canonical. Two
//! functions are equal iff the numerator of their difference is the zero
//! polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::var::Var;
use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct RationalFunction {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

/// Assignment of rational values to some indeterminates.
pub type Point = BTreeMap<Var, BigRational>;

fn pole(what: impl fmt::Display) -> Error {
    Error::Algebra(format!("division by zero: {what}"))
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction::default()
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RationalFunction::from_poly(Poly::from(n))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_poly(Poly::var(v))
    }

    /// `num / den`; a zero denominator is an error.
    pub fn new(num: Poly, den: &Poly) -> Result<Self> {
        RationalFunction::from_poly(num).div_poly(den)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    /// Denominator atoms with multiplicities.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Poly, u32)> {
        self.den.iter().map(|(p, e)| (p, *e))
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.num.contains(v) || self.den.keys().any(|p| p.contains(v))
    }

    /// Multiplies the denominator by `p^e`, splitting `p` into atoms.
    fn push_den(&mut self, p: &Poly, e: u32) -> Result<()> {
        if p.is_zero() {
            return Err(pole(p));
        }
        let (c, monic) = p.make_monic();
        let inv = num_traits::pow(c.recip(), e as usize);
        self.num = self.num.scale(&inv);
        let content = monic.monomial_content();
        for v in Var::ALL {
            let d = content.degree_in(v) as u32;
            if d > 0 {
                *self.den.entry(Poly::var(v)).or_insert(0) += d * e;
            }
        }
        let mut rest = monic.div_monomial(&content);
        'outer: while rest.as_constant().is_none() {
            for atom in self.den.keys() {
                if atom.is_monomial() {
                    continue;
                }
                if let Some(q) = rest.exact_div(atom) {
                    let atom = atom.clone();
                    *self.den.get_mut(&atom).unwrap() += e;
                    rest = q;
                    continue 'outer;
                }
            }
            *self.den.entry(rest).or_insert(0) += e;
            break;
        }
        Ok(())
    }

    /// Removes common factors between numerator and denominator atoms.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let atoms: Vec<Poly> = self.den.keys().cloned().collect();
        for atom in atoms {
            let mut e = self.den[&atom];
            while e > 0 {
                match self.num.exact_div(&atom) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&atom);
            } else {
                self.den.insert(atom, e);
            }
        }
    }

    pub fn div_poly(&self, p: &Poly) -> Result<Self> {
        let mut r = self.clone();
        r.push_den(p, 1)?;
        r.cancel();
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut r = self.clone();
        r.num = r.num.scale(c);
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(pole("reciprocal of zero"));
        }
        let mut r = RationalFunction::from_poly(self.denominator());
        r.push_den(&self.num, 1)?;
        r.cancel();
        Ok(r)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = RationalFunction::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Substitutes rational values for the variables fixed by `point`.
    pub fn eval(&self, point: &Point) -> Result<Self> {
        let f = |v: Var| point.get(&v).cloned();
        let mut r = RationalFunction::from_poly(self.num.eval_partial(&f));
        for (atom, e) in &self.den {
            r.push_den(&atom.eval_partial(&f), *e)?;
        }
        r.cancel();
        Ok(r)
    }

    /// Value at a point that fixes every variable occurring in `self`.
    pub fn value_at(&self, point: &Point) -> Result<BigRational> {
        let r = self.eval(point)?;
        r.as_constant()
            .ok_or_else(|| Error::Algebra(format!("point leaves free variables in {r}")))
    }

    /// Replaces `v` by the rational function `r`.
    pub fn subs(&self, v: Var, r: &Self) -> Result<Self> {
        let mut out = subs_poly(&self.num, v, r);
        for (atom, e) in &self.den {
            let a = subs_poly(atom, v, r);
            if a.is_zero() {
                return Err(pole(format_args!("{atom} at {v} = {r}")));
            }
            out = out.checked_div(&a.pow(*e as i32)?)?;
        }
        Ok(out)
    }

    /// Value at `v = 0` of a function that is continuous there.
    ///
    /// The factored form is already cancelled, so a surviving `v` atom in
    /// the denominator is a genuine pole.
    pub fn limit_zero(&self, v: Var) -> Result<Self> {
        if self.den.contains_key(&Poly::var(v)) {
            return Err(Error::Algebra(format!("pole at {v} = 0 in {self}")));
        }
        self.subs(v, &RationalFunction::zero())
    }

    /// Coefficient of `v^d` when the denominator does not involve `v`.
    pub fn coeff_in(&self, v: Var, d: usize) -> Result<Self> {
        if self.den.keys().any(|p| p.contains(v)) {
            return Err(Error::Algebra(format!("denominator of {self} depends on {v}")));
        }
        let c = self.num.univariate(v).get(d).cloned().unwrap_or_default();
        let mut r = RationalFunction::from_poly(c);
        r.den = self.den.clone();
        r.cancel();
        Ok(r)
    }

    /// Degree in `v` of the numerator.
    pub fn num_degree_in(&self, v: Var) -> u8 {
        self.num.degree_in(v)
    }
}

/// `p(v = r)` by Horner's rule.
fn subs_poly(p: &Poly, v: Var, r: &RationalFunction) -> RationalFunction {
    let coeffs = p.univariate(v);
    let mut acc = RationalFunction::zero();
    for c in coeffs.into_iter().rev() {
        acc = &(&acc * r) + &RationalFunction::from_poly(c);
    }
    acc
}

/// Exact equality of rational functions.
pub fn rf_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    (a - b).is_zero()
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        rf_equal(self, other)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        RationalFunction::var(v)
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        RationalFunction::int(n)
    }
}

// lifting to the common denominator multiplies inside the sum
#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut lcm = self.den.clone();
        for (p, e) in &rhs.den {
            let slot = lcm.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |f: &RationalFunction| {
            lcm.iter().fold(f.num.clone(), |acc, (p, e)| {
                let have = f.den.get(p).copied().unwrap_or(0);
                &acc * &p.pow(e - have)
            })
        };
        let mut r = RationalFunction { num: &lift(self) + &lift(rhs), den: lcm.clone() };
        r.cancel();
        r
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let mut r = RationalFunction { num: &self.num * &rhs.num, den: self.den.clone() };
        for (p, e) in &rhs.den {
            // atoms are nonzero, so this cannot fail
            r.push_den(p, *e).expect("nonzero atom");
        }
        r.cancel();
        r
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction { $tr::$m(&self, &rhs) }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

fn wrap(p: &Poly) -> String {
    if p.len() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| if *e == 1 { wrap(p) } else { format!("{}^{e}", wrap(p)) })
            .collect();
        let den = if den.len() > 1 { format!("({})", den.join("*")) } else { den.join("") };
        write!(f, "{}/{}", wrap(&self.num), den)
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}
