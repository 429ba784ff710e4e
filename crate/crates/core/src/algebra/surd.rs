//! Quadratic surds `u + v·√w` over rational functions.
//!
//! Identities with one square root are checked by computing in
//! `F(√w)`: if both rational parts of a difference vanish identically the
//! identity holds for either branch of the root. The branch itself (which
//! root is meant) is a sign question and is settled by the caller at sample
//! points.

use std::fmt;

use super::rational::{Point, RationalFunction as Rf};
use super::var::Var;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Surd {
    pub u: Rf,
    pub v: Rf,
    w: Rf,
}

impl Surd {
    pub fn new(u: Rf, v: Rf, w: Rf) -> Self {
        Surd { u, v, w }
    }

    pub fn rational(u: Rf, w: &Rf) -> Self {
        Surd { u, v: Rf::zero(), w: w.clone() }
    }

    /// `√w` itself.
    pub fn root(w: &Rf) -> Self {
        Surd { u: Rf::zero(), v: Rf::one(), w: w.clone() }
    }

    pub fn radicand(&self) -> &Rf {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn same_field(&self, other: &Surd) -> Result<()> {
        if self.w == other.w {
            Ok(())
        } else {
            Err(Error::Algebra(format!("surds over different radicands {} and {}", self.w, other.w)))
        }
    }

    pub fn add(&self, o: &Surd) -> Result<Surd> {
        self.same_field(o)?;
        Ok(Surd { u: &self.u + &o.u, v: &self.v + &o.v, w: self.w.clone() })
    }

    pub fn sub(&self, o: &Surd) -> Result<Surd> {
        self.same_field(o)?;
        Ok(Surd { u: &self.u - &o.u, v: &self.v - &o.v, w: self.w.clone() })
    }

    pub fn mul(&self, o: &Surd) -> Result<Surd> {
        self.same_field(o)?;
        let u = &(&self.u * &o.u) + &(&(&self.v * &o.v) * &self.w);
        let v = &(&self.u * &o.v) + &(&self.v * &o.u);
        Ok(Surd { u, v, w: self.w.clone() })
    }

    pub fn scale(&self, c: &Rf) -> Surd {
        Surd { u: &self.u * c, v: &self.v * c, w: self.w.clone() }
    }

    pub fn add_rf(&self, c: &Rf) -> Surd {
        Surd { u: &self.u + c, v: self.v.clone(), w: self.w.clone() }
    }

    /// Multiplicative inverse through the conjugate.
    pub fn recip(&self) -> Result<Surd> {
        let norm = &(&self.u * &self.u) - &(&(&self.v * &self.v) * &self.w);
        if norm.is_zero() {
            return Err(Error::Algebra(format!("surd {self} has zero norm")));
        }
        let inv = norm.recip()?;
        Ok(Surd { u: &self.u * &inv, v: -&(&self.v * &inv), w: self.w.clone() })
    }

    pub fn div(&self, o: &Surd) -> Result<Surd> {
        self.mul(&o.recip()?)
    }

    /// Re-expresses `u + v√w` over `w2`, given `√w = c·√w2`.
    ///
    /// Checks `c²·w2 ≡ w`; the sign of `c` is the caller's responsibility.
    pub fn rebase(&self, c: &Rf, w2: &Rf) -> Result<Surd> {
        if &(c * c) * w2 != self.w {
            return Err(Error::Algebra(format!("cannot rebase √({}) onto {}·√({})", self.w, c, w2)));
        }
        Ok(Surd { u: self.u.clone(), v: &self.v * c, w: w2.clone() })
    }

    pub fn eval(&self, point: &Point) -> Result<Surd> {
        Ok(Surd { u: self.u.eval(point)?, v: self.v.eval(point)?, w: self.w.eval(point)? })
    }

    /// Floating-point value taking the nonnegative root.
    pub fn to_f64(&self, point: &Point) -> Result<f64> {
        let f = |r: &Rf| -> Result<f64> {
            let x = r.value_at(point)?;
            Ok(super::to_f64(&x))
        };
        let w = f(&self.w)?;
        if w < 0.0 {
            return Err(Error::Algebra(format!("negative radicand {w}")));
        }
        Ok(f(&self.u)? + f(&self.v)? * w.sqrt())
    }
}

/// Evaluates `f` at `var = s`.
pub fn eval_at(f: &Rf, var: Var, s: &Surd) -> Result<Surd> {
    let horner = |p: &super::Poly| -> Surd {
        let mut acc = Surd::rational(Rf::zero(), s.radicand());
        for c in p.univariate(var).into_iter().rev() {
            acc = acc.mul(s).expect("same radicand").add_rf(&Rf::from_poly(c));
        }
        acc
    };
    let mut out = horner(f.numerator());
    for (atom, e) in f.denominator_factors() {
        let d = horner(atom);
        for _ in 0..e {
            out = out.div(&d)?;
        }
    }
    Ok(out)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.u, self.v, self.w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse;

    #[test]
    fn roots_of_a_quadratic() {
        // k^2 - 4k + 1 vanishes at 2 - sqrt(3)
        let w = parse("3").unwrap();
        let k = Surd::new(parse("2").unwrap(), parse("-1").unwrap(), w);
        let f = parse("k^2 - 4*k + 1").unwrap();
        assert!(eval_at(&f, Var::K, &k).unwrap().is_zero());
    }

    #[test]
    fn symbolic_root() {
        // x^2 - 2*p*x + p^2 - w at p + sqrt(w)
        let w = parse("q").unwrap();
        let x = Surd::new(parse("n").unwrap(), Rf::one(), w);
        let f = parse("k^2 - 2*n*k + n^2 - q").unwrap();
        assert!(eval_at(&f, Var::K, &x).unwrap().is_zero());
    }

    #[test]
    fn inverse_and_rebase() {
        let w = parse("12").unwrap();
        let s = Surd::new(Rf::one(), Rf::one(), w.clone());
        let one = s.mul(&s.recip().unwrap()).unwrap();
        assert!(one.sub(&Surd::rational(Rf::one(), &w)).unwrap().is_zero());
        // sqrt(12) = 2 sqrt(3)
        let r = s.rebase(&parse("2").unwrap(), &parse("3").unwrap()).unwrap();
        assert_eq!(r.v, parse("2").unwrap());
        assert!(s.rebase(&parse("3").unwrap(), &parse("3").unwrap()).is_err());
    }
}
