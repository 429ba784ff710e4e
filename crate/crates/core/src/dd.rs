//! Double-double arithmetic (about 106 significand bits).
//!
//! Only what the closed-form constants need: the four operations, negation
//! and square root. Error-free transforms follow Knuth (two-sum) and use a
//! fused multiply-add for the exact product.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = fast_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Rounds to the nearest `f64`.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    pub fn recip(self) -> Self {
        Dd::new(1.0) / self
    }

    /// Square root with one Newton correction; negative input gives NaN.
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        if self.is_negative() {
            return Dd::new(f64::NAN);
        }
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        Dd::renorm(x, r)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl From<u32> for Dd {
    fn from(x: u32) -> Self {
        Dd::new(x as f64)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = fast_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        Dd::renorm(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::new(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::new(q2);
        let q3 = r.hi / rhs.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}

macro_rules! mixed_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Dd {
            type Output = Dd;
            fn $m(self, rhs: f64) -> Dd { $tr::$m(self, Dd::new(rhs)) }
        }
        impl $tr<Dd> for f64 {
            type Output = Dd;
            fn $m(self, rhs: Dd) -> Dd { $tr::$m(Dd::new(self), rhs) }
        }
    )*};
}

mixed_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quotients_stay_exact() {
        assert_eq!((Dd::new(6.0) / Dd::new(3.0)).to_f64(), 2.0);
        assert_eq!((Dd::new(6.0) / 3.0 - 2.0).to_f64(), 0.0);
    }

    #[test]
    fn third_carries_extra_digits() {
        let third = Dd::new(1.0) / 3.0;
        let back = third * 3.0 - 1.0;
        assert!(back.to_f64().abs() < 1e-31, "{:?}", back);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Dd::new(2.0).sqrt();
        assert!((r * r - 2.0).to_f64().abs() < 1e-31);
        assert_eq!(Dd::ZERO.sqrt(), Dd::ZERO);
        assert!(Dd::new(-1.0).sqrt().to_f64().is_nan());
    }

    #[test]
    fn cancellation_is_recovered() {
        // (1 + 2^-70) - 1 is invisible in f64 but not here.
        let tiny = 2f64.powi(-70);
        let x = (Dd::new(1.0) + tiny) - 1.0;
        assert_eq!(x.to_f64(), tiny);
    }
}
