use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rug::float::Constant;
use rug::{Assign, Float, Integer};

use super::Real;

/// MPFR-backed binary float with per-value precision.
///
/// Binary operations round to the smaller of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mpf(pub Float);

impl Mpf {
    pub fn inner(&self) -> &Float {
        &self.0
    }
}

fn to_rug_int(n: &BigInt) -> Integer {
    match n.to_i64() {
        Some(v) => Integer::from(v),
        None => Integer::from_str_radix(&n.to_str_radix(32), 32).expect("radix-32 digits"),
    }
}

fn from_rug_int(n: &Integer) -> BigInt {
    match n.to_i64() {
        Some(v) => BigInt::from(v),
        None => BigInt::parse_bytes(n.to_string_radix(32).as_bytes(), 32).expect("radix-32 digits"),
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Mpf {
            type Output = Mpf;
            fn $m(self, rhs: Mpf) -> Mpf {
                let p = self.0.prec().min(rhs.0.prec());
                Mpf(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Mpf {
    type Output = Mpf;
    fn neg(self) -> Mpf {
        Mpf(-self.0)
    }
}

impl fmt::Debug for Mpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Mpf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.0.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        write!(f, "{}", self.0.to_string_radix(10, Some(digits.max(1))))
    }
}

impl Real for Mpf {
    fn prec(&self) -> u32 {
        self.0.prec()
    }
    fn from_f64(x: f64, prec: u32) -> Self {
        Mpf(Float::with_val(prec, x))
    }
    fn from_i64(n: i64, prec: u32) -> Self {
        Mpf(Float::with_val(prec, n))
    }
    fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Mpf(Float::with_val(prec, to_rug_int(n)))
    }
    fn from_ratio(q: &num_rational::BigRational, prec: u32) -> Self {
        let num = Float::with_val(prec + 8, to_rug_int(q.numer()));
        let den = Float::with_val(prec + 8, to_rug_int(q.denom()));
        Mpf(Float::with_val(prec, &num / &den))
    }
    fn pi(prec: u32) -> Self {
        Mpf(Float::with_val(prec, Constant::Pi))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn floor_bigint(&self) -> BigInt {
        let f = Float::with_val(self.0.prec(), self.0.floor_ref());
        from_rug_int(&f.to_integer().expect("finite value"))
    }
    fn sqrt(&self) -> Self {
        Mpf(Float::with_val(self.0.prec(), self.0.sqrt_ref()))
    }
    fn exp(&self) -> Self {
        Mpf(Float::with_val(self.0.prec(), self.0.exp_ref()))
    }
    fn ln(&self) -> Self {
        Mpf(Float::with_val(self.0.prec(), self.0.ln_ref()))
    }
    fn sin_cos(&self) -> (Self, Self) {
        let p = self.0.prec();
        let mut s = Float::new(p);
        let mut c = Float::new(p);
        (&mut s, &mut c).assign(self.0.sin_cos_ref());
        (Mpf(s), Mpf(c))
    }
    fn atan2(&self, x: &Self) -> Self {
        let p = self.0.prec().min(x.0.prec());
        Mpf(Float::with_val(p, self.0.atan2_ref(&x.0)))
    }
    fn abs(&self) -> Self {
        Mpf(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }
    fn mul_pow2(&self, e: i32) -> Self {
        let mut f = self.0.clone();
        f <<= e;
        Mpf(f)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_sign_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }
    fn with_prec(&self, prec: u32) -> Self {
        Mpf(Float::with_val(prec, &self.0))
    }
}
