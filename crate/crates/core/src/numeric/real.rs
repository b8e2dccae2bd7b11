use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, ToPrimitive};

/// Real scalar used by the analytic layer.
///
/// Every value knows its own precision in bits. Constructors take the
/// desired precision; machine floats ignore it.
pub trait Real:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn prec(&self) -> u32;
    fn from_f64(x: f64, prec: u32) -> Self;
    fn from_i64(n: i64, prec: u32) -> Self;
    fn from_bigint(n: &BigInt, prec: u32) -> Self;
    fn pi(prec: u32) -> Self;
    fn to_f64(&self) -> f64;
    /// Largest integer not exceeding `self`.
    fn floor_bigint(&self) -> BigInt;

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    /// `self * 2^e`, exact.
    fn mul_pow2(&self, e: i32) -> Self;

    fn zero(prec: u32) -> Self {
        Self::from_i64(0, prec)
    }
    fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }
    fn from_ratio(q: &BigRational, prec: u32) -> Self {
        Self::from_bigint(q.numer(), prec) / Self::from_bigint(q.denom(), prec)
    }
    /// Unit in the last place of 1 at this precision.
    fn epsilon(prec: u32) -> Self {
        Self::one(prec).mul_pow2(1 - prec as i32)
    }
    fn is_zero(&self) -> bool {
        *self == Self::zero(self.prec())
    }
    fn is_sign_negative(&self) -> bool {
        *self < Self::zero(self.prec())
    }
    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one(self.prec()) / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
    fn mul_i64(&self, n: i64) -> Self {
        self.clone() * Self::from_i64(n, self.prec())
    }
    fn div_i64(&self, n: i64) -> Self {
        self.clone() / Self::from_i64(n, self.prec())
    }
    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
    /// The same value re-rounded to `prec` bits.
    fn with_prec(&self, prec: u32) -> Self;
}

macro_rules! machine_real {
    ($t:ty, $bits:expr) => {
        impl Real for $t {
            fn prec(&self) -> u32 {
                $bits
            }
            fn from_f64(x: f64, _prec: u32) -> Self {
                x as $t
            }
            fn from_i64(n: i64, _prec: u32) -> Self {
                n as $t
            }
            fn from_bigint(n: &BigInt, _prec: u32) -> Self {
                n.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn from_ratio(q: &BigRational, _prec: u32) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn pi(_prec: u32) -> Self {
                <$t as FloatConst>::PI()
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn floor_bigint(&self) -> BigInt {
                num_bigint::BigInt::from(Float::floor(*self) as i128)
            }
            fn sqrt(&self) -> Self {
                Float::sqrt(*self)
            }
            fn exp(&self) -> Self {
                Float::exp(*self)
            }
            fn ln(&self) -> Self {
                Float::ln(*self)
            }
            fn sin_cos(&self) -> (Self, Self) {
                Float::sin_cos(*self)
            }
            fn atan2(&self, x: &Self) -> Self {
                Float::atan2(*self, *x)
            }
            fn abs(&self) -> Self {
                Float::abs(*self)
            }
            fn mul_pow2(&self, e: i32) -> Self {
                *self * Float::powi(2.0 as $t, e)
            }
            fn with_prec(&self, _prec: u32) -> Self {
                *self
            }
        }
    };
}

machine_real!(f32, 24);
machine_real!(f64, 53);
