use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;

use super::Real;

/// Complex number over any [`Real`].
///
/// Hand-rolled rather than `num_complex::Complex` because zero and one
/// need a precision argument for big floats.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }
    pub fn zero(prec: u32) -> Self {
        Complex::new(R::zero(prec), R::zero(prec))
    }
    pub fn one(prec: u32) -> Self {
        Complex::new(R::one(prec), R::zero(prec))
    }
    pub fn i(prec: u32) -> Self {
        Complex::new(R::zero(prec), R::one(prec))
    }
    pub fn from_real(re: R) -> Self {
        let p = re.prec();
        Complex::new(re, R::zero(p))
    }
    pub fn from_i64(re: i64, im: i64, prec: u32) -> Self {
        Complex::new(R::from_i64(re, prec), R::from_i64(im, prec))
    }
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex::new(R::from_f64(re, prec), R::from_f64(im, prec))
    }
    pub fn from_ratios(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        Complex::new(R::from_ratio(re, prec), R::from_ratio(im, prec))
    }
    /// `e^{iθ}`.
    pub fn cis(theta: &R) -> Self {
        let (s, c) = theta.sin_cos();
        Complex::new(c, s)
    }
    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }
    pub fn with_prec(&self, prec: u32) -> Self {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }
    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
    pub fn abs(&self) -> R {
        // scaled to avoid overflow of the squares for machine floats
        let a = self.re.abs();
        let b = self.im.abs();
        let m = R::max_of(a.clone(), b.clone());
        if m.is_zero() {
            return m;
        }
        let x = a / m.clone();
        let y = b / m.clone();
        m * (x.clone() * x + y.clone() * y).sqrt()
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn scale(&self, s: &R) -> Self {
        Complex::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }
    pub fn unscale(&self, s: &R) -> Self {
        Complex::new(self.re.clone() / s.clone(), self.im.clone() / s.clone())
    }
    pub fn mul_i64(&self, n: i64) -> Self {
        Complex::new(self.re.mul_i64(n), self.im.mul_i64(n))
    }
    pub fn div_i64(&self, n: i64) -> Self {
        Complex::new(self.re.div_i64(n), self.im.div_i64(n))
    }
    pub fn scale_ratio(&self, q: &BigRational) -> Self {
        let p = self.prec();
        self.scale(&R::from_ratio(q, p + 16))
    }
    /// Multiply by `i^n`.
    pub fn mul_i_pow(&self, n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => self.clone(),
            1 => Complex::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => Complex::new(self.im.clone(), -self.re.clone()),
        }
    }
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        Complex::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }
    pub fn exp(&self) -> Self {
        Complex::cis(&self.im).scale(&self.re.exp())
    }
    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let r = self.abs();
        if r.is_zero() {
            return Complex::zero(p);
        }
        let half = R::from_f64(0.5, p);
        let a = ((r.clone() + self.re.clone()) * half.clone()).sqrt();
        let b = ((r - self.re.clone()) * half).sqrt();
        if self.im.is_sign_negative() {
            Complex::new(a, -b)
        } else {
            Complex::new(a, b)
        }
    }
    pub fn arg(&self) -> R {
        self.im.atan2(&self.re)
    }
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Complex::new(re, im)
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        let re = self.re.clone() * o.re.clone() + self.im.clone() * o.im.clone();
        let im = self.im * o.re - self.re * o.im;
        Complex::new(re / n.clone(), im / n)
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{} - {}i", self.re, -self.im.clone())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}
