//! Coefficient rings shared by exact and numeric polynomials.

use std::fmt::Debug;

use num_rational::BigRational;

use crate::exact::{GaussQ, PiScalar};
use crate::numeric::{Complex, Real};

/// Minimal ring interface for polynomial and K-type coefficients.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale_ratio(&self, q: &BigRational) -> Self;
    fn scale_gauss(&self, z: &GaussQ) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for PiScalar {
    fn zero_like(&self) -> Self {
        PiScalar::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale_ratio(&self, q: &BigRational) -> Self {
        self.scale(q)
    }
    fn scale_gauss(&self, z: &GaussQ) -> Self {
        PiScalar::scale_gauss(self, z)
    }
    fn conj(&self) -> Self {
        PiScalar::conj(self)
    }
    fn is_zero(&self) -> bool {
        PiScalar::is_zero(self)
    }
}

impl<R: Real> Coeff for Complex<R> {
    fn zero_like(&self) -> Self {
        Complex::zero(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale_ratio(&self, q: &BigRational) -> Self {
        Complex::scale_ratio(self, q)
    }
    fn scale_gauss(&self, z: &GaussQ) -> Self {
        let p = self.prec();
        self.clone() * Complex::from_ratios(&z.re, &z.im, p + 16)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        Complex::is_zero(self)
    }
}
