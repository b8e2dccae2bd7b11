//! Floating-point scalars, complex arithmetic and small numerical kernels.

mod complex;
pub mod linalg;
mod mpf;
mod real;

pub use complex::Complex;
pub use mpf::Mpf;
pub use real::Real;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Trapezoid rule over the circle with total mass `π`.
///
/// `n` equally spaced nodes in `[0, 2π)`; exact for trigonometric
/// polynomials of degree below `n`.
pub fn circle_quadrature<R, F>(n: usize, prec: u32, mut f: F) -> Complex<R>
where
    R: Real,
    F: FnMut(&R) -> Complex<R>,
{
    let two_pi = R::pi(prec).mul_i64(2);
    let mut acc = Complex::zero(prec);
    for j in 0..n {
        let theta = two_pi.clone().mul_i64(j as i64).div_i64(n as i64);
        acc = acc + f(&theta);
    }
    acc.scale(&R::pi(prec).div_i64(n as i64))
}

/// Best rational approximation with denominator at most `max_den`,
/// accepted only when it lies within `tol` of `x`.
pub fn recognize_rational<R: Real>(x: &R, max_den: u64, tol: &R) -> Option<BigRational> {
    let prec = x.prec();
    let max_den = BigInt::from(max_den);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor_bigint();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2.abs() > max_den {
            break;
        }
        let cand = BigRational::new(p2.clone(), q2.clone());
        let err = (x.clone() - R::from_ratio(&cand, prec)).abs();
        if err <= *tol {
            best = Some(cand);
            break;
        }
        let frac = rest.clone() - R::from_bigint(&a, prec);
        if frac.is_zero() {
            break;
        }
        rest = R::one(prec) / frac;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    best
}
