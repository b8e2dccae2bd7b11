//! Exact coefficient arithmetic: Gaussian rationals and their π-graded sums.

mod gauss;
pub mod linalg;
mod pi_scalar;

pub use gauss::GaussQ;
pub use pi_scalar::PiScalar;
pub(crate) use pi_scalar::{int_json, json_int};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Binomial coefficient as a big integer; zero outside `0..=n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn rat_from_big(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}
