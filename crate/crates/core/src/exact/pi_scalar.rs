use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::GaussQ;
use crate::error::{Error, Result};
use crate::numeric::{Complex, Real};

/// Finite sum `Σ c_e π^e` with Gaussian-rational `c_e`.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PiScalar {
    terms: BTreeMap<i32, GaussQ>,
}

impl PiScalar {
    pub fn zero() -> Self {
        PiScalar::default()
    }
    pub fn one() -> Self {
        PiScalar::monomial(0, GaussQ::one())
    }
    pub fn i() -> Self {
        PiScalar::monomial(0, GaussQ::i())
    }
    /// `c·π^grade`.
    pub fn monomial(grade: i32, c: GaussQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(grade, c);
        }
        PiScalar { terms }
    }
    pub fn pi_pow(grade: i32) -> Self {
        PiScalar::monomial(grade, GaussQ::one())
    }
    pub fn from_int(n: i64) -> Self {
        PiScalar::monomial(0, GaussQ::from_int(n))
    }
    pub fn from_ratio(q: BigRational) -> Self {
        PiScalar::monomial(0, GaussQ::from_ratio(q))
    }
    pub fn from_gauss(c: GaussQ) -> Self {
        PiScalar::monomial(0, c)
    }
    pub fn ratio(n: i64, d: i64) -> Self {
        PiScalar::from_ratio(BigRational::new(n.into(), d.into()))
    }
    pub fn i_pow(n: i64) -> Self {
        PiScalar::from_gauss(GaussQ::i_pow(n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussQ)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn coeff(&self, grade: i32) -> GaussQ {
        self.terms.get(&grade).cloned().unwrap_or_else(GaussQ::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussQ::is_real)
    }
    pub fn conj(&self) -> Self {
        PiScalar { terms: self.terms.iter().map(|(g, c)| (*g, c.conj())).collect() }
    }
    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return PiScalar::zero();
        }
        PiScalar { terms: self.terms.iter().map(|(g, c)| (*g, c.scale(q))).collect() }
    }
    pub fn scale_gauss(&self, z: &GaussQ) -> Self {
        let mut out = PiScalar::zero();
        for (g, c) in &self.terms {
            out.add_term(*g, &(c * z));
        }
        out
    }
    /// Real and imaginary parts as scalars with real coefficients.
    pub fn re_im(&self) -> (PiScalar, PiScalar) {
        let mut re = PiScalar::zero();
        let mut im = PiScalar::zero();
        for (g, c) in &self.terms {
            re.add_term(*g, &GaussQ::from_ratio(c.re.clone()));
            im.add_term(*g, &GaussQ::from_ratio(c.im.clone()));
        }
        (re, im)
    }

    fn add_term(&mut self, grade: i32, c: &GaussQ) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&grade) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&grade);
        } else {
            self.terms.insert(grade, sum);
        }
    }

    /// Inverse of a single graded term.
    pub fn inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NonMonomial(self.terms.len()));
        }
        let (g, c) = self.terms.iter().next().expect("one term");
        Ok(PiScalar::monomial(-g, c.inv().expect("stored terms are nonzero")))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PiScalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric value with `π` evaluated at `prec` bits.
    pub fn to_numeric<R: Real>(&self, prec: u32) -> Complex<R> {
        let work = prec + 16;
        let pi = R::pi(work);
        let mut acc = Complex::<R>::zero(work);
        for (g, c) in &self.terms {
            let z = Complex::from_ratios(&c.re, &c.im, work);
            acc = acc + z.scale(&pi.powi(*g));
        }
        acc.with_prec(prec)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(g, c)| {
                    json!([
                        g,
                        int_json(c.re.numer()),
                        int_json(c.re.denom()),
                        int_json(c.im.numer()),
                        int_json(c.im.denom())
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("scalar must be an array".into()))?;
        let mut out = PiScalar::zero();
        for t in arr {
            let t = t.as_array().filter(|t| t.len() == 5).ok_or_else(|| {
                Error::Parse("scalar term must be [grade, re_num, re_den, im_num, im_den]".into())
            })?;
            let g = t[0].as_i64().ok_or_else(|| Error::Parse("grade must be an integer".into()))? as i32;
            let q = |n: &Value, d: &Value| -> Result<BigRational> {
                let d = json_int(d)?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(json_int(n)?, d))
            };
            out.add_term(g, &GaussQ::new(q(&t[1], &t[2])?, q(&t[3], &t[4])?));
        }
        Ok(out)
    }
}

/// Integers that fit an `i64` become JSON numbers, larger ones strings.
pub(crate) fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub(crate) fn json_int(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(i.into());
    }
    v.as_str()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("not an integer: {v}")))
}

impl<'a> Add<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn add(self, o: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(*g, c);
        }
        out
    }
}

impl<'a> Sub<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn sub(self, o: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        for (g, c) in &o.terms {
            out.add_term(*g, &-c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn mul(self, o: &PiScalar) -> PiScalar {
        let mut out = PiScalar::zero();
        for (g1, c1) in &self.terms {
            for (g2, c2) in &o.terms {
                out.add_term(g1 + g2, &(c1 * c2));
            }
        }
        out
    }
}

impl Add for PiScalar {
    type Output = PiScalar;
    fn add(self, o: PiScalar) -> PiScalar {
        &self + &o
    }
}

impl Sub for PiScalar {
    type Output = PiScalar;
    fn sub(self, o: PiScalar) -> PiScalar {
        &self - &o
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, o: PiScalar) -> PiScalar {
        &self * &o
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar { terms: self.terms.into_iter().map(|(g, c)| (g, -c)).collect() }
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match g {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·π")?,
                _ => write!(f, "{c}·π^{g}")?,
            }
        }
        Ok(())
    }
}
