//! Homogeneous polynomials of degree `k-2` with a determinant twist.
//!
//! `GL2` acts by `(g·P)(x, y) = |det g|^e P(ax+cy, bx+dy)` with
//! `e = (2-k+μ)/2`. The dual of `V` is identified with `V` itself through
//! [`dual_to_poly`], and the complex basis is `P_n = z^n z̄^{k-2-n}`.

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exact::{binomial, rat_from_big, rat_int, GaussQ, PiScalar};
use crate::numeric::{Complex, Real};

/// Invertible 2×2 rational matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
    det: BigRational,
}

impl GroupElement {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(GroupElement { a, b, c, d, det })
    }
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        GroupElement::new(rat_int(a), rat_int(b), rat_int(c), rat_int(d))
    }
    pub fn identity() -> Self {
        GroupElement::from_ints(1, 0, 0, 1).expect("invertible")
    }
    /// `diag(1, -1)`.
    pub fn omega() -> Self {
        GroupElement::from_ints(1, 0, 0, -1).expect("invertible")
    }
    /// Rotation `[[cos, sin], [-sin, cos]]` for a rational point on the
    /// unit circle.
    pub fn kappa(cos: BigRational, sin: BigRational) -> Result<Self> {
        GroupElement::new(cos.clone(), sin.clone(), -sin, cos)
    }
    pub fn scalar(t: BigRational) -> Result<Self> {
        GroupElement::new(t.clone(), BigRational::zero(), BigRational::zero(), t)
    }
    pub fn det(&self) -> &BigRational {
        &self.det
    }
    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
        .expect("product of invertible matrices")
    }
    pub fn inverse(&self) -> GroupElement {
        let d = &self.det;
        GroupElement::new(&self.d / d, -&self.b / d, -&self.c / d, &self.a / d).expect("invertible")
    }
    /// Adjugate `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> GroupElement {
        GroupElement::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone()).expect("invertible")
    }
    pub fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

/// `M[a][j]` = coefficient of `x^j y^{m-j}` in `(αx+γy)^a (βx+δy)^{m-a}`.
pub fn subst_matrix<S>(alpha: &S, beta: &S, gamma: &S, delta: &S, m: usize, zero: &S, one: &S) -> Vec<Vec<S>>
where
    S: Clone + Add<Output = S> + Mul<Output = S>,
{
    // powers of the two linear forms, stored as coefficient vectors in x
    let linear_pow = |p: &S, q: &S| -> Vec<Vec<S>> {
        let mut out = vec![vec![one.clone()]];
        for e in 1..=m {
            let prev = &out[e - 1];
            let mut next = vec![zero.clone(); e + 1];
            for (j, c) in prev.iter().enumerate() {
                next[j + 1] = next[j + 1].clone() + c.clone() * p.clone();
                next[j] = next[j].clone() + c.clone() * q.clone();
            }
            out.push(next);
        }
        out
    };
    let first = linear_pow(alpha, gamma);
    let second = linear_pow(beta, delta);
    (0..=m)
        .map(|a| {
            let mut row = vec![zero.clone(); m + 1];
            for (i, u) in first[a].iter().enumerate() {
                for (j, v) in second[m - a].iter().enumerate() {
                    row[i + j] = row[i + j].clone() + u.clone() * v.clone();
                }
            }
            row
        })
        .collect()
}

fn rational_root(q: &BigRational, n: u32) -> Option<BigRational> {
    let root = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(n);
        (r.pow(n) == *x).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// `|det|^e`, exact. Integer exponents always work; fractional ones need
/// `det > 0` and a rational root.
pub fn twist_factor(det: &BigRational, e: &BigRational) -> Result<BigRational> {
    if det.is_negative() && !e.is_integer() {
        return Err(Error::NegativeDetFractionalPower(e.to_string()));
    }
    let base = det.abs();
    let num: i32 = e.numer().try_into().map_err(|_| Error::Parse("twist exponent too large".into()))?;
    let den: u32 = e.denom().try_into().map_err(|_| Error::Parse("twist exponent too large".into()))?;
    let root = rational_root(&base, den)
        .ok_or_else(|| Error::IrrationalRoot { det: det.to_string(), exponent: e.to_string() })?;
    Ok(if num >= 0 { root.pow(num) } else { root.recip().pow(-num) })
}

/// Homogeneous polynomial `Σ_a coeffs[a] x^a y^{k-2-a}` in `V_μ(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly<C> {
    k: i64,
    mu: BigRational,
    coeffs: Vec<C>,
}

impl<C: Coeff> HomPoly<C> {
    pub fn new(k: i64, mu: BigRational, coeffs: Vec<C>) -> Self {
        assert!(k >= 2, "weight must be at least 2");
        assert_eq!(coeffs.len() as i64, k - 1, "need k-1 coefficients");
        HomPoly { k, mu, coeffs }
    }
    pub fn zero(k: i64, mu: BigRational, zero: &C) -> Self {
        HomPoly::new(k, mu, vec![zero.zero_like(); (k - 1) as usize])
    }
    pub fn k(&self) -> i64 {
        self.k
    }
    /// Degree `k - 2`.
    pub fn degree(&self) -> usize {
        (self.k - 2) as usize
    }
    pub fn mu(&self) -> &BigRational {
        &self.mu
    }
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }
    pub fn coeff(&self, a: usize) -> &C {
        &self.coeffs[a]
    }
    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }
    pub fn with_mu(mut self, mu: BigRational) -> Self {
        self.mu = mu;
        self
    }
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        HomPoly::new(self.k, self.mu.clone(), self.coeffs.iter().map(f).collect())
    }
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        HomPoly::new(self.k, self.mu.clone(), self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        HomPoly::new(self.k, self.mu.clone(), self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect())
    }
    pub fn neg(&self) -> Self {
        self.map(Coeff::neg)
    }
    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.mul(s))
    }
    pub fn scale_ratio(&self, q: &BigRational) -> Self {
        self.map(|c| c.scale_ratio(q))
    }
    pub fn conj(&self) -> Self {
        self.map(Coeff::conj)
    }

    /// Plain substitution `P(ax+cy, bx+dy)` without the determinant twist.
    pub fn substitute(&self, g: &GroupElement) -> Self {
        let m = self.degree();
        let sm = subst_matrix(&g.a, &g.b, &g.c, &g.d, m, &BigRational::zero(), &BigRational::one());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; m + 1];
        for (a, pa) in self.coeffs.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (j, s) in sm[a].iter().enumerate() {
                if !s.is_zero() {
                    out[j] = out[j].add(&pa.scale_ratio(s));
                }
            }
        }
        HomPoly::new(self.k, self.mu.clone(), out)
    }

    /// Twist exponent `(2-k+μ)/2`.
    pub fn twist_exponent(&self) -> BigRational {
        (rat_int(2 - self.k) + &self.mu) / rat_int(2)
    }

    /// Coordinates in the complex basis `P_n = z^n z̄^{m-n}`.
    pub fn to_complex(&self) -> Vec<C> {
        apply_gauss_matrix(&self.coeffs, &to_complex_matrix(self.degree()))
    }

    pub fn from_complex(k: i64, mu: BigRational, beta: &[C]) -> Self {
        let m = (k - 2) as usize;
        HomPoly::new(k, mu, apply_gauss_matrix(beta, &from_complex_matrix(m)))
    }

    /// Values `F_a = F(X^a Y^{m-a})` of the functional represented by `self`.
    pub fn to_dual(&self) -> Vec<C> {
        let m = self.degree() as i64;
        (0..=m)
            .map(|a| {
                let j = (m - a) as usize;
                let s = BigRational::new(if a % 2 == 0 { 1.into() } else { (-1).into() }, binomial(m, j as i64));
                self.coeffs[j].scale_ratio(&s)
            })
            .collect()
    }
}

/// `n ↦ Σ_a v[a] M[a][n]` over Gaussian rationals.
fn apply_gauss_matrix<C: Coeff>(v: &[C], mat: &[Vec<GaussQ>]) -> Vec<C> {
    let zero = v[0].zero_like();
    let mut out = vec![zero; v.len()];
    for (a, va) in v.iter().enumerate() {
        if va.is_zero() {
            continue;
        }
        for (n, g) in mat[a].iter().enumerate() {
            if !g.is_zero() {
                out[n] = out[n].add(&va.scale_gauss(g));
            }
        }
    }
    out
}

/// Row `a`: expansion of `x^a y^{m-a}` in the `P_n`.
fn to_complex_matrix(m: usize) -> Vec<Vec<GaussQ>> {
    let half = GaussQ::from_ratio(BigRational::new(1.into(), 2.into()));
    let half_i = GaussQ::new(BigRational::zero(), BigRational::new((-1).into(), 2.into()));
    // x = (z + z̄)/2, y = (z - z̄)/(2i)
    subst_matrix(&half, &half_i, &half, &-half_i.clone(), m, &GaussQ::zero(), &GaussQ::one())
}

/// Row `n`: monomial expansion of `P_n`.
fn from_complex_matrix(m: usize) -> Vec<Vec<GaussQ>> {
    subst_matrix(&GaussQ::one(), &GaussQ::one(), &GaussQ::i(), &-GaussQ::i(), m, &GaussQ::zero(), &GaussQ::one())
}

impl HomPoly<PiScalar> {
    pub fn from_ints(k: i64, coeffs: &[i64]) -> Self {
        HomPoly::new(k, BigRational::zero(), coeffs.iter().map(|&c| PiScalar::from_int(c)).collect())
    }
    /// `x^a y^{k-2-a}`.
    pub fn monomial(k: i64, a: usize) -> Self {
        let mut p = HomPoly::zero(k, BigRational::zero(), &PiScalar::zero());
        p.coeffs[a] = PiScalar::one();
        p
    }
    /// Complex basis vector `P_n = z^n z̄^{k-2-n}`.
    pub fn p_n(k: i64, n: usize) -> Self {
        let mut beta = vec![PiScalar::zero(); (k - 1) as usize];
        beta[n] = PiScalar::one();
        HomPoly::from_complex(k, BigRational::zero(), &beta)
    }
    /// `Q_{s,t}(x, y) = (ys - xt)^{k-2}`.
    pub fn q_st(k: i64, s: &BigRational, t: &BigRational) -> Self {
        let m = k - 2;
        let coeffs = (0..=m)
            .map(|a| {
                let neg_t = -t;
                let c = rat_from_big(binomial(m, a)) * neg_t.pow(a as i32) * s.pow((m - a) as i32);
                PiScalar::from_ratio(c)
            })
            .collect();
        HomPoly::new(k, BigRational::zero(), coeffs)
    }
    /// Exact value at a rational point.
    pub fn eval(&self, s: &BigRational, t: &BigRational) -> PiScalar {
        let m = self.degree() as i32;
        self.coeffs
            .iter()
            .enumerate()
            .fold(PiScalar::zero(), |acc, (a, c)| &acc + &c.scale(&(s.pow(a as i32) * t.pow(m - a as i32))))
    }
    pub fn to_numeric<R: Real>(&self, prec: u32) -> HomPoly<Complex<R>> {
        HomPoly::new(self.k, self.mu.clone(), self.coeffs.iter().map(|c| c.to_numeric(prec)).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "mu": self.mu.to_string(),
            "basis": "monomial",
            "coeffs": self.coeffs.iter().map(PiScalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let k = v["k"].as_i64().ok_or_else(|| Error::Parse("missing k".into()))?;
        let mu = parse_ratio(v.get("mu"))?;
        if v.get("basis").and_then(Value::as_str).unwrap_or("monomial") != "monomial" {
            return Err(Error::Parse("only the monomial basis is supported".into()));
        }
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?
            .iter()
            .map(PiScalar::from_json)
            .collect::<Result<Vec<_>>>()?;
        if k < 2 || coeffs.len() as i64 != k - 1 {
            return Err(Error::Parse(format!("weight {k} needs {} coefficients", k - 1)));
        }
        Ok(HomPoly::new(k, mu, coeffs))
    }
}

pub(crate) fn parse_ratio(v: Option<&Value>) -> Result<BigRational> {
    match v {
        None | Some(Value::Null) => Ok(BigRational::zero()),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(rat_int)
            .ok_or_else(|| Error::Parse(format!("mu must be p/q, got {n}"))),
        Some(Value::String(s)) => s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}"))),
        Some(other) => Err(Error::Parse(format!("bad rational {other}"))),
    }
}

impl<R: Real> HomPoly<Complex<R>> {
    /// `P(s, t)` at complex arguments.
    pub fn eval_complex(&self, s: &Complex<R>, t: &Complex<R>) -> Complex<R> {
        let m = self.degree();
        // Horner in s/t is unsafe when t = 0, so accumulate powers directly
        let prec = s.prec().min(t.prec());
        let mut spow = vec![Complex::one(prec)];
        let mut tpow = vec![Complex::one(prec)];
        for _ in 0..m {
            spow.push(spow.last().unwrap().clone() * s.clone());
            tpow.push(tpow.last().unwrap().clone() * t.clone());
        }
        let mut acc = Complex::zero(prec);
        for (a, c) in self.coeffs.iter().enumerate() {
            acc = acc + c.clone() * spow[a].clone() * tpow[m - a].clone();
        }
        acc
    }
    pub fn max_abs(&self) -> R {
        let p = self.coeffs[0].prec();
        self.coeffs.iter().fold(R::zero(p), |m, c| R::max_of(m, c.abs()))
    }
    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(Complex::prec).min().unwrap_or(53)
    }
}

/// Group action with determinant twist `|det g|^{(2-k+μ)/2}`.
pub fn act<C: Coeff>(g: &GroupElement, p: &HomPoly<C>) -> Result<HomPoly<C>> {
    let f = twist_factor(g.det(), &p.twist_exponent())?;
    Ok(p.substitute(g).scale_ratio(&f))
}

/// Action of a real matrix `[a, b, c, d]` on a numeric polynomial.
pub fn act_real<R: Real>(g: &[R; 4], p: &HomPoly<Complex<R>>) -> Result<HomPoly<Complex<R>>> {
    let prec = p.prec();
    let det = g[0].clone() * g[3].clone() - g[1].clone() * g[2].clone();
    let e = p.twist_exponent();
    if det.is_sign_negative() && !e.is_integer() {
        return Err(Error::NegativeDetFractionalPower(e.to_string()));
    }
    let ef = R::from_ratio(&e, prec);
    let factor = (ef * det.abs().ln()).exp();
    let m = p.degree();
    let sm = subst_matrix(&g[0], &g[1], &g[2], &g[3], m, &R::zero(prec), &R::one(prec));
    let mut out = vec![Complex::zero(prec); m + 1];
    for (a, pa) in p.coeffs.iter().enumerate() {
        for (j, s) in sm[a].iter().enumerate() {
            out[j] = out[j].clone() + pa.scale(s);
        }
    }
    Ok(HomPoly::new(p.k, p.mu.clone(), out.into_iter().map(|c| c.scale(&factor)).collect()))
}

/// The pairing `V × V → C` characterised by `⟨P, Q_{s,t}⟩ = P(s, t)`.
///
/// Only the weights are compared; twists are not tracked by the pairing.
pub fn pair_v<C: Coeff>(p: &HomPoly<C>, q: &HomPoly<C>) -> Result<C> {
    if p.k != q.k {
        return Err(Error::WeightMismatch(p.k, q.k));
    }
    let m = p.degree();
    let mut acc = p.coeffs[0].zero_like();
    for a in 0..=m {
        let w = BigRational::new(if (m - a).is_multiple_of(2) { 1.into() } else { (-1).into() }, binomial(m as i64, a as i64));
        acc = acc.add(&p.coeffs[a].mul(&q.coeffs[m - a]).scale_ratio(&w));
    }
    Ok(acc)
}

/// `P_F(x, y) = F((Yx - Xy)^{k-2})`, with `F` given by its values
/// `values[a] = F(X^a Y^{k-2-a})`.
pub fn dual_to_poly<C: Coeff>(k: i64, mu: BigRational, values: &[C]) -> HomPoly<C> {
    let m = (k - 2) as usize;
    assert_eq!(values.len(), m + 1);
    let coeffs = (0..=m)
        .map(|j| {
            let b = m - j;
            let s = rat_from_big(binomial(m as i64, j as i64)) * rat_int(if b.is_multiple_of(2) { 1 } else { -1 });
            values[b].scale_ratio(&s)
        })
        .collect();
    HomPoly::new(k, mu, coeffs)
}

/// Outcome of comparing `⟨gP, Q⟩` with `sign(det g)^k ⟨P, g^{-1}Q⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistVerdict {
    pub lhs: PiScalar,
    pub rhs: PiScalar,
    pub sign: i64,
    pub holds: bool,
}

pub fn twist_sign_check(g: &GroupElement, p: &HomPoly<PiScalar>, q: &HomPoly<PiScalar>) -> Result<TwistVerdict> {
    let lhs = pair_v(&act(g, p)?, q)?;
    let inner = pair_v(p, &act(&g.inverse(), q)?)?;
    let sign = if g.det().is_negative() && p.k() % 2 == 1 { -1 } else { 1 };
    let rhs = inner.scale(&rat_int(sign));
    Ok(TwistVerdict { holds: lhs == rhs, lhs, rhs, sign })
}
