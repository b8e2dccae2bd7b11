//! The modules `I_μ(k)` in the K-type basis `f_t`, the discrete-series
//! submodule, the maps `ι`, `φ`, the section `s`, and the real forms
//! `h_t = f_t + f_{-t}`, `g_t = i(f_t - f_{-t})`.
//!
//! The circle carries total mass `π`, so `⟨f_s, f'_t⟩ = π δ(s + t)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{binomial, rat, rat_from_big, rat_int, GaussQ, PiScalar};
use crate::numeric::{Complex, Real};
use crate::poly_rep::{parse_ratio, subst_matrix, HomPoly};

/// O(2)-structure: how `ω = diag(1,-1)` acts, `ω f_t = ±f_{-t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignStructure {
    Plus,
    Minus,
    Unspecified,
}

impl SignStructure {
    pub fn as_str(self) -> &'static str {
        match self {
            SignStructure::Plus => "+",
            SignStructure::Minus => "-",
            SignStructure::Unspecified => "none",
        }
    }
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(SignStructure::Plus),
            "-" | "minus" => Ok(SignStructure::Minus),
            "none" | "unspecified" => Ok(SignStructure::Unspecified),
            _ => Err(Error::Parse(format!("unknown sign structure {s:?}"))),
        }
    }
}

/// Finitely supported vector `Σ c_t f_t` of `I_μ(k)`.
///
/// The weight may be `2 - k` for images of `ι`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTypeVector {
    k: i64,
    mu: BigRational,
    sign: SignStructure,
    terms: BTreeMap<i64, PiScalar>,
}

impl KTypeVector {
    pub fn zero(k: i64, mu: BigRational, sign: SignStructure) -> Self {
        KTypeVector { k, mu, sign, terms: BTreeMap::new() }
    }
    /// The basis vector `f_t`.
    pub fn basis(k: i64, t: i64) -> Self {
        let mut v = KTypeVector::zero(k, BigRational::zero(), SignStructure::Unspecified);
        v.add_term(t, &PiScalar::one());
        v
    }
    pub fn with_sign(mut self, sign: SignStructure) -> Self {
        self.sign = sign;
        self
    }
    pub fn with_mu(mut self, mu: BigRational) -> Self {
        self.mu = mu;
        self
    }
    pub fn k(&self) -> i64 {
        self.k
    }
    pub fn mu(&self) -> &BigRational {
        &self.mu
    }
    pub fn sign(&self) -> SignStructure {
        self.sign
    }
    pub fn terms(&self) -> impl Iterator<Item = (i64, &PiScalar)> {
        self.terms.iter().map(|(t, c)| (*t, c))
    }
    pub fn coeff(&self, t: i64) -> PiScalar {
        self.terms.get(&t).cloned().unwrap_or_default()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c f_t`; panics when `t` has the wrong parity.
    pub fn add_term(&mut self, t: i64, c: &PiScalar) {
        assert!((t - self.k).rem_euclid(2) == 0, "K-type {t} has the wrong parity for weight {}", self.k);
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&t) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, sum);
        }
    }

    fn same_shape(&self) -> Self {
        KTypeVector::zero(self.k, self.mu.clone(), self.sign)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(*t, c);
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&PiScalar::from_int(-1)))
    }
    pub fn scale(&self, s: &PiScalar) -> Self {
        let mut out = self.same_shape();
        for (t, c) in &self.terms {
            out.add_term(*t, &(c * s));
        }
        out
    }

    /// Every K-type satisfies `|t| ≥ k`.
    pub fn is_discrete(&self) -> bool {
        self.terms.keys().all(|t| t.abs() >= self.k)
    }

    fn map_diag(&self, shift: i64, f: impl Fn(i64) -> PiScalar) -> Self {
        let mut out = self.same_shape();
        for (t, c) in &self.terms {
            out.add_term(t + shift, &(c * &f(*t)));
        }
        out
    }

    /// `R f_t = ((k+t)/2) f_{t+2}`.
    pub fn raise(&self) -> Self {
        let k = self.k;
        self.map_diag(2, |t| PiScalar::from_ratio(rat(k + t, 2)))
    }

    /// `L f_t = ((k-t)/2) f_{t-2}`.
    pub fn lower(&self) -> Self {
        let k = self.k;
        self.map_diag(-2, |t| PiScalar::from_ratio(rat(k - t, 2)))
    }

    /// `∂/∂θ`, i.e. `f_t ↦ i t f_t`.
    pub fn d_theta(&self) -> Self {
        self.map_diag(0, |t| PiScalar::from_gauss(GaussQ::ints(0, t)))
    }

    /// Rotation `κ(θ)` acts diagonally: `f_t ↦ e^{itθ} f_t`. Returns
    /// `(t, exponent)` pairs, the exponent being the multiple of `iθ`.
    pub fn rotate_multipliers(&self) -> Vec<(i64, i64)> {
        self.terms.keys().map(|&t| (t, t)).collect()
    }

    /// Exact rotation by a rational point `w = e^{iθ}` of the unit circle.
    pub fn rotate_exact(&self, w: &GaussQ) -> Self {
        let winv = w.conj();
        self.map_diag(0, |t| {
            PiScalar::from_gauss(if t >= 0 { w.pow(t as u32) } else { winv.pow((-t) as u32) })
        })
    }

    /// Numeric rotation: coefficients of `κ(θ)v` at `prec` bits.
    pub fn rotate<R: Real>(&self, theta: &R, prec: u32) -> BTreeMap<i64, Complex<R>> {
        self.terms
            .iter()
            .map(|(t, c)| {
                let phase = Complex::cis(&theta.mul_i64(*t));
                (*t, c.to_numeric::<R>(prec) * phase)
            })
            .collect()
    }

    /// `ω f_t = ±f_{-t}` according to the sign structure.
    pub fn act_omega(&self) -> Result<Self> {
        let s = match self.sign {
            SignStructure::Plus => 1,
            SignStructure::Minus => -1,
            SignStructure::Unspecified => return Err(Error::UnspecifiedSignStructure),
        };
        let mut out = self.same_shape();
        for (t, c) in &self.terms {
            out.add_term(-t, &c.scale(&rat_int(s)));
        }
        Ok(out)
    }

    /// `I(f_t) = sign(t) f_t` on the discrete series.
    pub fn involution_i(&self) -> Result<Self> {
        if let Some(t) = self.terms.keys().find(|t| t.abs() < self.k) {
            return Err(Error::NotInDiscreteSeries(*t, self.k));
        }
        Ok(self.map_diag(0, |t| PiScalar::from_int(t.signum())))
    }

    pub fn to_json(&self) -> Value {
        let terms: Map<String, Value> = self.terms.iter().map(|(t, c)| (t.to_string(), c.to_json())).collect();
        json!({"k": self.k, "mu": self.mu.to_string(), "sign": self.sign.as_str(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let k = v["k"].as_i64().ok_or_else(|| Error::Parse("missing k".into()))?;
        let mu = parse_ratio(v.get("mu"))?;
        let sign = SignStructure::parse(v.get("sign").and_then(Value::as_str).unwrap_or("none"))?;
        let mut out = KTypeVector::zero(k, mu, sign);
        if let Some(terms) = v.get("terms").and_then(Value::as_object) {
            for (key, c) in terms {
                let t: i64 = key.parse().map_err(|_| Error::Parse(format!("bad K-type {key:?}")))?;
                if (t - k).rem_euclid(2) != 0 {
                    return Err(Error::Parse(format!("K-type {t} has the wrong parity for weight {k}")));
                }
                out.add_term(t, &PiScalar::from_json(c)?);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for KTypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("({c})·f_{t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `ι(P)`: the K-type expansion of `θ ↦ P(-sin θ, cos θ)`, an element of
/// the weight `2 - k` module.
pub fn iota(p: &HomPoly<PiScalar>) -> KTypeVector {
    let m = p.degree();
    let ihalf = GaussQ::new(BigRational::zero(), rat(1, 2));
    let half = GaussQ::from_ratio(rat(1, 2));
    // -sin θ = (i/2)(w - w̄), cos θ = (w + w̄)/2 with w = e^{iθ}
    let sm = subst_matrix(&ihalf, &half, &-ihalf.clone(), &half, m, &GaussQ::zero(), &GaussQ::one());
    let mut out = KTypeVector::zero(2 - p.k(), p.mu().clone(), SignStructure::Unspecified);
    for (a, pa) in p.coeffs().iter().enumerate() {
        for (j, e) in sm[a].iter().enumerate() {
            out.add_term(2 * j as i64 - m as i64, &pa.scale_gauss(e));
        }
    }
    out
}

/// `∫_{S¹} f g dθ` with total mass `π`, pairing weight `k` with `2 - k`.
pub fn pair_i(f: &KTypeVector, g: &KTypeVector) -> Result<PiScalar> {
    if f.k + g.k != 2 {
        return Err(Error::WeightMismatch(f.k, g.k));
    }
    if *f.mu() != -g.mu().clone() {
        return Err(Error::TwistMismatch(f.mu().to_string(), g.mu().to_string()));
    }
    let mut acc = PiScalar::zero();
    for (t, c) in &f.terms {
        if let Some(d) = g.terms.get(&-t) {
            acc = &acc + &(c * d);
        }
    }
    Ok(&acc * &PiScalar::pi_pow(1))
}

/// `φ(f)(x, y) = ∫_{S¹} f(θ)(y sin θ + x cos θ)^{k-2} dθ`, evaluated by
/// expanding the kernel in `e^{itθ}` and keeping the `e^{-itθ}` parts.
pub fn phi(v: &KTypeVector) -> HomPoly<PiScalar> {
    let k = v.k();
    let m = (k - 2) as usize;
    let half = GaussQ::from_ratio(rat(1, 2));
    let mhalf_i = GaussQ::new(BigRational::zero(), rat(-1, 2));
    // cos θ = (w + w̄)/2, sin θ = (w - w̄)/(2i)
    let sm = subst_matrix(&half, &mhalf_i, &half, &-mhalf_i.clone(), m, &GaussQ::zero(), &GaussQ::one());
    let mut coeffs = vec![PiScalar::zero(); m + 1];
    for (t, c) in v.terms() {
        // need 2j - m = -t
        let twice_j = m as i64 - t;
        if twice_j < 0 || twice_j > 2 * m as i64 {
            continue;
        }
        let j = (twice_j / 2) as usize;
        for (a, coeff) in coeffs.iter_mut().enumerate() {
            let e = &sm[a][j];
            if e.is_zero() {
                continue;
            }
            let w = rat_from_big(binomial(m as i64, a as i64));
            *coeff = &*coeff + &c.scale_gauss(e).scale(&w);
        }
    }
    let pi = PiScalar::pi_pow(1);
    HomPoly::new(k, v.mu().clone(), coeffs.into_iter().map(|c| &c * &pi).collect())
}

/// The section `s(P_n) = (2^{k-2}/π) C(k-2, n)^{-1} f_{2n-k+2}`.
pub fn section(p: &HomPoly<PiScalar>) -> KTypeVector {
    let m = p.degree() as i64;
    let mut out = KTypeVector::zero(p.k(), p.mu().clone(), SignStructure::Unspecified);
    let inv_pi = PiScalar::pi_pow(-1);
    for (n, beta) in p.to_complex().iter().enumerate() {
        let n = n as i64;
        let w = BigRational::new(num_bigint::BigInt::from(2).pow(m as u32), binomial(m, n));
        out.add_term(2 * n - m, &(&beta.scale(&w) * &inv_pi));
    }
    out
}

/// Real form `Σ A_t h_t + B_t g_t` over `t ≥ 0`.
///
/// `h_0 = 2 f_0` and `g_0 = 0`, so only `A_0` is stored at `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealKTypeVector {
    pub k: i64,
    pub mu: BigRational,
    pub sign: SignStructure,
    pub h: BTreeMap<i64, PiScalar>,
    pub g: BTreeMap<i64, PiScalar>,
}

impl RealKTypeVector {
    pub fn from_ktype(v: &KTypeVector) -> Self {
        let mut h = BTreeMap::new();
        let mut g = BTreeMap::new();
        let half = rat(1, 2);
        let mut keys: Vec<i64> = v.terms.keys().map(|t| t.abs()).collect();
        keys.sort_unstable();
        keys.dedup();
        for t in keys {
            let (cp, cm) = (v.coeff(t), v.coeff(-t));
            if t == 0 {
                insert_nonzero(&mut h, 0, cp.scale(&half));
                continue;
            }
            insert_nonzero(&mut h, t, (&cp + &cm).scale(&half));
            // (c_t - c_{-t}) / (2i)
            insert_nonzero(&mut g, t, (&cp - &cm).scale_gauss(&GaussQ::new(BigRational::zero(), rat(-1, 2))));
        }
        RealKTypeVector { k: v.k, mu: v.mu.clone(), sign: v.sign, h, g }
    }

    pub fn to_ktype(&self) -> KTypeVector {
        let mut out = KTypeVector::zero(self.k, self.mu.clone(), self.sign);
        for (t, a) in &self.h {
            out = out.add(&h_vec(self.k, *t).scale(a));
        }
        for (t, b) in &self.g {
            out = out.add(&g_vec(self.k, *t).scale(b));
        }
        out.with_sign(self.sign).with_mu(self.mu.clone())
    }

    /// All `h`/`g` coefficients are real.
    pub fn is_real(&self) -> bool {
        self.h.values().chain(self.g.values()).all(PiScalar::is_real)
    }
}

fn insert_nonzero(map: &mut BTreeMap<i64, PiScalar>, t: i64, c: PiScalar) {
    if !c.is_zero() {
        map.insert(t, c);
    }
}

/// `h_t = f_t + f_{-t}`.
pub fn h_vec(k: i64, t: i64) -> KTypeVector {
    KTypeVector::basis(k, t).add(&KTypeVector::basis(k, -t))
}

/// `g_t = i(f_t - f_{-t})`.
pub fn g_vec(k: i64, t: i64) -> KTypeVector {
    KTypeVector::basis(k, t).sub(&KTypeVector::basis(k, -t)).scale(&PiScalar::i())
}
