//! Cusp forms as exact q-expansions: eta products, certified evaluation,
//! Hecke operators and completed L-values at critical integers.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{int_json, json_int, rat_int};
use crate::numeric::{Complex, Real};

/// Truncated q-expansion `Σ_{n=1}^{M} a_n q^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub id: String,
    pub weight: i64,
    pub level: u64,
    /// `coeffs[n-1] = a_n`.
    coeffs: Vec<BigRational>,
    /// Marks normalised Hecke eigenforms.
    pub eigenform: bool,
}

/// Coefficients of `∏_{n≥1} (1 - q^{dn})^r` up to `q^len` (index = power).
fn eta_power(d: usize, r: i64, len: usize) -> Vec<BigInt> {
    // Euler's pentagonal series in q^d
    let mut h = vec![BigInt::zero(); len + 1];
    for j in 0i64.. {
        let mut any = false;
        for g in [j * (3 * j - 1) / 2, j * (3 * j + 1) / 2] {
            let e = g as usize * d;
            if e <= len {
                any = true;
                let sign = if j % 2 == 0 { 1 } else { -1 };
                if j == 0 && g != 0 {
                    continue;
                }
                h[e] = BigInt::from(sign);
            }
        }
        if !any {
            break;
        }
    }
    // g = h^r via g_n = (1/n) Σ_{j=1}^{n} ((r+1)j - n) h_j g_{n-j}
    let mut g = vec![BigInt::zero(); len + 1];
    g[0] = BigInt::one();
    for n in 1..=len {
        let mut acc = BigInt::zero();
        for j in 1..=n {
            if h[j].is_zero() {
                continue;
            }
            let w = (r + 1) * j as i64 - n as i64;
            acc += BigInt::from(w) * &h[j] * &g[n - j];
        }
        g[n] = acc / BigInt::from(n);
    }
    g
}

impl QExpansion {
    pub fn new(id: impl Into<String>, weight: i64, level: u64, coeffs: Vec<BigRational>) -> Self {
        QExpansion { id: id.into(), weight, level, coeffs, eigenform: false }
    }

    pub fn from_ints(id: impl Into<String>, weight: i64, level: u64, coeffs: &[i64]) -> Self {
        QExpansion::new(id, weight, level, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// Number of stored coefficients `M`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// `a_n` for `1 ≤ n ≤ M`.
    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n - 1]
    }
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QExpansion { coeffs: self.coeffs.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    /// Keep the first `m` coefficients.
    pub fn truncate(&self, m: usize) -> Self {
        QExpansion { coeffs: self.coeffs[..m.min(self.len())].to_vec(), ..self.clone() }
    }

    /// Exponent of the crude bound `|a_n| ≤ C n^{k/2+1}`.
    pub fn growth_exponent(&self) -> i64 {
        self.weight / 2 + 1
    }

    /// Smallest `C` with `|a_n| ≤ C n^{k/2+1}` on the stored range.
    pub fn tail_constant(&self) -> f64 {
        let p = self.growth_exponent() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.abs().to_f64().unwrap_or(f64::INFINITY) / ((i + 1) as f64).powf(p))
            .fold(0.0, f64::max)
    }

    /// `T_p` on the first `out_len` coefficients:
    /// `(T_p f)_n = a_{np} + p^{k-1} a_{n/p}`.
    pub fn hecke(&self, p: u64, out_len: usize) -> Result<QExpansion> {
        if self.level.is_multiple_of(p) {
            return Err(Error::LevelNotCoprime { p, level: self.level });
        }
        let pu = p as usize;
        if pu * out_len > self.len() {
            return Err(Error::InsufficientTerms { needed: pu * out_len, available: self.len() });
        }
        let pk = BigRational::from_integer(BigInt::from(p).pow((self.weight - 1) as u32));
        let coeffs = (1..=out_len)
            .map(|n| {
                let mut c = self.coeff(n * pu).clone();
                if n % pu == 0 {
                    c += &pk * self.coeff(n / pu);
                }
                c
            })
            .collect();
        Ok(QExpansion { id: format!("T{p}({})", self.id), coeffs, ..self.clone() })
    }

    pub fn numeric<R: Real>(&self, prec: u32) -> NumericForm<R> {
        NumericForm {
            weight: self.weight,
            level: self.level,
            coeffs: self.coeffs.iter().map(|a| R::from_ratio(a, prec)).collect(),
            tail_constant: R::from_f64(self.tail_constant() * (1.0 + 1e-9), prec),
            prec,
        }
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|a| if a.is_integer() { int_json(a.numer()) } else { json!(a.to_string()) })
            .collect();
        json!({"id": self.id, "weight": self.weight, "level": self.level, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let weight = v["weight"].as_i64().ok_or_else(|| Error::Parse("missing weight".into()))?;
        let level = v["level"].as_u64().ok_or_else(|| Error::Parse("missing level".into()))?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing coeffs".into()))?
            .iter()
            .map(|c| match c.as_str() {
                Some(s) if s.contains('/') => s.parse().map_err(|_| Error::Parse(format!("bad coefficient {s:?}"))),
                _ => json_int(c).map(BigRational::from_integer),
            })
            .collect::<Result<Vec<_>>>()?;
        if weight < 2 || level == 0 {
            return Err(Error::Parse(format!("unsupported weight {weight} / level {level}")));
        }
        let id = v.get("id").and_then(Value::as_str).unwrap_or("file").to_string();
        let mut f = QExpansion::new(id, weight, level, coeffs);
        f.eigenform = !f.is_empty() && f.coeff(1).is_one();
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self> {
        QExpansion::from_json(&serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, serde_json::to_string(&self.to_json())?)?;
        Ok(())
    }
}

/// `Δ = q ∏ (1 - q^n)^{24}` to `m` terms.
pub fn delta_qexp(m: usize) -> QExpansion {
    let mut f = eta_product(1, &[(1, 24)], m).expect("Δ is an integral cusp form");
    f.id = "delta".into();
    f.eigenform = true;
    f
}

/// The weight-2 newform `η(τ)²η(11τ)²` of level 11.
pub fn level11_qexp(m: usize) -> QExpansion {
    let mut f = eta_product(11, &[(1, 2), (11, 2)], m).expect("integral cusp form");
    f.id = "level11".into();
    f.eigenform = true;
    f
}

/// `∏ η(dτ)^{r_d}` to `m` terms. The weight `Σr/2` must be a positive
/// integer and the leading exponent `Σ d r / 24` a positive integer.
pub fn eta_product(level: u64, pairs: &[(u64, i64)], m: usize) -> Result<QExpansion> {
    let rsum: i64 = pairs.iter().map(|p| p.1).sum();
    let shift_num: i64 = pairs.iter().map(|(d, r)| *d as i64 * r).sum();
    if rsum <= 0 || rsum % 2 != 0 {
        return Err(Error::NonIntegralExpansion(format!("weight {rsum}/2")));
    }
    if shift_num <= 0 || shift_num % 24 != 0 {
        return Err(Error::NonIntegralExpansion(format!("q-order {shift_num}/24")));
    }
    if let Some((d, _)) = pairs.iter().find(|(d, _)| *d == 0 || !level.is_multiple_of(*d)) {
        return Err(Error::NonIntegralExpansion(format!("{d} does not divide the level {level}")));
    }
    let shift = (shift_num / 24) as usize;
    if m < shift {
        return Err(Error::InsufficientTerms { needed: shift, available: m });
    }
    let len = m - shift;
    let mut prod = vec![BigInt::zero(); len + 1];
    prod[0] = BigInt::one();
    for (d, r) in pairs {
        let factor = eta_power(*d as usize, *r, len);
        let mut next = vec![BigInt::zero(); len + 1];
        for (i, a) in prod.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in factor.iter().enumerate().take(len + 1 - i) {
                next[i + j] += a * b;
            }
        }
        prod = next;
    }
    let mut coeffs = vec![BigRational::zero(); m];
    for (e, c) in prod.into_iter().enumerate() {
        coeffs[e + shift - 1] = BigRational::from_integer(c);
    }
    Ok(QExpansion::new("eta", rsum / 2, level, coeffs))
}

/// Built-in forms by id.
pub fn builtin(id: &str, m: usize) -> Result<QExpansion> {
    match id {
        "delta" => Ok(delta_qexp(m)),
        "level11" | "11a" => Ok(level11_qexp(m)),
        _ => Err(Error::Parse(format!("unknown form {id:?} (built-ins: delta, level11)"))),
    }
}

/// Cache path for a built-in expansion of length `m`.
pub fn cache_path(dir: &Path, id: &str, m: usize) -> PathBuf {
    dir.join(format!("{id}_M{m}.json"))
}

/// Built-in form, read from or written to `cache_dir` when given.
pub fn builtin_cached(id: &str, m: usize, cache_dir: Option<&Path>) -> Result<QExpansion> {
    let Some(dir) = cache_dir else {
        return builtin(id, m);
    };
    let path = cache_path(dir, id, m);
    if let Ok(mut f) = QExpansion::load(&path) {
        if f.len() == m {
            f.id = id.to_string();
            f.eigenform = true;
            return Ok(f);
        }
    }
    let f = builtin(id, m)?;
    f.save(&path)?;
    Ok(f)
}

/// Value with a certified absolute error bound.
#[derive(Clone, Debug)]
pub struct Certified<T, R> {
    pub value: T,
    pub bound: R,
}

/// A q-expansion with coefficients converted to `R` once.
#[derive(Clone, Debug)]
pub struct NumericForm<R> {
    pub weight: i64,
    pub level: u64,
    pub coeffs: Vec<R>,
    pub tail_constant: R,
    pub prec: u32,
}

impl<R: Real> NumericForm<R> {
    /// Terms needed so that `Σ_{n>M} C n^e |q|^n ≤ target`, with the
    /// tail bounded by a geometric series.
    pub fn terms_needed(&self, abs_q: &R, e: i64, target: &R) -> Option<(usize, R)> {
        let one = R::one(self.prec);
        if *abs_q >= one {
            return None;
        }
        let c = self.tail_constant.clone();
        let mut qn = abs_q.clone();
        for n in 1..=self.coeffs.len() + 1 {
            // bound for the tail starting at n+1
            let next = n + 1;
            let ratio = R::from_i64(next as i64 + 1, self.prec).div_i64(next as i64).powi(e as i32) * abs_q.clone();
            qn = qn * abs_q.clone();
            if ratio < one {
                let first = c.clone() * R::from_i64(next as i64, self.prec).powi(e as i32) * qn.clone();
                let tail = first / (one.clone() - ratio);
                if tail <= *target {
                    return Some((n, tail));
                }
            }
        }
        None
    }

    fn check_terms(&self, tau: &Complex<R>, e: i64, target: &R) -> Result<(usize, R)> {
        let abs_q = (-R::pi(self.prec).mul_i64(2) * tau.im.clone()).exp();
        match self.terms_needed(&abs_q, e, target) {
            Some((n, tail)) if n <= self.coeffs.len() => Ok((n, tail)),
            _ => {
                let need = estimate_terms(tau.im.to_f64(), self.prec, e);
                Err(Error::AccuracyUnreachable { imag: tau.im.to_f64(), required: need, available: self.coeffs.len() })
            }
        }
    }

    /// `f(τ)` with truncation bound below `2^{-prec}`.
    pub fn eval(&self, tau: &Complex<R>) -> Result<Certified<Complex<R>, R>> {
        let target = R::epsilon(self.prec);
        let (n, tail) = self.check_terms(tau, self.weight / 2 + 1, &target)?;
        let q = q_of(tau);
        let mut acc = Complex::zero(self.prec);
        for a in self.coeffs[..n].iter().rev() {
            acc = (acc + Complex::from_real(a.clone())) * q.clone();
        }
        Ok(Certified { value: acc, bound: tail })
    }

    /// `S_r(τ) = Σ a_n q^n / n^{r+1}` for `r = 0..=rmax`, with one bound
    /// valid for all of them.
    pub fn eichler_sums(&self, tau: &Complex<R>, rmax: usize, target: &R) -> Result<Certified<Vec<Complex<R>>, R>> {
        let (n, tail) = self.check_terms(tau, self.weight / 2 + 1, target)?;
        let q = q_of(tau);
        let mut sums = vec![Complex::zero(self.prec); rmax + 1];
        let mut qn = Complex::one(self.prec);
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            qn = qn * q.clone();
            if a.is_zero() {
                continue;
            }
            let nn = R::from_i64(i as i64 + 1, self.prec);
            let mut term = qn.scale(&(a.clone() / nn.clone()));
            for s in sums.iter_mut() {
                *s = s.clone() + term.clone();
                term = term.unscale(&nn);
            }
        }
        Ok(Certified { value: sums, bound: tail })
    }
}

fn q_of<R: Real>(tau: &Complex<R>) -> Complex<R> {
    let two_pi = R::pi(tau.prec()).mul_i64(2);
    Complex::new(-tau.im.clone() * two_pi.clone(), tau.re.clone() * two_pi).exp()
}

/// Rough count of terms for `prec` bits at height `y`.
fn estimate_terms(y: f64, prec: u32, e: i64) -> usize {
    let rate = 2.0 * std::f64::consts::PI * y;
    let mut n = 1.0f64;
    for _ in 0..50 {
        n = (prec as f64 * std::f64::consts::LN_2 + e as f64 * n.ln().max(0.0) + 10.0) / rate;
    }
    n.ceil() as usize
}

pub fn eval<R: Real>(f: &QExpansion, tau: &Complex<R>, prec: u32) -> Result<Certified<Complex<R>, R>> {
    f.numeric::<R>(prec).eval(tau)
}

/// Sign `w` with `f|_k W_N = w f` for `W_N = [[0, -1], [N, 0]]`, found
/// numerically at `τ = 0.6i` and rounded.
pub fn atkin_lehner_sign<R: Real>(f: &QExpansion, prec: u32) -> Result<i64> {
    let nf = f.numeric::<R>(prec);
    let n = R::from_i64(f.level as i64, prec);
    let tau = Complex::new(R::zero(prec), R::from_f64(0.6, prec));
    let w_tau = Complex::from_real(-R::one(prec)) / (tau.clone().scale(&n));
    let lhs = nf.eval(&w_tau)?.value;
    let rhs = nf.eval(&tau)?.value;
    // N^{k/2} (Nτ)^{-k} f(-1/(Nτ)) = w f(τ)
    let k = f.weight as i32;
    let factor = (tau.scale(&n)).powi(-k).scale(&n.sqrt().powi(k));
    let ratio = (lhs * factor) / rhs;
    let w = ratio.re.to_f64();
    let rounded = w.round();
    if (w - rounded).abs() > 1e-6 || ratio.im.to_f64().abs() > 1e-6 || rounded.abs() != 1.0 {
        return Err(Error::Parse(format!("no Atkin-Lehner sign: ratio {w}")));
    }
    Ok(rounded as i64)
}

/// `Γ(a, x)` for a positive integer `a`: `(a-1)! e^{-x} Σ_{j<a} x^j/j!`.
fn upper_gamma_int<R: Real>(a: i64, x: &R) -> R {
    let prec = x.prec();
    let mut term = R::one(prec);
    let mut sum = R::one(prec);
    for j in 1..a {
        term = term * x.clone() / R::from_i64(j, prec);
        sum = sum + term.clone();
    }
    let mut fact = R::one(prec);
    for j in 2..a {
        fact = fact.mul_i64(j);
    }
    fact * sum * (-x.clone()).exp()
}

/// `Λ(f, s) = ∫_0^∞ f(iy) y^{s-1} dy` for integer `1 ≤ s ≤ k-1`, split at
/// `1/√N` and folded with `W_N`.
pub fn l_value<R: Real>(f: &QExpansion, s: i64, prec: u32) -> Result<Certified<R, R>> {
    let k = f.weight;
    if s < 1 || s > k - 1 {
        return Err(Error::Parse(format!("s = {s} outside 1..{}", k - 1)));
    }
    let work = prec + 32;
    let w = atkin_lehner_sign::<R>(f, work)?;
    let nf = f.numeric::<R>(work);
    let n_r = R::from_i64(f.level as i64, work);
    let y0 = R::one(work) / n_r.sqrt();
    // w i^k N^{k/2-s}
    let ik = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let fold = R::from_i64(w * ik, work) * (n_r.ln() * R::from_i64(k - 2 * s, work).div_i64(2)).exp();
    let two_pi = R::pi(work).mul_i64(2);
    let target = R::epsilon(prec).mul_pow2(-8);
    let mut acc = R::zero(work);
    let c = nf.tail_constant.clone();
    let e = f.growth_exponent() as i32;
    let term_at = |n: usize, coeff: &R| -> R {
        let lam = two_pi.mul_i64(n as i64);
        let x = lam.clone() * y0.clone();
        let a = upper_gamma_int(s, &x) / lam.powi(s as i32);
        let b = upper_gamma_int(k - s, &x) / lam.powi((k - s) as i32);
        coeff.clone() * (a + fold.clone() * b)
    };
    let mut last_bound = R::zero(work);
    for n in 1..=nf.coeffs.len() {
        acc = acc + term_at(n, &nf.coeffs[n - 1]);
        let nb = term_at(n + 1, &(c.clone() * R::from_i64(n as i64 + 1, work).powi(e))).abs();
        // geometric tail once consecutive majorants halve
        if nb.clone().mul_i64(2) <= last_bound && nb.clone().mul_i64(2) <= target {
            return Ok(Certified { value: acc.with_prec(prec), bound: nb.mul_i64(2) });
        }
        last_bound = nb;
    }
    Err(Error::AccuracyUnreachable {
        imag: y0.to_f64(),
        required: estimate_terms(y0.to_f64(), prec, e as i64),
        available: nf.coeffs.len(),
    })
}

/// Classical dimensions of `M_k` and `S_k` for `SL2(Z)`, even `k ≥ 0`.
pub fn classical_dims(k: i64) -> (i64, i64) {
    if k < 0 || k % 2 != 0 || k == 2 {
        return (if k == 0 { 1 } else { 0 }, 0);
    }
    let mk = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
    let sk = if k >= 12 { mk - 1 } else { 0 };
    (mk, sk)
}
