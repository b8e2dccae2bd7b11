//! Matrix coefficients on `GL2(R)+`: Iwasawa coordinates, the expansion
//! `g^{-1}P = Σ α_n(g) P_n`, and the Maass operators in coordinates
//!
//! ```text
//! R = e^{2iθ}(iy∂x + y∂y + (1/2i)∂θ)
//! L = e^{-2iθ}(-iy∂x + y∂y - (1/2i)∂θ)
//! ```
//!
//! evaluated by central differences with Richardson extrapolation.

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, PiScalar};
use crate::numeric::{circle_quadrature, Complex, Real};
use crate::poly_rep::{act, act_real, twist_factor, GroupElement, HomPoly};
use crate::principal_series::iota;
use crate::report::CheckRecord;

/// A point `g = u·τ(x, y)·κ(θ)` of `GL2(R)+`, with
/// `τ(x, y) = [[√y, x/√y], [0, 1/√y]]` and `κ(θ) = [[cos, sin], [-sin, cos]]`.
#[derive(Clone, Debug)]
pub struct GroupPoint<R> {
    pub matrix: [R; 4],
    pub u: R,
    pub x: R,
    pub y: R,
    pub theta: R,
}

impl<R: Real> GroupPoint<R> {
    pub fn from_coords(u: R, x: R, y: R, theta: R) -> Self {
        let sy = y.sqrt();
        let (s, c) = theta.sin_cos();
        let a = sy.clone() * c.clone() - x.clone() / sy.clone() * s.clone();
        let b = sy.clone() * s.clone() + x.clone() / sy.clone() * c.clone();
        let cc = -s / sy.clone();
        let d = c / sy;
        let matrix = [u.clone() * a, u.clone() * b, u.clone() * cc, u.clone() * d];
        GroupPoint { matrix, u, x, y, theta }
    }

    pub fn prec(&self) -> u32 {
        self.u.prec()
    }
}

/// Unique Iwasawa decomposition; `θ` is reduced to `[0, 2π)`.
pub fn iwasawa<R: Real>(m: &[R; 4]) -> Result<GroupPoint<R>> {
    let [a, b, c, d] = m.clone();
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    if det.is_sign_negative() || det.is_zero() {
        return Err(Error::NonPositiveDet);
    }
    let u = det.sqrt();
    let (c1, d1) = (c / u.clone(), d / u.clone());
    // g·i = x + iy for the normalised matrix
    let n = c1.clone() * c1.clone() + d1.clone() * d1.clone();
    let (a1, b1) = (a / u.clone(), b / u.clone());
    let x = (a1.clone() * c1.clone() + b1.clone() * d1.clone()) / n.clone();
    let y = R::one(u.prec()) / n;
    let mut theta = (-c1).atan2(&d1);
    if theta.is_sign_negative() {
        theta = theta + R::pi(u.prec()).mul_i64(2);
    }
    Ok(GroupPoint { matrix: m.clone(), u, x, y, theta })
}

/// `α(g)`: coordinates of `g^{-1}P` in the basis `P_n`, exact.
pub fn alpha_exact(g: &GroupElement, p: &HomPoly<PiScalar>) -> Result<Vec<PiScalar>> {
    if *g.det() <= rat_int(0) {
        return Err(Error::NonPositiveDet);
    }
    Ok(act(&g.inverse(), p)?.to_complex())
}

/// `α(g)` for a real matrix.
pub fn alpha_numeric<R: Real>(m: &[R; 4], p: &HomPoly<Complex<R>>) -> Result<Vec<Complex<R>>> {
    let det = m[0].clone() * m[3].clone() - m[1].clone() * m[2].clone();
    if det.is_sign_negative() || det.is_zero() {
        return Err(Error::NonPositiveDet);
    }
    let inv = [m[3].clone() / det.clone(), -m[1].clone() / det.clone(), -m[2].clone() / det.clone(), m[0].clone() / det];
    Ok(act_real(&inv, p)?.to_complex())
}

/// `f_t(g) = u^μ y^{k/2} e^{itθ}`.
pub fn ktype_function<R: Real>(g: &GroupPoint<R>, k: i64, t: i64, mu: &BigRational) -> Complex<R> {
    let prec = g.prec();
    let mu = R::from_ratio(mu, prec);
    let half_k = R::from_i64(k, prec).div_i64(2);
    let modulus = (mu * g.u.ln() + half_k * g.y.ln()).exp();
    Complex::cis(&g.theta.mul_i64(t)).scale(&modulus)
}

/// `α_n(g) = (i^{k-2-2n}/π) ⟨g f_{k-2-2n}, ι(P)⟩_I` by the trapezoid rule,
/// doubling the node count until two levels agree to `tol` (relative).
pub fn alpha_quadrature<R: Real>(
    m: &[R; 4],
    p: &HomPoly<PiScalar>,
    n: usize,
    tol: f64,
    prec: u32,
) -> Result<Complex<R>> {
    let k = p.k();
    let t = k - 2 - 2 * n as i64;
    let ip = iota(p);
    let coeffs: Vec<(i64, Complex<R>)> = ip.terms().map(|(s, c)| (s, c.to_numeric::<R>(prec))).collect();
    let integrand = |theta: &R| -> Complex<R> {
        // (g f_t)(κ(θ)) = f_t(κ(θ) g)
        let (s, c) = theta.sin_cos();
        let kg = [
            c.clone() * m[0].clone() + s.clone() * m[2].clone(),
            c.clone() * m[1].clone() + s.clone() * m[3].clone(),
            c.clone() * m[2].clone() - s.clone() * m[0].clone(),
            c.clone() * m[3].clone() - s.clone() * m[1].clone(),
        ];
        let gp = iwasawa(&kg).expect("positive determinant");
        let ft = ktype_function(&gp, k, t, p.mu());
        let iota_val = coeffs
            .iter()
            .fold(Complex::zero(prec), |acc, (s, c)| acc + c.clone() * Complex::cis(&theta.mul_i64(*s)));
        ft * iota_val
    };
    let scale = Complex::<R>::one(prec).mul_i_pow(k - 2 - 2 * n as i64).unscale(&R::pi(prec));
    let mut nodes = 64;
    let mut prev = circle_quadrature(nodes, prec, integrand) * scale.clone();
    loop {
        nodes *= 2;
        let cur = circle_quadrature(nodes, prec, integrand) * scale.clone();
        let diff = (cur.clone() - prev.clone()).abs().to_f64();
        let size = cur.abs().to_f64().max(1e-300);
        if diff <= tol * size || diff == 0.0 {
            return Ok(cur);
        }
        if nodes > 1 << 16 {
            return Err(Error::StepTooLarge(diff / size));
        }
        prev = cur;
    }
}

/// Which Maass operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Maass {
    Raise,
    Lower,
}

/// Finite-difference value with an error estimate.
#[derive(Clone, Debug)]
pub struct Estimate<T, R> {
    pub value: T,
    pub error: R,
}

/// Default step `2^{-prec/3}`.
pub fn default_step<R: Real>(prec: u32) -> R {
    R::one(prec).mul_pow2(-((prec / 3) as i32))
}

/// Apply `R` or `L` to a vector-valued function of `g` at once.
///
/// Derivatives in `x`, `y`, `θ` use central differences at `h`, `h/2`,
/// `h/4` with two Richardson levels; the `y`-step is relative to `y`.
pub fn maass_apply_vec<R, F>(
    f: F,
    which: Maass,
    g: &GroupPoint<R>,
    h: &R,
) -> Result<Estimate<Vec<Complex<R>>, R>>
where
    R: Real,
    F: Fn(&GroupPoint<R>) -> Vec<Complex<R>>,
{
    let prec = g.prec();
    let hy = h.clone() * g.y.clone();
    if (g.y.clone() - hy.clone().mul_i64(2)).is_sign_negative() {
        return Err(Error::StepTooLarge(h.to_f64()));
    }
    let at = |dx: &R, dy: &R, dt: &R| {
        f(&GroupPoint::from_coords(
            g.u.clone(),
            g.x.clone() + dx.clone(),
            g.y.clone() + dy.clone(),
            g.theta.clone() + dt.clone(),
        ))
    };
    let zero = R::zero(prec);
    let fscale = f(g).iter().fold(R::one(prec), |m, v| R::max_of(m, v.abs()));
    let central = |coord: usize, step: &R| -> Vec<Complex<R>> {
        let (plus, minus) = match coord {
            0 => (at(step, &zero, &zero), at(&-step.clone(), &zero, &zero)),
            1 => (at(&zero, step, &zero), at(&zero, &-step.clone(), &zero)),
            _ => (at(&zero, &zero, step), at(&zero, &zero, &-step.clone())),
        };
        let two_h = step.mul_i64(2);
        plus.into_iter().zip(minus).map(|(a, b)| (a - b).unscale(&two_h)).collect()
    };
    let mut error = R::zero(prec);
    let mut derivs = Vec::new();
    for coord in 0..3 {
        let base = if coord == 1 { hy.clone() } else { h.clone() };
        let d1 = central(coord, &base);
        let d2 = central(coord, &base.div_i64(2));
        let d3 = central(coord, &base.div_i64(4));
        let mut best = Vec::with_capacity(d1.len());
        for ((a, b), c) in d1.into_iter().zip(d2).zip(d3) {
            let r1 = (b.clone().mul_i64(4) - a.clone()).div_i64(3);
            let r2 = (c.clone().mul_i64(4) - b.clone()).div_i64(3);
            let r = (r2.clone().mul_i64(16) - r1.clone()).div_i64(15);
            let est = (r.clone() - r2.clone()).abs();
            // successive differences must shrink, else the step is too coarse
            let d_coarse = (b.clone() - a).abs();
            let d_fine = (c - b).abs();
            // roundoff level of the finest difference quotient
            let floor = R::epsilon(prec).mul_i64(1 << 12) * fscale.clone() / base.div_i64(4);
            if d_fine > d_coarse && d_fine > floor {
                return Err(Error::StepTooLarge(h.to_f64()));
            }
            error = R::max_of(error, est);
            best.push(r);
        }
        derivs.push(best);
    }
    let y = g.y.clone();
    let i = Complex::<R>::i(prec);
    let phase = Complex::cis(&g.theta.mul_i64(2));
    let (sign, phase) = match which {
        Maass::Raise => (1, phase),
        Maass::Lower => (-1, phase.conj()),
    };
    // ±iy∂x + y∂y ± (1/2i)∂θ, with 1/(2i) = -i/2
    let value = (0..derivs[0].len())
        .map(|j| {
            let dx = derivs[0][j].clone();
            let dy = derivs[1][j].clone();
            let dt = derivs[2][j].clone();
            let s = (i.clone() * dx).scale(&y).mul_i64(sign) + dy.scale(&y)
                - (i.clone() * dt).div_i64(2).mul_i64(sign);
            phase.clone() * s
        })
        .collect();
    let error = error * (y.clone() + R::one(prec));
    Ok(Estimate { value, error })
}

/// Scalar version of [`maass_apply_vec`].
pub fn maass_apply<R, F>(f: F, which: Maass, g: &GroupPoint<R>, h: &R) -> Result<Estimate<Complex<R>, R>>
where
    R: Real,
    F: Fn(&GroupPoint<R>) -> Complex<R>,
{
    let est = maass_apply_vec(|p| vec![f(p)], which, g, h)?;
    Ok(Estimate { value: est.value.into_iter().next().expect("one value"), error: est.error })
}

/// Random point of `GL2(R)+` with moderate entries.
pub fn random_group_point<R: Real>(rng: &mut impl Rng, prec: u32) -> GroupPoint<R> {
    let u = R::from_f64(rng.gen_range(0.5..2.0), prec);
    let x = R::from_f64(rng.gen_range(-1.0..1.0), prec);
    let y = R::from_f64(rng.gen_range(0.5..2.0), prec);
    let theta = R::from_f64(rng.gen_range(0.0..std::f64::consts::TAU), prec);
    GroupPoint::from_coords(u, x, y, theta)
}

/// Random polynomial with small Gaussian-integer coefficients.
pub fn random_poly(rng: &mut impl Rng, k: i64) -> HomPoly<PiScalar> {
    let coeffs = (0..k - 1)
        .map(|_| PiScalar::from_gauss(crate::exact::GaussQ::ints(rng.gen_range(-5..=5), rng.gen_range(-5..=5))))
        .collect();
    HomPoly::new(k, BigRational::from_integer(0.into()), coeffs)
}

/// Checks `Rα_n = (n+1-k)α_{n-1}` and `Lα_n = -(n+1)α_{n+1}` at random
/// points. Residuals are relative to `max_n |α_n(g)|`.
pub fn alpha_recurrence_check<R: Real>(
    k: i64,
    trials: usize,
    rng: &mut impl Rng,
    prec: u32,
    tolerance: f64,
) -> Result<CheckRecord> {
    let m = (k - 2) as usize;
    let mut worst = 0.0f64;
    let h = default_step::<R>(prec);
    for _ in 0..trials {
        let g = random_group_point::<R>(rng, prec);
        let p = random_poly(rng, k).to_numeric::<R>(prec);
        let alpha = |pt: &GroupPoint<R>| alpha_numeric(&pt.matrix, &p).expect("positive determinant");
        let base = alpha(&g);
        let scale = base.iter().fold(R::zero(prec), |acc, a| R::max_of(acc, a.abs()));
        let raised = maass_apply_vec(alpha, Maass::Raise, &g, &h)?;
        let lowered = maass_apply_vec(alpha, Maass::Lower, &g, &h)?;
        let zero = Complex::zero(prec);
        for n in 0..=m {
            let prev = if n == 0 { zero.clone() } else { base[n - 1].clone() };
            let next = if n == m { zero.clone() } else { base[n + 1].clone() };
            let r_rhs = prev.mul_i64(n as i64 + 1 - k);
            let l_rhs = next.mul_i64(-(n as i64 + 1));
            let r_res = (raised.value[n].clone() - r_rhs).abs() / scale.clone();
            let l_res = (lowered.value[n].clone() - l_rhs).abs() / scale.clone();
            worst = worst.max(r_res.to_f64()).max(l_res.to_f64());
        }
    }
    Ok(CheckRecord::new("alpha_recurrence", k, trials, worst, tolerance))
}

/// Exact α against the quadrature formula at random rational points.
pub fn alpha_quadrature_check<R: Real>(
    k: i64,
    trials: usize,
    rng: &mut impl Rng,
    prec: u32,
    tolerance: f64,
) -> Result<CheckRecord> {
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let g = loop {
            let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-6..=6)).collect();
            let d: Vec<i64> = (0..4).map(|_| rng.gen_range(1..=4)).collect();
            let q = |i: usize| BigRational::new(e[i].into(), d[i].into());
            if let Ok(g) = GroupElement::new(q(0), q(1), q(2), q(3)) {
                // odd weight needs a rational square root of det g
                if *g.det() > rat_int(0) && twist_factor(g.det(), &rat(2 - k, 2)).is_ok() {
                    break g;
                }
            }
        };
        let p = random_poly(rng, k);
        let exact = alpha_exact(&g, &p)?;
        let m = g.entries().map(|q| R::from_ratio(q, prec));
        let mut scale = 0.0f64;
        let mut diff = 0.0f64;
        for (n, a) in exact.iter().enumerate() {
            let num = alpha_quadrature::<R>(&m, &p, n, 1e-30, prec)?;
            let ex = a.to_numeric::<R>(prec);
            diff = diff.max((num - ex.clone()).abs().to_f64());
            scale = scale.max(ex.abs().to_f64());
        }
        worst = worst.max(diff / scale.max(f64::MIN_POSITIVE));
    }
    Ok(CheckRecord::new("alpha_exact_vs_quadrature", k, trials, worst, tolerance))
}
