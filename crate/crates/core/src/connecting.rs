//! The connecting cocycle of a cusp form at `r = 1`: the differentials
//! `ω`, `ω̄`, the Eichler-integral lift and the comparison with
//! `(1 - k)` times the period cocycle.

use std::cell::RefCell;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix_coeffs::{maass_apply, GroupPoint, Maass};
use crate::modular_forms::{NumericForm, QExpansion};
use crate::numeric::{Complex, Real};
use crate::period_cocycles::{
    act_int, omega_act, BasePoint, Cocycle, CocycleKind, Endpoint, GeneratorSet, GroupWord, IntMat,
    PeriodEngine,
};
use crate::poly_rep::HomPoly;
use crate::report::CheckRecord;

/// A character of `GL2(R)/GL2(R)+`, stored by its value on `diag(1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Character {
    Trivial,
    SignDet,
}

impl Character {
    pub fn eps_c(self) -> i64 {
        match self {
            Character::Trivial => 1,
            Character::SignDet => -1,
        }
    }

    pub fn from_sign(s: i64) -> Self {
        if s >= 0 {
            Character::Trivial
        } else {
            Character::SignDet
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" | "trivial" => Ok(Character::Trivial),
            "-" | "-1" | "sign" | "sign-of-det" => Ok(Character::SignDet),
            _ => Err(Error::Parse(format!("character `{s}`"))),
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.eps_c() > 0 { "+" } else { "-" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffKind {
    Holomorphic,
    Antiholomorphic,
}

/// `ω_φ(P)` or `ω̄_φ(P)` for a fixed polynomial `P`.
#[derive(Clone, Debug)]
pub struct DifferentialForm<R> {
    pub p: HomPoly<Complex<R>>,
    pub kind: DiffKind,
}

fn two_pi_i<R: Real>(prec: u32) -> Complex<R> {
    Complex::new(R::zero(prec), R::pi(prec).mul_i64(2))
}

/// Coefficient of `dτ` (holomorphic kind: `P(1,-τ) f(τ)/(2πi)`) or of
/// `d(-τ̄)` (antiholomorphic kind: `P(1,-τ̄) conj f(τ)/(-2πi)`).
pub fn omega_eval<R: Real>(f: &NumericForm<R>, d: &DifferentialForm<R>, tau: &Complex<R>) -> Result<Complex<R>> {
    if tau.im.is_sign_negative() || tau.im.is_zero() {
        return Err(Error::NotInUpperHalfPlane);
    }
    let prec = tau.prec();
    if d.p.is_zero() {
        return Ok(Complex::zero(prec));
    }
    let fv = f.eval(tau)?.value;
    let one = Complex::one(prec);
    Ok(match d.kind {
        DiffKind::Holomorphic => d.p.eval_complex(&one, &-tau.clone()) * fv * two_pi_i::<R>(prec).inv(),
        DiffKind::Antiholomorphic => {
            -(d.p.eval_complex(&one, &-tau.conj()) * fv.conj() * two_pi_i::<R>(prec).inv())
        }
    })
}

/// `h_P(τ) = (k - 1) ∫_i^τ ω_φ(P)`, so `h_P(i) = 0`.
pub fn eichler_lift<R: Real>(engine: &PeriodEngine<R>, p: &HomPoly<Complex<R>>, tau: &Complex<R>) -> Result<Complex<R>> {
    let prec = engine.work_prec;
    let k = engine.weight();
    let i = Complex::i(prec);
    let v = engine.period_integral(p, &Endpoint::At(i), &Endpoint::At(tau.with_prec(prec)))?.value;
    Ok((v * two_pi_i::<R>(engine.prec).inv()).mul_i64(k - 1))
}

/// The two edge components `φ(f_k)`, `φ(f_{-k})` of the lift as functions
/// on `GL2(R)+`: `y^{k/2} f(x+iy) e^{ikθ}` and its complex conjugate.
pub struct AutomorphicLift<R> {
    pub form: QExpansion,
    pub weight: i64,
    numeric: NumericForm<R>,
}

impl<R: Real> AutomorphicLift<R> {
    pub fn new(form: QExpansion, prec: u32) -> Self {
        let numeric = form.numeric::<R>(prec);
        AutomorphicLift { weight: form.weight, form, numeric }
    }

    /// Component of `K`-type `k` (`conjugate = false`) or `-k`.
    pub fn component(&self, g: &GroupPoint<R>, conjugate: bool) -> Result<Complex<R>> {
        let prec = g.y.prec();
        let tau = Complex::new(g.x.clone(), g.y.clone());
        let fv = self.numeric.eval(&tau)?.value;
        let half_k = R::from_i64(self.weight, prec).div_i64(2);
        let modulus = (half_k * g.y.ln()).exp();
        let t = g.theta.mul_i64(self.weight);
        Ok(if conjugate {
            fv.conj() * Complex::cis(&-t)
        } else {
            fv * Complex::cis(&t)
        }
        .scale(&modulus))
    }

    /// `L φ(f_k)` (or `R φ(f_{-k})`) relative to the size of the component.
    pub fn holomorphy_residual(&self, g: &GroupPoint<R>, conjugate: bool, h: &R) -> Result<f64> {
        let err = RefCell::new(None);
        let f = |p: &GroupPoint<R>| {
            self.component(p, conjugate).unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                Complex::zero(p.y.prec())
            })
        };
        let which = if conjugate { Maass::Raise } else { Maass::Lower };
        let est = maass_apply(f, which, g, h)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        let scale = self.component(g, conjugate)?.abs().to_f64().max(f64::MIN_POSITIVE);
        Ok(est.value.abs().to_f64() / scale)
    }
}

/// How the antiholomorphic integral is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `∫ ω̄_φ(P) = conj ∫ ω_φ(P̄)` along the same path.
    Conj,
    /// `∫_i^{γi} ω̄_φ = -ω·∫_i^{ωγω i} ω_φ`, a separate integration.
    Omega,
}

/// The connecting cocycle `∂^ε φ` with the lift normalized at `i`.
pub struct ConnectingMap<'a, R> {
    pub engine: &'a PeriodEngine<R>,
    pub eps: Character,
}

impl<'a, R: Real> ConnectingMap<'a, R> {
    pub fn new(engine: &'a PeriodEngine<R>, eps: Character) -> Self {
        ConnectingMap { engine, eps }
    }

    fn k(&self) -> i64 {
        self.engine.weight()
    }

    fn zero(&self) -> HomPoly<Complex<R>> {
        HomPoly::zero(self.k(), BigRational::zero(), &Complex::zero(self.engine.prec))
    }

    fn pt(&self, z: &Complex<R>) -> Endpoint<R> {
        Endpoint::At(z.with_prec(self.engine.work_prec))
    }

    /// `∫_{z0}^{z1} ω_φ` as a functional, in the `P_F` model.
    pub fn omega_integral(&self, z0: &Complex<R>, z1: &Complex<R>) -> Result<HomPoly<Complex<R>>> {
        let v = self.engine.functional(&self.pt(z0), &self.pt(z1))?.value;
        let s = two_pi_i::<R>(self.engine.work_prec).inv();
        Ok(v.scale(&s))
    }

    /// `∫_{z0}^{z1} ω̄_φ` as a functional.
    pub fn omega_bar_integral(&self, z0: &Complex<R>, z1: &Complex<R>) -> Result<HomPoly<Complex<R>>> {
        let v = self.engine.functional(&self.pt(z0), &self.pt(z1))?.value;
        let s = two_pi_i::<R>(self.engine.work_prec).inv();
        Ok(v.conj().scale(&s))
    }

    /// `H(τ) = (1 - k)[∫_a^τ ω - ε(c) ∫_a^τ ω̄]`, the lift normalized at `a`.
    pub fn lift_functional(&self, a: &Complex<R>, tau: &Complex<R>) -> Result<HomPoly<Complex<R>>> {
        let w = self.omega_integral(a, tau)?;
        let wb = self.omega_bar_integral(a, tau)?;
        let v = if self.eps.eps_c() > 0 { w.sub(&wb) } else { w.add(&wb) };
        Ok(self.finish(v))
    }

    fn finish(&self, v: HomPoly<Complex<R>>) -> HomPoly<Complex<R>> {
        let c = Complex::from_i64(1 - self.k(), 0, self.engine.work_prec);
        v.scale(&c).map(|x| x.with_prec(self.engine.prec))
    }

    /// `(1 - k)[∫_i^{γi} ω_φ - ε(c) ∫_i^{γi} ω̄_φ]`.
    pub fn value(&self, gamma: &IntMat) -> Result<HomPoly<Complex<R>>> {
        self.value_by(gamma, Route::Conj)
    }

    pub fn value_by(&self, gamma: &IntMat, route: Route) -> Result<HomPoly<Complex<R>>> {
        if gamma.det() != 1 {
            return Err(Error::NotInGroup(gamma.entries_i64()));
        }
        if gamma.is_pm_identity() {
            return Ok(self.zero());
        }
        let wp = self.engine.work_prec;
        let i = Complex::i(wp);
        let gi = gamma.act(&i);
        let w = self.omega_integral(&i, &gi)?;
        let wb = match route {
            Route::Conj => self.omega_bar_integral(&i, &gi)?,
            Route::Omega => {
                let g2 = gamma.omega_conj();
                omega_act(&self.omega_integral(&i, &g2.act(&i))?).neg()
            }
        };
        let v = if self.eps.eps_c() > 0 { w.sub(&wb) } else { w.add(&wb) };
        Ok(self.finish(v))
    }

    pub fn value_word(&self, w: &GroupWord, gens: &GeneratorSet) -> Result<HomPoly<Complex<R>>> {
        self.value(&w.eval(gens))
    }

    /// `H(γτ0) - γ·H(τ0)` with `H` normalized at `a`.
    pub fn lift_route(&self, gamma: &IntMat, a: &Complex<R>, tau0: &Complex<R>) -> Result<HomPoly<Complex<R>>> {
        let h1 = self.lift_functional(a, &gamma.act(tau0))?;
        let h0 = self.lift_functional(a, tau0)?;
        Ok(h1.sub(&act_int(gamma, &h0)))
    }

    pub fn cocycle(&self, gens: &GeneratorSet) -> Result<Cocycle<R>> {
        let values = gens.mats.iter().map(|g| self.value(g)).collect::<Result<Vec<_>>>()?;
        Ok(Cocycle { k: self.k(), base: BasePoint::i(), gens: gens.clone(), values, prec: self.engine.prec })
    }
}

/// `connecting_cocycle(f, ε, γ)` at base `i`.
pub fn connecting_cocycle<R: Real>(
    engine: &PeriodEngine<R>,
    eps: Character,
    w: &GroupWord,
    gens: &GeneratorSet,
) -> Result<HomPoly<Complex<R>>> {
    ConnectingMap::new(engine, eps).value_word(w, gens)
}

fn label(engine_id: &str, eps: Character) -> String {
    format!("{engine_id},eps={eps}")
}

/// `conj ∂^ε(φ)(γ) = ε(c) ∂^ε(φ̄)(γ)` on each of `gammas`; for a
/// real-coefficient form the right side is computed from `f` itself by the
/// other route. The residual is relative to the largest value in the batch.
pub fn conjugation_check<R: Real>(
    engine: &PeriodEngine<R>,
    eps: Character,
    gammas: &[IntMat],
    tol: f64,
) -> Result<CheckRecord> {
    let map = ConnectingMap::new(engine, eps);
    let mut scale = R::zero(engine.prec);
    let mut diff = R::zero(engine.prec);
    for g in gammas {
        let lhs = map.value_by(g, Route::Omega)?.conj();
        let rhs = map.value_by(g, Route::Conj)?.map(|c| c.mul_i64(eps.eps_c()));
        scale = R::max_of(scale, R::max_of(lhs.max_abs(), rhs.max_abs()));
        diff = R::max_of(diff, lhs.sub(&rhs).max_abs());
    }
    let res = if scale.is_zero() { diff.to_f64() } else { (diff / scale).to_f64() };
    Ok(CheckRecord::new(format!("conjugation[{}]", label(&engine.form.id, eps)), engine.weight(), gammas.len(), res, tol))
}

/// Outcome of the comparison with `(1 - k)(∂φ + ε(c)(∂φ)^c)`.
#[derive(Clone, Debug)]
pub struct TheoremOutcome {
    pub residual: f64,
    pub fitted: (f64, f64),
    pub expected: i64,
    pub fit_error: f64,
    pub words: Vec<String>,
}

impl TheoremOutcome {
    /// The fitted constant, or `undetermined` when both cocycles vanish.
    pub fn fitted_display(&self) -> String {
        if self.fitted.0.is_nan() {
            "undetermined".into()
        } else {
            format!("{:.15}{:+.3e}i", self.fitted.0, self.fitted.1)
        }
    }
}

/// Direct connecting values against `(1 - k)(∂φ + ε(c)(∂φ)^c)` on the
/// generators and `n_words` random words; `∂φ` is the period cocycle of
/// `ω_φ` and `(·)^c` its `ω`-twist read off the generator values.
pub fn theorem_check<R: Real>(
    engine: &PeriodEngine<R>,
    eps: Character,
    gens: &GeneratorSet,
    rng: &mut impl Rng,
    n_words: usize,
) -> Result<TheoremOutcome> {
    let prec = engine.prec;
    let k = engine.weight();
    let map = ConnectingMap::new(engine, eps);
    let base = BasePoint::i();
    let dphi = engine.cocycle(gens, CocycleKind::Plain, &base)?.scale(&two_pi_i::<R>(prec).inv());
    let dphi_c = dphi.omega_twist()?;
    let e = Complex::from_i64(eps.eps_c(), 0, prec);
    let model = dphi.add(&dphi_c.scale(&e));
    let mut words: Vec<GroupWord> = (0..gens.len()).map(|i| GroupWord::letter(i, 1)).collect();
    words.extend((0..n_words).map(|_| GroupWord::random(rng, 6, gens)));
    let mut direct = Vec::with_capacity(words.len());
    let mut shape = Vec::with_capacity(words.len());
    for w in &words {
        direct.push(map.value_word(w, gens)?);
        shape.push(model.eval_word(w));
    }
    let km = Complex::from_i64(1 - k, 0, prec);
    let mut scale = R::zero(prec);
    let mut diff = R::zero(prec);
    for (d, s) in direct.iter().zip(&shape) {
        scale = R::max_of(scale, d.max_abs());
        diff = R::max_of(diff, d.sub(&s.scale(&km)).max_abs());
    }
    let residual = if scale.is_zero() { diff.to_f64() } else { (diff / scale.clone()).to_f64() };
    // least-squares λ with direct ≈ λ·shape over all coefficients
    let mut num = Complex::zero(prec);
    let mut den = R::zero(prec);
    for (d, s) in direct.iter().zip(&shape) {
        for (a, b) in d.coeffs().iter().zip(s.coeffs()) {
            num = num + b.conj() * a.clone();
            den = den + b.norm_sqr();
        }
    }
    let (fitted, fit_error) = if den.is_zero() {
        ((f64::NAN, f64::NAN), if scale.is_zero() { 0.0 } else { f64::INFINITY })
    } else {
        let lam = num.unscale(&den);
        let err = (lam.clone() - km.clone()).abs().to_f64() / (k - 1) as f64;
        (lam.to_f64_pair(), err)
    };
    Ok(TheoremOutcome {
        residual,
        fitted,
        expected: 1 - k,
        fit_error,
        words: words.iter().map(|w| w.display(gens)).collect(),
    })
}

/// The connecting cocycle lies in its `ε`-isotypic part: the opposite
/// parity component is a coboundary. Returns the relative residual.
pub fn isotypy_residual<R: Real>(engine: &PeriodEngine<R>, eps: Character, gens: &GeneratorSet) -> Result<f64> {
    let c = ConnectingMap::new(engine, eps).cocycle(gens)?;
    let (plus, minus) = c.parity_decompose()?;
    let other = if eps.eps_c() > 0 { minus } else { plus };
    let scale = c.max_abs().to_f64();
    let fit = other.solve_coboundary();
    Ok(if scale > 0.0 { fit.residual / scale } else { fit.residual })
}

/// Run the connecting-map checks for one form and character.
pub fn connect_suite<R: Real>(
    engine: &PeriodEngine<R>,
    eps: Character,
    gens: &GeneratorSet,
    rng: &mut impl Rng,
    tol: f64,
    fit_tol: f64,
) -> Result<(Vec<CheckRecord>, TheoremOutcome)> {
    let k = engine.weight();
    let id = label(&engine.form.id, eps);
    let th = theorem_check(engine, eps, gens, rng, 10)?;
    let mut recs = vec![
        CheckRecord::new(format!("theorem[{id}]"), k, th.words.len(), th.residual, tol),
        CheckRecord::new(format!("fitted_constant[{id}]"), k, 1, th.fit_error, fit_tol)
            .with_detail(format!("fitted={} expected={}", th.fitted_display(), th.expected)),
    ];
    recs.push(conjugation_check(engine, eps, &gens.mats, tol)?);
    recs.push(CheckRecord::new(format!("isotypy[{id}]"), k, 1, isotypy_residual(engine, eps, gens)?, tol));
    Ok((recs, th))
}
