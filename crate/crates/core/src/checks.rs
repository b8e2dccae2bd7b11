//! Check suites run by the command line and the acceptance target.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connecting::{self, AutomorphicLift, Character, ConnectingMap};
use crate::error::{Error, Result};
use crate::exact::{binomial, rat, rat_from_big, rat_int, GaussQ, PiScalar};
use crate::matrix_coeffs::{alpha_quadrature_check, alpha_recurrence_check, default_step, random_group_point};
use crate::modular_forms::{builtin_cached, classical_dims, l_value, QExpansion};
use crate::numeric::{Complex, Mpf, Real};
use crate::period_cocycles::{
    act_int, cohomology_dim, hecke_equivariance, manin_check, manin_check_level, ratio_analysis, rel_residual,
    BasePoint, Cocycle, CocycleKind, GeneratorSet, GroupWord, IntMat, Parity, PeriodEngine,
};
use crate::poly_rep::{act, dual_to_poly, pair_v, twist_sign_check, GroupElement, HomPoly};
use crate::principal_series::{iota, pair_i, phi, section, KTypeVector, RealKTypeVector, SignStructure};
use crate::report::{CheckRecord, Report};

pub const SUITES: [&str; 9] = ["ktype", "poly", "alpha", "manin", "hecke", "parity", "connect", "esdim", "all"];

/// Tolerances of the numerical checks; exact checks have none.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub alpha_recurrence: f64,
    pub alpha_quadrature: f64,
    pub cocycle: f64,
    pub manin: f64,
    pub base_point: f64,
    pub hecke: f64,
    pub parity: f64,
    pub rational: f64,
    pub connect: f64,
    pub connect_law: f64,
    pub fit: f64,
    pub holomorphy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            alpha_recurrence: 1e-6,
            alpha_quadrature: 1e-12,
            cocycle: 1e-20,
            manin: 1e-20,
            base_point: 1e-18,
            hecke: 1e-12,
            parity: 1e-15,
            rational: 1e-20,
            connect: 1e-15,
            connect_law: 1e-18,
            fit: 1e-12,
            holomorphy: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "alpha_recurrence" => &mut self.alpha_recurrence,
            "alpha_quadrature" => &mut self.alpha_quadrature,
            "cocycle" => &mut self.cocycle,
            "manin" => &mut self.manin,
            "base_point" => &mut self.base_point,
            "hecke" => &mut self.hecke,
            "parity" => &mut self.parity,
            "rational" => &mut self.rational,
            "connect" => &mut self.connect,
            "connect_law" => &mut self.connect_law,
            "fit" => &mut self.fit,
            "holomorphy" => &mut self.holomorphy,
            _ => return Err(Error::Parse(format!("unknown tolerance `{name}`"))),
        };
        *slot = value;
        Ok(())
    }
}

/// Inputs shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub precision: u32,
    pub seed: u64,
    pub forms: Vec<QExpansion>,
    /// Replaces the bundled generators of every form's level.
    pub generators: Option<GeneratorSet>,
    pub tol: Tolerances,
    /// Random word pairs for the cocycle law.
    pub law_pairs: usize,
}

/// Coefficients used for the bundled forms.
pub const DELTA_TERMS: usize = 800;
pub const LEVEL11_TERMS: usize = 1200;

pub fn default_forms(cache_dir: Option<&std::path::Path>) -> Result<Vec<QExpansion>> {
    Ok(vec![builtin_cached("delta", DELTA_TERMS, cache_dir)?, builtin_cached("level11", LEVEL11_TERMS, cache_dir)?])
}

impl SuiteConfig {
    pub fn new(precision: u32, seed: u64, forms: Vec<QExpansion>) -> Self {
        SuiteConfig { precision, seed, forms, generators: None, tol: Tolerances::default(), law_pairs: 20 }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn generators_for(&self, level: u64) -> Result<GeneratorSet> {
        match &self.generators {
            Some(g) if g.level == level => Ok(g.clone()),
            _ => GeneratorSet::for_level(level),
        }
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::new(name, cfg.seed, cfg.precision);
    let names: Vec<&str> = if name == "all" { SUITES[..8].to_vec() } else { vec![name] };
    for n in names {
        let recs = match n {
            "ktype" => ktype_suite(),
            "poly" => poly_suite(cfg),
            "alpha" => alpha_suite(cfg)?,
            "manin" => manin_suite(cfg)?,
            "hecke" => hecke_suite(cfg)?,
            "parity" => parity_suite(cfg)?,
            "connect" => connect_suite(cfg)?,
            "esdim" => esdim_suite(),
            _ => return Err(Error::Parse(format!("unknown suite `{n}`"))),
        };
        report.extend(recs);
    }
    Ok(report)
}

fn f(k: i64, t: i64) -> KTypeVector {
    KTypeVector::basis(k, t)
}

fn rand_scalar(rng: &mut impl Rng) -> PiScalar {
    PiScalar::monomial(rng.gen_range(-1..=1), GaussQ::ints(rng.gen_range(-6..=6), rng.gen_range(-6..=6)))
}

fn rand_poly(rng: &mut impl Rng, k: i64) -> HomPoly<PiScalar> {
    HomPoly::new(k, BigRational::zero(), (0..k - 1).map(|_| rand_scalar(rng)).collect())
}

fn rand_ktype(rng: &mut impl Rng, k: i64, window: i64, sign: SignStructure) -> KTypeVector {
    let mut v = KTypeVector::zero(k, BigRational::zero(), sign);
    for _ in 0..rng.gen_range(1..6) {
        let t = 2 * rng.gen_range(-window..=window) + k.rem_euclid(2);
        v.add_term(t, &rand_scalar(rng));
    }
    v
}

fn weights() -> Vec<i64> {
    (2..=20).step_by(2).chain((3..=11).step_by(2)).collect()
}

fn t_window(k: i64) -> impl Iterator<Item = i64> {
    (-k - 8..=k + 8).filter(move |t| (t - k) % 2 == 0)
}

/// Exact algebra of `I_μ(k)`, `V_μ(k)` and the maps between them.
pub fn ktype_suite() -> Vec<CheckRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b74);
    let mut out = Vec::new();
    let w = GaussQ::new(rat(3, 5), rat(4, 5));
    let pi = PiScalar::pi_pow(1);
    for k in weights() {
        let m = k - 2;
        let ts: Vec<i64> = t_window(k).collect();
        let n_t = ts.len();

        let rel1 = ts.iter().all(|&t| {
            f(k, t).raise() == f(k, t + 2).scale(&PiScalar::from_ratio(rat(k + t, 2)))
                && f(k, t).lower() == f(k, t - 2).scale(&PiScalar::from_ratio(rat(k - t, 2)))
        });
        out.push(CheckRecord::exact("rel1_raise_lower", k, n_t, rel1));

        // [R, L] f_t = t f_t and (RL + LR)/2 - ∂θ²/4 = k(k-2)/4
        let lie = ts.iter().all(|&t| {
            let v = f(k, t);
            let comm = v.lower().raise().sub(&v.raise().lower());
            let h = v.scale(&PiScalar::from_int(t));
            let cas = v
                .lower()
                .raise()
                .add(&v.raise().lower())
                .scale(&PiScalar::ratio(1, 2))
                .sub(&v.d_theta().d_theta().scale(&PiScalar::ratio(1, 4)));
            comm == h && cas == v.scale(&PiScalar::ratio(k * (k - 2), 4))
        });
        out.push(CheckRecord::exact("lie_bracket_casimir", k, n_t, lie));

        let rel2 = ts.iter().all(|&t| {
            let wt = if t >= 0 { w.pow(t as u32) } else { w.conj().pow((-t) as u32) };
            f(k, t).rotate_exact(&w) == f(k, t).scale(&PiScalar::from_gauss(wt))
        });
        out.push(CheckRecord::exact("rel2_rotation", k, n_t, rel2));

        let mut omega_ok = true;
        let mut swap_ok = true;
        for _ in 0..20 {
            for s in [SignStructure::Plus, SignStructure::Minus] {
                let v = rand_ktype(&mut rng, k, 8, s);
                let wv = v.act_omega().expect("signed");
                omega_ok &= wv.act_omega().expect("signed") == v;
                swap_ok &= v.raise().act_omega().expect("signed") == wv.lower();
            }
        }
        out.push(CheckRecord::exact("omega_squared", k, 40, omega_ok));
        out.push(CheckRecord::exact("omega_R_eq_L_omega", k, 40, swap_ok));

        // 0 → D(k) → I(k) → V(k) → 0
        let kernel = ts.iter().all(|&t| phi(&f(k, t)).is_zero() == (t.abs() >= k));
        let stable = (k..=k + 8).step_by(2).all(|t| {
            [f(k, t), f(k, -t)].iter().all(|v| v.raise().is_discrete() && v.lower().is_discrete())
        });
        let onto = (0..=m).all(|n| phi(&section(&HomPoly::p_n(k, n as usize))) == HomPoly::p_n(k, n as usize));
        out.push(CheckRecord::exact("exact_sequence", k, n_t, kernel && stable && onto));

        let mut sec_ok = true;
        for _ in 0..10 {
            let p = rand_poly(&mut rng, k);
            sec_ok &= phi(&section(&p)) == p;
        }
        out.push(CheckRecord::exact("phi_section_identity", k, 10, sec_ok));

        let closed = (0..=m).all(|n| {
            let c = rat_from_big(binomial(m, n)) / rat_from_big(num_bigint::BigInt::from(2).pow(m as u32));
            phi(&f(k, 2 * n - m)) == HomPoly::p_n(k, n as usize).scale(&(&pi * &PiScalar::from_ratio(c)))
        });
        out.push(CheckRecord::exact("phi_closed_form", k, (m + 1) as usize, closed));

        let pairing = (0..=m).all(|n| {
            let ip = iota(&HomPoly::p_n(k, n as usize));
            t_window(k).all(|t| {
                let got = pair_i(&f(k, t), &ip).expect("weights match");
                let expect = if 2 * n - m + t == 0 { &pi * &PiScalar::i_pow(2 * n - m) } else { PiScalar::zero() };
                got == expect
            })
        });
        out.push(CheckRecord::exact("pairing_iota", k, (m + 1) as usize * n_t, pairing));

        let mut compat = true;
        for _ in 0..10 {
            let (p, q) = (rand_poly(&mut rng, k), rand_poly(&mut rng, k));
            compat &= pair_v(&p, &q).ok() == pair_i(&section(&p), &iota(&q)).ok();
        }
        out.push(CheckRecord::exact("pairing_compatibility", k, 10, compat));

        if k % 2 == 0 {
            let omega = GroupElement::omega();
            let phi_omega = (-k..=k).step_by(2).all(|t| {
                [(SignStructure::Plus, 1), (SignStructure::Minus, -1)].iter().all(|&(s, sign)| {
                    let v = f(k, t).with_sign(s);
                    let lhs = phi(&v.act_omega().expect("signed"));
                    act(&omega, &phi(&v)).map(|r| r.scale(&PiScalar::from_int(sign))).ok() == Some(lhs)
                })
            });
            out.push(CheckRecord::exact("phi_intertwines_omega", k, (k + 1) as usize, phi_omega));
        }

        let mut real_ok = true;
        for _ in 0..10 {
            let sign = if rng.gen_bool(0.5) { SignStructure::Plus } else { SignStructure::Minus };
            let r = RealKTypeVector::from_ktype(&rand_ktype(&mut rng, k, 8, sign));
            let x = RealKTypeVector {
                h: r.h.iter().map(|(t, c)| (*t, c.re_im().0)).collect(),
                g: r.g.iter().map(|(t, c)| (*t, c.re_im().0)).collect(),
                ..r
            }
            .to_ktype();
            let images = [
                x.raise().add(&x.lower()),
                x.raise().sub(&x.lower()).scale(&PiScalar::i()),
                x.d_theta(),
                x.act_omega().expect("signed"),
            ];
            real_ok &= images.iter().all(|y| RealKTypeVector::from_ktype(y).is_real());
        }
        out.push(CheckRecord::exact("real_form_closure", k, 10, real_ok));
    }
    out
}

/// The representation `V_μ(k)`: action, pairing and dual model.
pub fn poly_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = cfg.rng(0x706f);
    let mut out = Vec::new();
    let int_el = |rng: &mut ChaCha8Rng| loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-4..=4)).collect();
        if e[0] * e[3] - e[1] * e[2] != 0 {
            break GroupElement::from_ints(e[0], e[1], e[2], e[3]).expect("invertible");
        }
    };
    let pos_el = |rng: &mut ChaCha8Rng| loop {
        let q: Vec<BigRational> = (0..4).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        if &q[0] * &q[3] - &q[1] * &q[2] > BigRational::zero() {
            break GroupElement::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()).expect("invertible");
        }
    };
    let trials = 24;
    for k in 2..=12i64 {
        let mut hom = true;
        let mut inv = true;
        let mut parity = true;
        let mut repro = true;
        let mut round = true;
        let mut twist = true;
        for _ in 0..trials {
            let p = rand_poly(&mut rng, k);
            let q = rand_poly(&mut rng, k);
            if k % 2 == 0 {
                let (g, h) = (int_el(&mut rng), int_el(&mut rng));
                hom &= act(&g.mul(&h), &p).ok() == act(&g, &act(&h, &p).expect("even weight")).ok();
                twist &= twist_sign_check(&g, &p, &q).map(|v| v.holds).unwrap_or(false);
            }
            let g = pos_el(&mut rng);
            if let (Ok(gp), Ok(gq)) = (act(&g, &p), act(&g, &q)) {
                inv &= pair_v(&gp, &gq).ok() == pair_v(&p, &q).ok();
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            parity &= pair_v(&p, &q).ok() == pair_v(&q, &p).ok().map(|x| x.scale(&rat_int(sign)));
            let (s, t) = (rat(rng.gen_range(-4..=4), 2), rat(rng.gen_range(-4..=4), 3));
            repro &= pair_v(&p, &HomPoly::q_st(k, &s, &t)).ok() == Some(p.eval(&s, &t));
            let dual = p.to_dual();
            let by_values = q.coeffs().iter().zip(&dual).fold(PiScalar::zero(), |acc, (a, b)| &acc + &(a * b));
            round &= HomPoly::from_complex(k, BigRational::zero(), &p.to_complex()) == p
                && dual_to_poly(k, BigRational::zero(), &dual) == p
                && pair_v(&p, &q).ok() == Some(by_values);
        }
        if k % 2 == 0 {
            out.push(CheckRecord::exact("action_homomorphism", k, trials, hom));
            out.push(CheckRecord::exact("twist_sign", k, trials, twist));
        }
        out.push(CheckRecord::exact("pairing_invariance", k, trials, inv));
        out.push(CheckRecord::exact("pairing_parity", k, trials, parity));
        out.push(CheckRecord::exact("pairing_reproduces_evaluation", k, trials, repro));
        out.push(CheckRecord::exact("basis_and_dual_round_trip", k, trials, round));
    }
    out
}

/// Recurrences of the matrix coefficients `α_n` at random group points and
/// the exact-versus-quadrature comparison.
pub fn alpha_suite(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng(0x616c);
    let mut out = Vec::new();
    for k in 2..=8 {
        out.push(alpha_recurrence_check::<Mpf>(k, 100, &mut rng, cfg.precision, cfg.tol.alpha_recurrence)?);
    }
    for k in 2..=8 {
        out.push(alpha_quadrature_check::<Mpf>(k, 2, &mut rng, cfg.precision, cfg.tol.alpha_quadrature)?);
    }
    Ok(out)
}

fn tagged(mut r: CheckRecord, form: &QExpansion) -> CheckRecord {
    r.check = format!("{}@{}", r.check, form.id);
    r
}

/// Worst relative residual of `r(ab) = r(a) + a·r(b)` over random words,
/// every value integrated directly.
pub fn cocycle_law_residual<R: Real>(
    engine: &PeriodEngine<R>,
    gens: &GeneratorSet,
    kind: CocycleKind,
    pairs: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let base = BasePoint::i();
    let scale = engine.cocycle(gens, kind, &base)?.max_abs();
    let mut worst = 0f64;
    for _ in 0..pairs {
        let a = GroupWord::random(rng, 6, gens).eval(gens);
        let b = GroupWord::random(rng, 6, gens).eval(gens);
        let ra = engine.value_of(kind, &a, &base)?;
        let rb = engine.value_of(kind, &b, &base)?;
        let rab = engine.value_of(kind, &a.mul(&b), &base)?;
        let moved = act_int(&a, &rb);
        let s = [rab.max_abs(), ra.max_abs(), moved.max_abs()].into_iter().fold(scale.clone(), R::max_of);
        worst = worst.max(rel_residual(&rab.sub(&ra.add(&moved)), &s));
    }
    Ok(worst)
}

/// Relative residual of `r_i - r_{2i}` as a coboundary.
pub fn base_point_residual<R: Real>(engine: &PeriodEngine<R>, gens: &GeneratorSet) -> Result<f64> {
    let a = engine.cocycle(gens, CocycleKind::Plain, &BasePoint::i())?;
    let b = engine.cocycle(gens, CocycleKind::Plain, &BasePoint::imaginary(2))?;
    let scale = R::max_of(a.max_abs(), b.max_abs()).to_f64();
    let fit = a.sub(&b).solve_coboundary();
    Ok(if scale > 0.0 { fit.residual / scale } else { fit.residual })
}

const ES_KINDS: [CocycleKind; 3] = [CocycleKind::Plain, CocycleKind::Es(Parity::Plus), CocycleKind::Es(Parity::Minus)];

/// Cocycle law, Manin relations and base-point change.
pub fn manin_suite(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng(0x6d61);
    let mut out = Vec::new();
    for form in &cfg.forms {
        let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
        let gens = cfg.generators_for(form.level)?;
        let k = form.weight;
        for kind in ES_KINDS {
            let recs = if form.level == 1 {
                manin_check(&engine, kind, cfg.tol.manin)?
            } else {
                manin_check_level(&engine, &gens, kind, cfg.tol.manin)?
            };
            out.extend(recs.into_iter().map(|r| tagged(r, form)));
        }
        let law = cocycle_law_residual(&engine, &gens, CocycleKind::Plain, cfg.law_pairs, &mut rng)?;
        out.push(tagged(CheckRecord::new("cocycle_law", k, cfg.law_pairs, law, cfg.tol.cocycle), form));
        let bp = base_point_residual(&engine, &gens)?;
        out.push(tagged(CheckRecord::new("base_point_coboundary", k, gens.len(), bp, cfg.tol.base_point), form));
    }
    Ok(out)
}

fn smallest_good_prime(level: u64) -> u64 {
    [2u64, 3, 5, 7, 11, 13].into_iter().find(|p| !level.is_multiple_of(*p)).expect("level has few prime factors")
}

/// `T_p` on the cocycle side against `a_p` read from the expansion.
pub fn hecke_suite(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for form in &cfg.forms {
        let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
        let gens = cfg.generators_for(form.level)?;
        let p = smallest_good_prime(form.level);
        for par in [Parity::Plus, Parity::Minus] {
            let o = hecke_equivariance(&engine, CocycleKind::Es(par), p, &gens, &BasePoint::i())?;
            let (re, im) = o.eigenvalue.to_f64_pair();
            let tag = if par == Parity::Plus { "+" } else { "-" };
            out.push(tagged(
                CheckRecord::new(format!("hecke_T{p}[{tag}]"), form.weight, 1, o.rel_error, cfg.tol.hecke)
                    .with_detail(format!("eigenvalue={re:.15}{im:+.2e}i expected={} fit_residual={:.3e}", o.expected, o.residual)),
                form,
            ));
        }
    }
    Ok(out)
}

/// Parity split, the `ω`-twisted route, and rationality of the level-one
/// period polynomial.
pub fn parity_suite(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for form in &cfg.forms {
        let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
        let gens = cfg.generators_for(form.level)?;
        let k = form.weight;
        let base = BasePoint::i();
        let plus = engine.cocycle(&gens, CocycleKind::Es(Parity::Plus), &base)?;
        let minus = engine.cocycle(&gens, CocycleKind::Es(Parity::Minus), &base)?;
        let scale = Mpf::max_of(plus.max_abs(), minus.max_abs()).to_f64();
        let norm = |x: f64| if scale > 0.0 { x / scale } else { x };
        let (_, pm) = plus.parity_decompose()?;
        let (mp, _) = minus.parity_decompose()?;
        let split = norm(pm.solve_coboundary().residual).max(norm(mp.solve_coboundary().residual));
        out.push(tagged(CheckRecord::new("parity_split", k, gens.len(), split, cfg.tol.parity), form));
        let plain = engine.cocycle(&gens, CocycleKind::Plain, &base)?;
        let twisted = plain.omega_twist()?;
        let mut worst = 0f64;
        for (g, tv) in gens.mats.iter().zip(&twisted.values) {
            let direct = engine.omega_value(g, &base)?;
            worst = worst.max(rel_residual(&direct.sub(tv), &plain.max_abs()));
            worst = worst.max(rel_residual(&direct.add(&engine.cocycle_value(g, &base)?.conj()), &plain.max_abs()));
        }
        out.push(tagged(CheckRecord::new("omega_twist_routes", k, gens.len(), worst, cfg.tol.cocycle), form));
        if form.level == 1 && k >= 4 && !form.is_zero() {
            out.extend(rationality_check(form, &[cfg.precision, cfg.precision + 64], cfg.tol.rational)?);
        }
    }
    Ok(out)
}

/// Ratios of `r(S)` at base `∞` recognized as rationals at each precision
/// and compared with ratios of `Λ(f, j+1)` from the `L`-value oracle.
pub fn rationality_check(form: &QExpansion, precs: &[u32], tol: f64) -> Result<Vec<CheckRecord>> {
    let k = form.weight;
    let m = k - 2;
    let mut out = Vec::new();
    let mut found: Vec<Vec<Option<BigRational>>> = Vec::new();
    for &prec in precs {
        let engine = PeriodEngine::<Mpf>::new(form.clone(), prec)?;
        let r = engine.cocycle_value(&IntMat::S, &BasePoint::Infinity)?;
        let mut rats = Vec::new();
        for odd in [true, false] {
            let a = ratio_analysis(&r, odd, 1_000_000);
            let tag = if odd { "odd" } else { "even" };
            let detail = a
                .ratios
                .iter()
                .map(|(j, _, q)| format!("{j}:{}", q.as_ref().map_or("?".to_string(), |q| q.to_string())))
                .collect::<Vec<_>>()
                .join(" ");
            out.push(
                tagged(CheckRecord::exact(format!("rational_{tag}@{prec}"), k, a.ratios.len(), a.all_rational()), form)
                    .with_detail(format!("normalizer x^{} {detail}", a.normalizer)),
            );
            rats.extend(a.ratios.into_iter().map(|(j, _, q)| (j, q, a.normalizer)));
        }
        found.push(rats.iter().map(|x| x.1.clone()).collect());
        if prec == *precs.iter().max().expect("nonempty") {
            // Λ-oracle: coefficient of x^j is proportional to C(m, j) i^{j+1} Λ(j+1)
            let lam: Vec<Complex<Mpf>> = (0..=m)
                .map(|j| {
                    let l = l_value::<Mpf>(form, j + 1, prec)?.value;
                    let b = Mpf::from_bigint(&binomial(m, j), prec);
                    Ok(Complex::from_real(l * b).mul_i_pow(j + 1))
                })
                .collect::<Result<_>>()?;
            let mut worst = 0f64;
            for (j, q, n) in &rats {
                let oracle = lam[*j].clone() / lam[*n].clone();
                let coeff_ratio = r.coeff(*j).clone() / r.coeff(*n).clone();
                let s = 1.0f64.max(oracle.abs().to_f64());
                worst = worst.max((coeff_ratio - oracle.clone()).abs().to_f64() / s);
                match q {
                    Some(q) => {
                        let qv = Complex::from_ratios(q, &BigRational::zero(), prec);
                        worst = worst.max((qv - oracle).abs().to_f64() / s);
                    }
                    None => worst = f64::INFINITY,
                }
            }
            out.push(tagged(CheckRecord::new("rational_vs_lvalues", k, rats.len(), worst, tol), form));
        }
    }
    let stable = found.windows(2).all(|w| w[0] == w[1]);
    out.push(tagged(CheckRecord::exact("rational_stable_across_precisions", k, precs.len(), stable), form));
    Ok(out)
}

/// The connecting cocycle against `(1 - k)` times the period cocycle,
/// with the conjugation lemma, isotypy, both lift routes and holomorphy.
pub fn connect_suite(cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let mut rng = cfg.rng(0x636f);
    let mut out = Vec::new();
    for form in &cfg.forms {
        let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
        let gens = cfg.generators_for(form.level)?;
        for eps in [Character::Trivial, Character::SignDet] {
            out.extend(connect_form(cfg, &engine, &gens, eps, &mut rng)?.0);
        }
        out.push(holomorphy_record(cfg, form, &mut rng)?);
    }
    Ok(out)
}

/// All connecting checks for one form and character.
pub fn connect_form(
    cfg: &SuiteConfig,
    engine: &PeriodEngine<Mpf>,
    gens: &GeneratorSet,
    eps: Character,
    rng: &mut impl Rng,
) -> Result<(Vec<CheckRecord>, connecting::TheoremOutcome)> {
    let form = &engine.form;
    let k = form.weight;
    let tol = cfg.tol.connect;
    let (mut recs, th) = connecting::connect_suite(engine, eps, gens, rng, tol, cfg.tol.fit)?;
    let map = ConnectingMap::new(engine, eps);
    let c = map.cocycle(gens)?;
    let scale = c.max_abs();
    let wp = engine.work_prec;
    let i = Complex::<Mpf>::i(wp);
    let id = format!("{},eps={eps}", form.id);

    let mut law = 0f64;
    for _ in 0..6 {
        let a = GroupWord::random(rng, 4, gens).eval(gens);
        let b = GroupWord::random(rng, 4, gens).eval(gens);
        let lhs = map.value(&a.mul(&b))?;
        let rhs = map.value(&a)?.add(&act_int(&a, &map.value(&b)?));
        law = law.max(rel_residual(&lhs.sub(&rhs), &scale));
    }
    recs.push(CheckRecord::new(format!("connect_cocycle_law[{id}]"), k, 6, law, cfg.tol.connect_law));

    let tau0 = Complex::new(Mpf::from_f64(0.3, wp), Mpf::from_f64(1.7, wp));
    let mut lift = 0f64;
    for (g, v) in gens.mats.iter().zip(&c.values) {
        lift = lift.max(rel_residual(&map.lift_route(g, &i, &tau0)?.sub(v), &scale));
    }
    recs.push(CheckRecord::new(format!("lift_route[{id}]"), k, gens.len(), lift, tol));

    let two_i = Complex::new(Mpf::zero(wp), Mpf::from_i64(2, wp));
    let shifted = gens.mats.iter().map(|g| map.lift_route(g, &two_i, &i)).collect::<Result<Vec<_>>>()?;
    let diff = Cocycle { values: shifted, ..c.clone() }.sub(&c);
    let fit = diff.solve_coboundary();
    let s = scale.to_f64();
    let shift = if s > 0.0 { fit.residual / s } else { fit.residual };
    recs.push(CheckRecord::new(format!("normalization_shift[{id}]"), k, gens.len(), shift, tol));

    if form.level == 1 {
        let par = if eps.eps_c() > 0 { Parity::Plus } else { Parity::Minus };
        let factor = Complex::new(Mpf::zero(engine.prec), Mpf::pi(engine.prec).mul_i64(2)).inv().mul_i64(1 - k);
        let mut cross = 0f64;
        for g in [IntMat::S, IntMat::T.mul(&IntMat::S)] {
            let es = engine.es_value(par, &g, &BasePoint::i())?.scale(&factor);
            let v = map.value(&g)?;
            cross = cross.max(rel_residual(&v.sub(&es), &Mpf::max_of(v.max_abs(), es.max_abs())));
        }
        recs.push(CheckRecord::new(format!("matches_period_parity[{id}]"), k, 2, cross, cfg.tol.connect_law));
    }
    Ok((recs, th))
}

fn holomorphy_record(cfg: &SuiteConfig, form: &QExpansion, rng: &mut impl Rng) -> Result<CheckRecord> {
    let lift = AutomorphicLift::<Mpf>::new(form.clone(), cfg.precision);
    let h = default_step::<Mpf>(cfg.precision);
    let mut worst = 0f64;
    let trials = 10;
    for _ in 0..trials {
        let g = random_group_point::<Mpf>(rng, cfg.precision);
        for conj in [false, true] {
            worst = worst.max(lift.holomorphy_residual(&g, conj, &h)?);
        }
    }
    Ok(tagged(CheckRecord::new("lift_holomorphy", form.weight, trials, worst, cfg.tol.holomorphy), form))
}

/// `dim H^1 = dim M_k + dim S_k` for even `k ≤ 24`.
pub fn esdim_suite() -> Vec<CheckRecord> {
    (2..=24)
        .step_by(2)
        .map(|k| {
            let (mk, sk) = classical_dims(k);
            let h = cohomology_dim(k) as i64;
            CheckRecord::exact("es_dimension", k, 1, h == mk + sk)
                .with_detail(format!("dim_H1={h} dim_M={mk} dim_S={sk}"))
        })
        .collect()
}
