use eslab_core::exact::{rat, rat_int};
use eslab_core::modular_forms::{classical_dims, delta_qexp, eval, l_value, level11_qexp, QExpansion};
use eslab_core::numeric::{Complex, Mpf, Real};
use eslab_core::period_cocycles::{
    act_int, cohomology_dim, hecke_equivariance, manin_check, omega_act, ratio_analysis, rel_residual,
    BasePoint, Cocycle, CocycleKind, Endpoint, GeneratorSet, GroupWord, IntMat, Parity, PeriodEngine, Reducer,
};
use eslab_core::poly_rep::{dual_to_poly, HomPoly};
use eslab_core::Error;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PREC: u32 = 128;

fn delta_engine(prec: u32) -> PeriodEngine<Mpf> {
    PeriodEngine::new(delta_qexp(800), prec).unwrap()
}

fn level11_engine(prec: u32) -> PeriodEngine<Mpf> {
    PeriodEngine::new(level11_qexp(1200), prec).unwrap()
}

fn cpx(re: f64, im: f64) -> Complex<Mpf> {
    Complex::new(Mpf::from_f64(re, PREC), Mpf::from_f64(im, PREC))
}

fn monomials(k: i64, prec: u32) -> Vec<HomPoly<Complex<Mpf>>> {
    let m = (k - 2) as usize;
    (0..=m)
        .map(|a| {
            let mut c = vec![Complex::zero(prec); m + 1];
            c[a] = Complex::one(prec);
            HomPoly::new(k, BigRational::zero(), c)
        })
        .collect()
}

#[test]
fn generator_data_lies_in_gamma0_11_and_is_omega_closed() {
    let g = GeneratorSet::gamma0_11();
    assert_eq!(g.len(), 9);
    for h in &g.mats {
        assert!(h.in_gamma0(11));
        assert!(g.find(&h.omega_conj()).is_some());
    }
    let l1 = GeneratorSet::level1();
    for h in &l1.mats {
        assert!(l1.find(&h.omega_conj()).is_some());
    }
    let bad = serde_json::json!([[[1, 0], [2, 1]]]);
    assert!(matches!(GeneratorSet::from_json(11, &bad), Err(Error::NotInGroup(_))));
}

#[test]
fn words_parse_and_evaluate() {
    let gens = GeneratorSet::level1();
    let w = GroupWord::parse("S T^-1 S", &gens).unwrap();
    assert_eq!(w.eval(&gens), IntMat::S.mul(&IntMat::T.adj()).mul(&IntMat::S));
    assert_eq!(GroupWord::parse("T^3", &gens).unwrap().eval(&gens), IntMat::new(1, 3, 0, 1));
    assert_eq!(GroupWord::identity().eval(&gens), IntMat::IDENTITY);
    assert!(GroupWord::parse("Q", &gens).is_err());
    assert_eq!(w.display(&gens), "S T^-1 S");
    assert_eq!(IntMat::parse("1, 2, 3, 7").unwrap(), IntMat::new(1, 2, 3, 7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sl2_reduction_lands_in_fundamental_domain(x in -5.0f64..5.0, ly in -12.0f64..1.0) {
        let z = cpx(x, 10f64.powf(ly));
        let (g, w) = Reducer::sl2_reduce(&z);
        prop_assert_eq!(g.det(), 1);
        let (wx, wy) = w.to_f64_pair();
        prop_assert!(wx.abs() <= 0.5 + 1e-9 && wx * wx + wy * wy >= 1.0 - 1e-9);
        let gz = g.act(&z);
        prop_assert!((gz - w).abs().to_f64() < 1e-20);
    }

    #[test]
    fn level11_folds_reach_the_floor(x in -2.0f64..2.0, ly in -8.0f64..0.5) {
        let red = Reducer { level: 11, w_sign: Some(-1) };
        let z = cpx(x, 10f64.powf(ly));
        let fold = red.reduce(&z);
        let det = fold.mat.det();
        prop_assert!(det == 1 || det == 11);
        if det == 1 {
            prop_assert!(fold.mat.in_gamma0(11));
        } else {
            // W_11 Γ0(11): [[11c', *], [11a, 11b]]
            prop_assert!(fold.mat.a % 11 == 0 && fold.mat.c % 11 == 0 && fold.mat.d % 11 == 0);
        }
        prop_assert!(fold.mat.act(&z).im.to_f64() >= 0.07);
    }

    #[test]
    fn word_extension_obeys_the_cocycle_law(
        vals in proptest::collection::vec(proptest::collection::vec(-5i64..5, 5), 2),
        w1 in proptest::collection::vec((0usize..2, prop_oneof![Just(1i32), Just(-1i32)]), 0..6),
        w2 in proptest::collection::vec((0usize..2, prop_oneof![Just(1i32), Just(-1i32)]), 0..6),
    ) {
        // any generator values define a cocycle on the free group
        let gens = GeneratorSet::level1();
        let values = vals
            .iter()
            .map(|v| HomPoly::new(6, BigRational::zero(), v.iter().map(|&x| Complex::from_i64(x, 0, 64)).collect()))
            .collect();
        let c = Cocycle::<Mpf> { k: 6, base: BasePoint::Infinity, gens: gens.clone(), values, prec: 64 };
        let (a, b) = (GroupWord(w1), GroupWord(w2));
        let lhs = c.eval_word(&a.concat(&b));
        let rhs = c.eval_word(&a).add(&act_int(&a.eval(&gens), &c.eval_word(&b)));
        prop_assert!(lhs.sub(&rhs).max_abs().to_f64() == 0.0);
    }
}

#[test]
fn period_integral_trivial_cases() {
    let eng = delta_engine(PREC);
    let p = &monomials(12, PREC)[3];
    let z = Endpoint::At(cpx(0.1, 0.7));
    assert!(eng.period_integral(p, &z, &z).unwrap().value.is_zero());
    assert!(eng.period_integral(p, &Endpoint::Infinity, &Endpoint::Infinity).unwrap().value.is_zero());
    let id = eng.cocycle_value(&IntMat::IDENTITY, &BasePoint::i()).unwrap();
    assert!(id.is_zero());
    let t = eng.es_value(Parity::Minus, &IntMat::T, &BasePoint::Infinity).unwrap();
    assert!(t.is_zero());
}

#[test]
fn period_integral_reversal_and_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for eng in [delta_engine(PREC), level11_engine(PREC)] {
        let k = eng.weight();
        for _ in 0..5 {
            let p = HomPoly::new(
                k,
                BigRational::zero(),
                (0..k - 1).map(|_| Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), PREC)).collect(),
            );
            let z0 = Endpoint::At(cpx(rng.gen_range(-1.0..1.0), rng.gen_range(0.01..1.0)));
            let z1 = Endpoint::At(cpx(rng.gen_range(-1.0..1.0), rng.gen_range(0.01..1.0)));
            let z2 = Endpoint::At(cpx(rng.gen_range(-1.0..1.0), rng.gen_range(0.01..1.0)));
            let a = eng.period_integral(&p, &z0, &z2).unwrap();
            let b = eng.period_integral(&p, &z2, &z0).unwrap();
            let scale = a.value.abs().to_f64().max(1e-300);
            assert!((a.value.clone() + b.value.clone()).abs().to_f64() / scale <= 1e-30);
            let c1 = eng.period_integral(&p, &z0, &z1).unwrap();
            let c2 = eng.period_integral(&p, &z1, &z2).unwrap();
            let diff = (a.value.clone() - c1.value.clone() - c2.value.clone()).abs().to_f64();
            let mags = scale.max(c1.value.abs().to_f64()).max(c2.value.abs().to_f64());
            let allowed = (a.bound.clone() + c1.bound.clone() + c2.bound.clone()).to_f64() + mags * 2f64.powi(-120);
            assert!(diff <= allowed, "{diff} > {allowed}");
            // through the cusp
            let d1 = eng.period_integral(&p, &z0, &Endpoint::Infinity).unwrap();
            let d2 = eng.period_integral(&p, &Endpoint::Infinity, &z2).unwrap();
            let diff = (a.value.clone() - d1.value - d2.value).abs().to_f64();
            assert!(diff <= scale * 1e-30 + 1e-35, "{diff}");
        }
    }
}

/// Composite Gauss–Legendre (5 nodes) of `P(1,-τ) f(τ)` along a segment.
fn quadrature_oracle(f: &QExpansion, p: &[f64], z0: (f64, f64), z1: (f64, f64), pieces: usize) -> (f64, f64) {
    let nodes = [
        (0.0, 128.0 / 225.0),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let (dx, dy) = (z1.0 - z0.0, z1.1 - z0.1);
    let m = p.len() - 1;
    let mut acc = Complex::new(0.0f64, 0.0);
    for i in 0..pieces {
        for &(x, w) in &nodes {
            let t = (i as f64 + (x + 1.0) / 2.0) / pieces as f64;
            let tau = Complex::new(z0.0 + t * dx, z0.1 + t * dy);
            let fv = eval(f, &tau, 53).unwrap().value;
            let mut poly = Complex::new(0.0, 0.0);
            for (j, c) in p.iter().enumerate() {
                poly = poly + (-tau.clone()).powi((m - j) as i32).scale(c);
            }
            acc = acc + (poly * fv).scale(&(w / 2.0 / pieces as f64));
        }
    }
    let r = acc * Complex::new(dx, dy);
    (r.re, r.im)
}

#[test]
fn folded_integral_matches_direct_quadrature() {
    for (eng, f) in [(delta_engine(PREC), delta_qexp(800)), (level11_engine(PREC), level11_qexp(1200))] {
        let k = eng.weight() as usize;
        let coeffs: Vec<f64> = (0..k - 1).map(|j| 1.0 / (j as f64 + 1.0)).collect();
        let p = HomPoly::new(k as i64, BigRational::zero(), coeffs.iter().map(|&c| Complex::from_f64(c, 0.0, PREC)).collect());
        let (z0, z1) = ((-0.3, 0.9), (0.4, 0.25));
        let v = eng.period_integral(&p, &Endpoint::At(cpx(z0.0, z0.1)), &Endpoint::At(cpx(z1.0, z1.1))).unwrap();
        let (re, im) = quadrature_oracle(&f, &coeffs, z0, z1, 400);
        let (vr, vi) = v.value.to_f64_pair();
        let scale = vr.hypot(vi);
        assert!(((vr - re).hypot(vi - im)) / scale < 1e-10, "{vr} {vi} vs {re} {im}");
    }
}

#[test]
fn delta_period_polynomial_matches_l_values() {
    let f = delta_qexp(800);
    let eng = delta_engine(PREC);
    let r = eng.cocycle_value(&IntMat::S, &BasePoint::Infinity).unwrap();
    // J_j(∞ → 0) = -i^{j+1} Λ(j+1), coefficient of x^j is C(10,j)(-1)^{10-j}(-1)^j J_j
    let binom = [1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1];
    for j in 0..=10usize {
        let lam = l_value::<Mpf>(&f, j as i64 + 1, PREC).unwrap().value;
        let jj = Complex::from_real(lam).mul_i_pow(j as i64 + 1).mul_i64(-1);
        let expect = jj.mul_i64(binom[j]);
        let rel = ((r.coeff(j).clone() - expect.clone()).abs() / expect.abs()).to_f64();
        assert!(rel < 1e-25, "j={j} rel={rel}");
    }
}

#[test]
fn manin_rationality_at_two_precisions() {
    for prec in [128, 192] {
        let eng = delta_engine(prec);
        let r = eng.cocycle_value(&IntMat::S, &BasePoint::Infinity).unwrap();
        let odd = ratio_analysis(&r, true, 1_000_000);
        assert_eq!(odd.normalizer, 9);
        assert!(odd.all_rational(), "{odd:?}");
        // 4X^9 - 25X^7 + 42X^5 - 25X^3 + 4X
        let got: Vec<_> = odd.ratios.iter().map(|r| r.2.clone().unwrap()).collect();
        let expect: Vec<_> = [4, -25, 42, -25, 4].iter().map(|&c| rat(c, 4)).collect();
        assert_eq!(got, expect, "{odd:?}");
        let even = ratio_analysis(&r, false, 1_000_000);
        assert!(even.all_rational(), "{even:?}");
        let e: Vec<_> = even.ratios.iter().map(|r| r.2.clone().unwrap()).collect();
        // (36/691)(X^10 - 1) + X^2 - 3X^4 + 3X^6 - X^8, normalised at X^10
        let expect: Vec<_> = [-36, 691, -3 * 691, 3 * 691, -691, 36].iter().map(|&c| rat(c, 36)).collect();
        assert_eq!(e, expect);
    }
}

#[test]
fn omega_route_agrees_with_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (eng, gens) in [(delta_engine(PREC), GeneratorSet::level1()), (level11_engine(PREC), GeneratorSet::gamma0_11())] {
        let scale = eng.cocycle(&gens, CocycleKind::Plain, &BasePoint::i()).unwrap().max_abs();
        for base in [BasePoint::i(), BasePoint::Infinity] {
            for _ in 0..4 {
                let g = GroupWord::random(&mut rng, 4, &gens).eval(&gens);
                let r = eng.cocycle_value(&g, &base).unwrap();
                let w = eng.omega_value(&g, &base).unwrap();
                let res = rel_residual(&w.add(&r.conj()), &Real::max_of(scale.clone(), r.max_abs()));
                assert!(res < 1e-25, "{g} {res}");
            }
        }
    }
}

fn cocycle_law_residual(eng: &PeriodEngine<Mpf>, gens: &GeneratorSet, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = BasePoint::i();
    let mut worst = 0f64;
    for _ in 0..pairs {
        let w1 = GroupWord::random(&mut rng, 6, gens).eval(gens);
        let w2 = GroupWord::random(&mut rng, 6, gens).eval(gens);
        let a = eng.cocycle_value(&w1, &base).unwrap();
        let b = eng.cocycle_value(&w2, &base).unwrap();
        let ab = eng.cocycle_value(&w1.mul(&w2), &base).unwrap();
        let moved = act_int(&w1, &b);
        let rhs = a.add(&moved);
        let scale = [ab.max_abs(), a.max_abs(), moved.max_abs()].into_iter().fold(Mpf::zero(PREC), Real::max_of);
        worst = worst.max(rel_residual(&ab.sub(&rhs), &scale));
    }
    worst
}

#[test]
fn cocycle_law_on_random_words() {
    let d = cocycle_law_residual(&delta_engine(PREC), &GeneratorSet::level1(), 20, 7);
    assert!(d <= 1e-20, "{d}");
    let e = cocycle_law_residual(&level11_engine(PREC), &GeneratorSet::gamma0_11(), 20, 8);
    assert!(e <= 1e-20, "{e}");
}

#[test]
fn direct_values_match_word_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let eng = level11_engine(PREC);
    let gens = GeneratorSet::gamma0_11();
    let c = eng.cocycle(&gens, CocycleKind::Es(Parity::Plus), &BasePoint::i()).unwrap();
    for _ in 0..5 {
        let w = GroupWord::random(&mut rng, 5, &gens);
        let direct = eng.es_value(Parity::Plus, &w.eval(&gens), &BasePoint::i()).unwrap();
        let ext = c.eval_word(&w);
        assert!(rel_residual(&direct.sub(&ext), &direct.max_abs()) < 1e-25);
    }
}

#[test]
fn manin_relations_for_delta() {
    let eng = delta_engine(PREC);
    for kind in [CocycleKind::Es(Parity::Minus), CocycleKind::Es(Parity::Plus), CocycleKind::Plain] {
        for rec in manin_check(&eng, kind, 1e-20).unwrap() {
            assert!(rec.pass, "{rec:?}");
        }
    }
    let zero = PeriodEngine::<Mpf>::new(QExpansion::from_ints("zero", 12, 1, &[0; 50]), PREC).unwrap();
    for rec in manin_check(&zero, CocycleKind::Es(Parity::Minus), 0.0).unwrap() {
        assert_eq!(rec.max_residual, 0.0);
    }
}

#[test]
fn hecke_eigenvalues_on_the_cocycle_side() {
    let d = delta_engine(PREC);
    let out = hecke_equivariance(&d, CocycleKind::Es(Parity::Minus), 2, &GeneratorSet::level1(), &BasePoint::i()).unwrap();
    assert_eq!(out.expected, rat_int(-24));
    assert!(out.rel_error < 1e-12 && out.residual < 1e-15, "{out:?}");
    let e = level11_engine(PREC);
    for kind in [CocycleKind::Es(Parity::Plus), CocycleKind::Es(Parity::Minus)] {
        let out = hecke_equivariance(&e, kind, 2, &GeneratorSet::gamma0_11(), &BasePoint::i()).unwrap();
        assert_eq!(out.expected, rat_int(-2));
        assert!(out.rel_error < 1e-12 && out.residual < 1e-15, "{out:?}");
    }
    let out = hecke_equivariance(&e, CocycleKind::Plain, 3, &GeneratorSet::gamma0_11(), &BasePoint::i()).unwrap();
    assert_eq!(out.expected, rat_int(-1));
    assert!(out.rel_error < 1e-12, "{out:?}");
    let zero = PeriodEngine::<Mpf>::new(QExpansion::from_ints("zero", 12, 1, &[0; 50]), PREC).unwrap();
    let out = hecke_equivariance(&zero, CocycleKind::Plain, 2, &GeneratorSet::level1(), &BasePoint::i()).unwrap();
    assert_eq!(out.residual, 0.0);
}

#[test]
fn parity_decomposition() {
    for (eng, gens) in [(delta_engine(PREC), GeneratorSet::level1()), (level11_engine(PREC), GeneratorSet::gamma0_11())] {
        let plus = eng.cocycle(&gens, CocycleKind::Es(Parity::Plus), &BasePoint::i()).unwrap();
        let (p, m) = plus.parity_decompose().unwrap();
        assert_eq!(p.add(&m).values, plus.values);
        let fit = m.solve_coboundary();
        assert!(fit.residual / plus.max_abs().to_f64() < 1e-15);
        let minus = eng.cocycle(&gens, CocycleKind::Es(Parity::Minus), &BasePoint::i()).unwrap();
        let (p2, _) = minus.parity_decompose().unwrap();
        assert!(p2.max_abs().to_f64() / minus.max_abs().to_f64() < 1e-25);
        // idempotence
        let (pp, pm) = p.parity_decompose().unwrap();
        assert!(pm.max_abs().to_f64() <= 1e-25 * p.max_abs().to_f64());
        assert!(pp.sub(&p).max_abs().to_f64() <= 1e-25 * p.max_abs().to_f64());
    }
    let z = Cocycle::<Mpf>::zero(12, &GeneratorSet::level1(), BasePoint::i(), PREC);
    let (a, b) = z.parity_decompose().unwrap();
    assert!(a.is_zero() && b.is_zero());
    let lone = GeneratorSet { level: 11, names: vec!["g".into()], mats: vec![IntMat::new(-5, -1, 11, 2)] };
    let c = Cocycle::<Mpf>::zero(2, &lone, BasePoint::i(), PREC);
    assert_eq!(c.parity_decompose().unwrap_err(), Error::NotOmegaStable);
}

#[test]
fn base_point_change_is_a_coboundary() {
    for (eng, gens) in [(delta_engine(PREC), GeneratorSet::level1()), (level11_engine(PREC), GeneratorSet::gamma0_11())] {
        let a = eng.cocycle(&gens, CocycleKind::Plain, &BasePoint::i()).unwrap();
        let b = eng.cocycle(&gens, CocycleKind::Plain, &BasePoint::imaginary(2)).unwrap();
        let scale = Real::max_of(a.max_abs(), b.max_abs()).to_f64();
        let fit = a.sub(&b).solve_coboundary();
        assert!(fit.residual / scale <= 1e-18, "{}", fit.residual);
        // the solved m is the functional ∫_{2i}^{i} modulo invariants
        let i = Endpoint::At(cpx(0.0, 1.0));
        let two_i = Endpoint::At(cpx(0.0, 2.0));
        let k = eng.weight();
        let direct: Vec<_> = monomials(k, PREC)
            .iter()
            .map(|p| eng.period_integral(p, &two_i, &i).unwrap().value)
            .collect();
        if k > 2 {
            let pf = dual_to_poly(k, BigRational::zero(), &direct);
            assert!(rel_residual(&pf.sub(&fit.m), &pf.max_abs()) < 1e-18);
        }
    }
}

#[test]
fn omega_twist_of_es_cocycle() {
    let eng = delta_engine(PREC);
    let gens = GeneratorSet::level1();
    let c = eng.cocycle(&gens, CocycleKind::Plain, &BasePoint::i()).unwrap();
    let tw = c.omega_twist().unwrap();
    for (g, v) in gens.mats.iter().zip(&tw.values) {
        let direct = omega_act(&eng.cocycle_value(&g.omega_conj(), &BasePoint::i()).unwrap());
        assert!(rel_residual(&direct.sub(v), &c.max_abs()) < 1e-25);
    }
}

#[test]
fn eichler_shimura_dimensions() {
    for k in (2..=24).step_by(2) {
        let (mk, sk) = classical_dims(k);
        assert_eq!(cohomology_dim(k) as i64, mk + sk, "k={k}");
    }
    assert_eq!(cohomology_dim(2), 0);
    assert_eq!(cohomology_dim(10), 1);
    assert_eq!(cohomology_dim(12), 3);
}

#[test]
fn low_points_need_enough_terms() {
    let eng = PeriodEngine::<Mpf>::new(level11_qexp(40), PREC).unwrap();
    let r = eng.cocycle_value(&IntMat::new(-5, -1, 11, 2), &BasePoint::i());
    assert!(matches!(r, Err(Error::AccuracyUnreachable { .. })));
}

#[test]
fn level11_cusp_relations() {
    let gens = GeneratorSet::gamma0_11();
    let w = eslab_core::period_cocycles::cusp_zero_word(&gens).unwrap();
    let q = w.eval(&gens);
    assert_eq!((q.a.abs(), q.b, q.c.abs(), q.d.abs()), (1, 0, 11, 1));
    let eng = level11_engine(PREC);
    for kind in [CocycleKind::Plain, CocycleKind::Es(Parity::Plus), CocycleKind::Es(Parity::Minus)] {
        let recs = eslab_core::period_cocycles::manin_check_level(&eng, &gens, kind, 1e-20).unwrap();
        assert_eq!(recs.len(), 2);
        for r in recs {
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn certified_bound_covers_the_error() {
    // 96-bit values against 256-bit references
    for (lo, hi, gammas) in [
        (delta_engine(96), delta_engine(256), vec![IntMat::S, IntMat::new(2, 1, 1, 1)]),
        (level11_engine(96), level11_engine(256), vec![IntMat::new(7, -2, 11, -3), IntMat::new(-5, -1, 11, 2)]),
    ] {
        for base in [BasePoint::i(), BasePoint::Infinity] {
            for g in &gammas {
                let c = lo.cocycle_certified(g, &base).unwrap();
                let r = hi.cocycle_value(g, &base).unwrap();
                let err = c.value.coeffs().iter().zip(r.coeffs()).map(|(a, b)| (a.with_prec(256) - b.clone()).abs().to_f64()).fold(0.0, f64::max);
                let bound = c.bound.to_f64();
                assert!(err <= bound, "{g} {base}: err {err:e} > bound {bound:e}");
                assert!(bound < 1e-20, "{g} {base}: bound {bound:e}");
                assert_eq!(c.value, lo.cocycle_value(g, &base).unwrap());
            }
        }
    }
}
