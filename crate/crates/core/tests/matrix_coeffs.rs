use eslab_core::exact::{rat, rat_int, GaussQ, PiScalar};
use eslab_core::matrix_coeffs::{
    alpha_exact, alpha_quadrature, alpha_quadrature_check, alpha_recurrence_check, default_step, iwasawa,
    ktype_function, maass_apply, random_poly, GroupPoint, Maass,
};
use eslab_core::numeric::{Complex, Mpf, Real};
use eslab_core::poly_rep::{GroupElement, HomPoly};
use eslab_core::Error;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn iwasawa_examples() {
    let id = iwasawa(&[1.0f64, 0.0, 0.0, 1.0]).unwrap();
    assert!(close(id.u, 1.0, 1e-15) && close(id.x, 0.0, 1e-15) && close(id.y, 1.0, 1e-15) && close(id.theta, 0.0, 1e-15));
    let t = std::f64::consts::FRAC_PI_3;
    let (s, c) = t.sin_cos();
    let k = iwasawa(&[c, s, -s, c]).unwrap();
    assert!(close(k.theta, t, 1e-15) && close(k.y, 1.0, 1e-15) && close(k.x, 0.0, 1e-15));
    assert_eq!(iwasawa(&[0.0f64, 1.0, 1.0, 0.0]).unwrap_err(), Error::NonPositiveDet);
}

#[test]
fn iwasawa_reconstruction_at_high_precision() {
    let prec = 128;
    let m = [2i64, 1, 0, 1].map(|v| Mpf::from_i64(v, prec));
    let g = iwasawa(&m).unwrap();
    let back = GroupPoint::from_coords(g.u.clone(), g.x.clone(), g.y.clone(), g.theta.clone());
    for (a, b) in back.matrix.iter().zip(&m) {
        assert!((a.clone() - b.clone()).abs() <= Mpf::epsilon(prec).mul_i64(8 * 4));
    }
    assert!(close(g.u.to_f64(), 2f64.sqrt(), 1e-15));
}

#[test]
fn alpha_examples() {
    let p3 = HomPoly::p_n(12, 3);
    let a = alpha_exact(&GroupElement::identity(), &p3).unwrap();
    for (n, c) in a.iter().enumerate() {
        assert_eq!(*c, if n == 3 { PiScalar::one() } else { PiScalar::zero() });
    }
    // κ(θ)^{-1} P_n = e^{-i(2n-k+2)θ} P_n, with e^{iθ} = (3+4i)/5
    let k = 6;
    let g = GroupElement::kappa(rat(3, 5), rat(4, 5)).unwrap();
    let w = GaussQ::new(rat(3, 5), rat(4, 5));
    for n in 0..=4usize {
        let e = 2 * n as i64 - k + 2;
        let mult = if e >= 0 { w.conj().pow(e as u32) } else { w.pow((-e) as u32) };
        let a = alpha_exact(&g, &HomPoly::p_n(k, n)).unwrap();
        assert_eq!(a[n], PiScalar::from_gauss(mult));
    }
    let neg = GroupElement::from_ints(1, 0, 0, -1).unwrap();
    assert_eq!(alpha_exact(&neg, &p3).unwrap_err(), Error::NonPositiveDet);
}

#[test]
fn alpha_matches_quadrature_formula() {
    let prec = 128;
    let g = GroupElement::new(rat(3, 2), rat(-1, 3), rat(1, 4), rat(2, 1)).unwrap();
    let p = HomPoly::from_ints(6, &[1, -2, 0, 3, 1]);
    let exact = alpha_exact(&g, &p).unwrap();
    let m = g.entries().map(|q| Mpf::from_ratio(q, prec));
    for (n, a) in exact.iter().enumerate() {
        let q: Complex<Mpf> = alpha_quadrature(&m, &p, n, 1e-30, prec).unwrap();
        let e: Complex<Mpf> = a.to_numeric(prec);
        assert!((q - e.clone()).abs().to_f64() <= 1e-15 * e.abs().to_f64().max(1.0), "n = {n}");
    }
}

#[test]
fn alpha_is_a_matrix_cocycle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = 6;
    let m = (k - 2) as usize;
    let mat = |g: &GroupElement| -> Vec<Vec<PiScalar>> {
        (0..=m).map(|np| alpha_exact(g, &HomPoly::p_n(k, np)).unwrap()).collect()
    };
    use rand::Rng;
    for _ in 0..100 {
        let mut rand_g = || loop {
            let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-5..=5)).collect();
            if let Ok(g) = GroupElement::from_ints(e[0], e[1], e[2], e[3]) {
                if *g.det() > rat_int(0) {
                    return g;
                }
            }
        };
        let (g, h) = (rand_g(), rand_g());
        // column n' of A(g) is α(g) for P_{n'}; A(gh) = A(h) A(g)
        let (ag, ah, agh) = (mat(&g), mat(&h), mat(&g.mul(&h)));
        for np in 0..=m {
            for n in 0..=m {
                let mut s = PiScalar::zero();
                for j in 0..=m {
                    s = &s + &(&ah[j][n] * &ag[np][j]);
                }
                assert_eq!(s, agh[np][n]);
            }
        }
    }
}

#[test]
fn maass_on_ktype_functions() {
    let prec = 128;
    let g = GroupPoint::from_coords(
        Mpf::from_f64(1.3, prec),
        Mpf::from_f64(0.4, prec),
        Mpf::from_f64(0.8, prec),
        Mpf::from_f64(2.1, prec),
    );
    let h = default_step::<Mpf>(prec);
    let mu = BigRational::zero();
    for k in [2i64, 3, 4, 7, 10] {
        for t in (-10..=10).filter(|t| (t - k) % 2 == 0) {
            let f = |p: &GroupPoint<Mpf>| ktype_function(p, k, t, &mu);
            let r = maass_apply(f, Maass::Raise, &g, &h).unwrap();
            let l = maass_apply(f, Maass::Lower, &g, &h).unwrap();
            let er = ktype_function(&g, k, t + 2, &mu).scale(&Mpf::from_ratio(&rat(k + t, 2), prec));
            let el = ktype_function(&g, k, t - 2, &mu).scale(&Mpf::from_ratio(&rat(k - t, 2), prec));
            assert!((r.value - er).abs().to_f64() < 1e-8, "R k={k} t={t}");
            assert!((l.value - el).abs().to_f64() < 1e-8, "L k={k} t={t}");
        }
    }
    // k = 4, t = 2 at machine precision: R f_2 = 3 f_4
    let g64 = GroupPoint::from_coords(1.1f64, -0.3, 1.4, 0.7);
    let r = maass_apply(|p| ktype_function(p, 4, 2, &mu), Maass::Raise, &g64, &default_step::<f64>(53)).unwrap();
    let e = ktype_function(&g64, 4, 4, &mu).scale(&3.0);
    assert!((r.value - e).abs() < 1e-8);
    let c = maass_apply(|_| Complex::from_f64(2.5, -1.0, 53), Maass::Lower, &g64, &1e-4).unwrap();
    assert!(c.value.abs() < 1e-12);
}

#[test]
fn coarse_step_is_rejected() {
    let g = GroupPoint::from_coords(1.0f64, 0.0, 0.5, 0.0);
    let mu = BigRational::zero();
    // leaves the upper half plane
    assert!(matches!(maass_apply(|p| ktype_function(p, 4, 2, &mu), Maass::Raise, &g, &0.6), Err(Error::StepTooLarge(_))));
    // too coarse for a fast oscillation: differences stop shrinking
    assert!(matches!(
        maass_apply(|p| ktype_function(p, 4, 200, &mu), Maass::Raise, &g, &0.3),
        Err(Error::StepTooLarge(_))
    ));
}

#[test]
fn recurrences_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 2..=6 {
        let rec = alpha_recurrence_check::<Mpf>(k, 10, &mut rng, 128, 1e-6).unwrap();
        assert!(rec.pass, "{rec:?}");
    }
}

#[test]
fn lower_edge_vanishes_near_identity() {
    let prec = 128;
    let k = 6;
    let p = HomPoly::p_n(k, 0).to_numeric::<Mpf>(prec);
    let g = GroupPoint::from_coords(
        Mpf::one(prec),
        Mpf::from_f64(1e-3, prec),
        Mpf::from_f64(1.001, prec),
        Mpf::from_f64(2e-3, prec),
    );
    let h = default_step::<Mpf>(prec);
    let r = maass_apply(
        |pt| eslab_core::matrix_coeffs::alpha_numeric(&pt.matrix, &p).unwrap()[0].clone(),
        Maass::Raise,
        &g,
        &h,
    )
    .unwrap();
    assert!(r.value.abs().to_f64() < 1e-20);
}

#[test]
fn quadrature_check_record() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rec = alpha_quadrature_check::<Mpf>(4, 2, &mut rng, 128, 1e-12).unwrap();
    assert!(rec.pass, "{rec:?}");
    let _ = random_poly(&mut rng, 4);
}
