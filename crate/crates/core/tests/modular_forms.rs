use eslab_core::exact::{rat, rat_int};
use eslab_core::modular_forms::{
    atkin_lehner_sign, builtin_cached, classical_dims, delta_qexp, eta_product, eval, l_value, level11_qexp,
    QExpansion,
};
use eslab_core::numeric::{Complex, Mpf, Real};
use eslab_core::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `∏_{n=1}^{len} (1 - q^{dn})` by schoolbook multiplication, truncated at `q^len`.
fn naive_euler(d: usize, len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len + 1];
    p[0] = BigInt::one();
    let mut n = 1;
    while d * n <= len {
        let step = d * n;
        for e in (step..=len).rev() {
            let t = p[e - step].clone();
            p[e] -= t;
        }
        n += 1;
    }
    p
}

fn mul_trunc(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn power_trunc(a: &[BigInt], r: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len()];
    out[0] = BigInt::one();
    for _ in 0..r {
        out = mul_trunc(&out, a);
    }
    out
}

fn a(f: &QExpansion, n: usize) -> BigRational {
    f.coeff(n).clone()
}

#[test]
fn delta_matches_iterated_convolution() {
    let m = 60;
    let f = delta_qexp(m);
    let oracle = power_trunc(&naive_euler(1, m - 1), 24);
    for n in 1..=m {
        assert_eq!(a(&f, n), BigRational::from_integer(oracle[n - 1].clone()), "a_{n}");
    }
    assert_eq!(a(&f, 1), rat_int(1));
    assert_eq!(a(&f, 2), rat_int(-24));
    assert_eq!(a(&f, 6), a(&f, 2) * a(&f, 3));
    for p in [2usize, 3] {
        let p11 = BigRational::from_integer(BigInt::from(p).pow(11));
        assert_eq!(a(&f, p * p), a(&f, p) * a(&f, p) - p11);
    }
}

#[test]
fn level11_matches_iterated_convolution() {
    let m = 80;
    let f = level11_qexp(m);
    assert_eq!((f.weight, f.level), (2, 11));
    let e1 = power_trunc(&naive_euler(1, m - 1), 2);
    let e11 = power_trunc(&naive_euler(11, m - 1), 2);
    let oracle = mul_trunc(&e1, &e11);
    for n in 1..=m {
        assert_eq!(a(&f, n), BigRational::from_integer(oracle[n - 1].clone()));
    }
    assert_eq!(a(&f, 1), rat_int(1));
    assert_eq!(a(&f, 2), rat_int(-2));
    assert_eq!(a(&f, 6), a(&f, 2) * a(&f, 3));
}

#[test]
fn multiplicativity_up_to_fifty() {
    for f in [delta_qexp(2500), level11_qexp(2500)] {
        for m in 1..=50usize {
            for n in 1..=50usize {
                if m.gcd(&n) == 1 {
                    assert_eq!(a(&f, m * n), a(&f, m) * a(&f, n), "{} m={m} n={n}", f.id);
                }
            }
        }
    }
}

#[test]
fn eta_product_rejects_degenerate_input() {
    assert!(matches!(eta_product(1, &[], 10), Err(Error::NonIntegralExpansion(_))));
    assert!(matches!(eta_product(1, &[(1, 2)], 10), Err(Error::NonIntegralExpansion(_))));
    assert!(matches!(eta_product(1, &[(1, 3)], 10), Err(Error::NonIntegralExpansion(_))));
    assert!(matches!(eta_product(5, &[(3, 24)], 10), Err(Error::NonIntegralExpansion(_))));
}

#[test]
fn hecke_eigenforms() {
    let d = delta_qexp(200);
    let t2 = d.hecke(2, 100).unwrap();
    assert_eq!(t2.coeffs(), d.truncate(100).scale(&a(&d, 2)).coeffs());
    let f = level11_qexp(200);
    let t2 = f.hecke(2, 100).unwrap();
    assert_eq!(t2.coeffs(), f.truncate(100).scale(&rat_int(-2)).coeffs());
    let zero = QExpansion::from_ints("zero", 12, 1, &[0; 40]);
    assert!(zero.hecke(3, 13).unwrap().is_zero());
    assert_eq!(d.hecke(2, 101).unwrap_err(), Error::InsufficientTerms { needed: 202, available: 200 });
    assert!(matches!(f.hecke(11, 5), Err(Error::LevelNotCoprime { .. })));
}

#[test]
fn hecke_operators_commute() {
    // a non-eigen combination so that commuting is not automatic
    let d = delta_qexp(600);
    let g = eta_product(1, &[(1, 48)], 600).unwrap();
    assert_eq!(g.weight, 24);
    for f in [d, g] {
        let lhs = f.hecke(2, 300).unwrap().hecke(3, 100).unwrap();
        let rhs = f.hecke(3, 200).unwrap().hecke(2, 100).unwrap();
        assert_eq!(lhs.coeffs(), rhs.coeffs());
    }
}

#[test]
fn evaluation_periodicity_and_truncation() {
    let prec = 128;
    let f = delta_qexp(300);
    let i = Complex::new(Mpf::zero(prec), Mpf::one(prec));
    let v = eval(&f, &i, prec).unwrap();
    let v1 = eval(&f, &(i.clone() + Complex::from_i64(1, 0, prec)), prec).unwrap();
    assert!((v.value.clone() - v1.value).abs().to_f64() <= 1e-36);
    // Δ(i) = Γ(1/4)^24 / (2^24 π^18)
    let gamma14 = 3.625_609_908_221_908_f64;
    let expect = gamma14.powi(24) / (2f64.powi(24) * std::f64::consts::PI.powi(18));
    assert!((v.value.re.to_f64() / expect - 1.0).abs() < 1e-13);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in [delta_qexp(300), level11_qexp(300)] {
        let short = f.truncate(150);
        for _ in 0..20 {
            let tau = Complex::new(
                Mpf::from_f64(rng.gen_range(-0.5..0.5), prec),
                Mpf::from_f64(rng.gen_range(0.3..1.5), prec),
            );
            let a = eval(&short, &tau, prec).unwrap();
            let b = eval(&f, &tau, prec).unwrap();
            let diff = (a.value - b.value).abs();
            assert!(diff <= a.bound.clone() + b.bound, "{}", tau);
        }
    }
}

#[test]
fn accuracy_unreachable_reports_required_terms() {
    let f = delta_qexp(30);
    let tau = Complex::new(0.0f64, 0.05);
    match eval(&f, &tau, 53) {
        Err(Error::AccuracyUnreachable { required, available, .. }) => {
            assert!(required > 30);
            assert_eq!(available, 30);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn delta_modularity_under_s() {
    let prec = 128;
    let f = delta_qexp(400);
    let tau = Complex::new(Mpf::zero(prec), Mpf::from_ratio(&rat(13, 10), prec));
    let stau = Complex::from_i64(-1, 0, prec) / tau.clone();
    let lhs = eval(&f, &stau, prec).unwrap().value;
    let rhs = tau.powi(12) * eval(&f, &tau, prec).unwrap().value;
    let rel = ((lhs - rhs.clone()).abs() / rhs.abs()).to_f64();
    assert!(rel <= 1e-25, "{rel}");
}

#[test]
fn atkin_lehner_signs() {
    assert_eq!(atkin_lehner_sign::<Mpf>(&delta_qexp(100), 128).unwrap(), 1);
    assert_eq!(atkin_lehner_sign::<Mpf>(&level11_qexp(300), 128).unwrap(), -1);
}

#[test]
fn l_value_functional_equation_for_delta() {
    let prec = 128;
    let f = delta_qexp(200);
    for s in 1..=11 {
        let x = l_value::<Mpf>(&f, s, prec).unwrap();
        let y = l_value::<Mpf>(&f, 12 - s, prec).unwrap();
        let rel = ((x.value.clone() - y.value) / x.value.clone()).abs().to_f64();
        assert!(rel <= 1e-25, "s={s} rel={rel}");
        assert!(x.bound.to_f64() < 2f64.powi(-64));
    }
}

#[test]
fn l_value_linearity_and_known_values() {
    let prec = 128;
    let f = delta_qexp(200);
    let two = f.scale(&rat_int(2));
    for s in [3, 6] {
        let x = l_value::<Mpf>(&f, s, prec).unwrap().value;
        let y = l_value::<Mpf>(&two, s, prec).unwrap().value;
        assert!(((y - x.mul_i64(2)) / x).abs().to_f64() < 1e-30);
    }
    // L(E, 1) for the conductor-11 curve; Λ(1) = L(1) / 2π
    let e = level11_qexp(400);
    let lam = l_value::<Mpf>(&e, 1, prec).unwrap().value.to_f64();
    let l1 = 0.253_841_860_855_910_7;
    assert!((lam * 2.0 * std::f64::consts::PI - l1).abs() < 1e-14, "{lam}");
}

#[test]
fn json_roundtrip_and_cache() {
    let f = delta_qexp(30);
    let back = QExpansion::from_json(&f.to_json()).unwrap();
    assert_eq!(back.coeffs(), f.coeffs());
    assert_eq!((back.weight, back.level), (12, 1));
    assert!(back.eigenform);
    let parsed = QExpansion::from_json(&serde_json::json!({"weight": 12, "level": 1, "coeffs": [1, -24, 252]})).unwrap();
    assert_eq!(parsed.coeffs(), f.truncate(3).coeffs());
    let frac = QExpansion::from_json(&serde_json::json!({"weight": 2, "level": 11, "coeffs": ["1/2", 3]})).unwrap();
    assert_eq!(frac.coeff(1), &rat(1, 2));
    assert!(QExpansion::from_json(&serde_json::json!({"weight": 2})).is_err());

    let dir = std::env::temp_dir().join(format!("eslab-cache-test-{}", std::process::id()));
    let a = builtin_cached("level11", 50, Some(&dir)).unwrap();
    assert!(dir.join("level11_M50.json").exists());
    let b = builtin_cached("level11", 50, Some(&dir)).unwrap();
    assert_eq!(a.coeffs(), b.coeffs());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classical_dimension_table() {
    let table: Vec<(i64, i64)> = (2..=24).step_by(2).map(classical_dims).collect();
    assert_eq!(
        table,
        vec![(0, 0), (1, 0), (1, 0), (1, 0), (1, 0), (2, 1), (1, 0), (2, 1), (2, 1), (2, 1), (2, 1), (3, 2)]
    );
}

#[test]
fn eval_handles_f64_and_mpf_consistently() {
    let f = level11_qexp(200);
    let a = eval(&f, &Complex::new(0.1f64, 0.4), 53).unwrap().value;
    let b = eval(&f, &Complex::new(Mpf::from_f64(0.1, 128), Mpf::from_f64(0.4, 128)), 128).unwrap().value;
    assert!((a.re - b.re.to_f64()).abs() < 1e-14 && (a.im - b.im.to_f64()).abs() < 1e-14);
}
