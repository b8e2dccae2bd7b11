use eslab_core::checks::{default_forms, run_suite, SuiteConfig, Tolerances};
use eslab_core::report::Report;

fn cfg() -> SuiteConfig {
    SuiteConfig::new(128, 7, default_forms(None).unwrap())
}

fn show(r: &Report) {
    for rec in &r.records {
        eprintln!("{} k={} res={:.3e} tol={:.1e} {}", rec.check, rec.k, rec.max_residual, rec.tolerance, rec.detail.as_deref().unwrap_or(""));
    }
    let bad: Vec<_> = r.failures().map(|f| f.check.clone()).collect();
    assert!(r.pass(), "failures: {bad:?}");
}

#[test]
fn ktype_suite_passes() {
    show(&run_suite("ktype", &cfg()).unwrap());
}

#[test]
fn poly_suite_passes() {
    show(&run_suite("poly", &cfg()).unwrap());
}

#[test]
fn alpha_suite_passes() {
    show(&run_suite("alpha", &cfg()).unwrap());
}

#[test]
fn manin_suite_passes() {
    show(&run_suite("manin", &cfg()).unwrap());
}

#[test]
fn hecke_suite_passes() {
    show(&run_suite("hecke", &cfg()).unwrap());
}

#[test]
fn parity_suite_passes() {
    show(&run_suite("parity", &cfg()).unwrap());
}

#[test]
fn connect_suite_passes() {
    show(&run_suite("connect", &cfg()).unwrap());
}

#[test]
fn esdim_suite_passes() {
    let r = run_suite("esdim", &cfg()).unwrap();
    assert_eq!(r.records.len(), 12);
    show(&r);
}

#[test]
fn unknown_suite_and_tolerance_are_rejected() {
    assert!(run_suite("nosuch", &cfg()).is_err());
    let mut t = Tolerances::default();
    assert!(t.set("nosuch", 1.0).is_err());
    t.set("hecke", 1e-3).unwrap();
    assert_eq!(t.hecke, 1e-3);
}

#[test]
fn same_seed_same_report() {
    let a = run_suite("poly", &cfg()).unwrap();
    let b = run_suite("poly", &cfg()).unwrap();
    assert_eq!(a.records, b.records);
}
