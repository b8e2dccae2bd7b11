use std::path::Path;
use std::process::{Command, Output};

use eslab_core::period_cocycles::GeneratorSet;
use serde_json::Value;

fn eslab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eslab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ESLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn esdim_table_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["check", "esdim"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k=12") && text.contains("dim_H1=3 dim_M=2 dim_S=1"), "{text}");
    assert!(text.contains("dim_H1=5 dim_M=3 dim_S=2"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&eslab(dir.path(), &["check", "nosuch"])), 2);
    assert_eq!(code(&eslab(dir.path(), &["--precision", "48", "check", "alpha"])), 2);
    assert_eq!(code(&eslab(dir.path(), &["--precision", "16", "check", "esdim"])), 2);
    assert_eq!(code(&eslab(dir.path(), &["--eps", "x", "check", "esdim"])), 2);
    assert_eq!(code(&eslab(dir.path(), &["frobnicate"])), 2);
    std::fs::write(dir.path().join("eslab.conf"), "bogus = 1\n").unwrap();
    assert_eq!(code(&eslab(dir.path(), &["check", "esdim"])), 2);
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // a negative tolerance cannot be met
    let out = eslab(dir.path(), &["--tol", "hecke=-1", "--form", "level11", "check", "hecke"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn identity_period_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--gamma", "1,0,0,1", "--out", "json", "periods", "--parity", "r"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for c in v["coeffs"].as_array().unwrap() {
        assert_eq!(c["re"], "0");
        assert_eq!(c["im"], "0");
    }
}

#[test]
fn delta_odd_period_ratios_are_rational() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--gamma", "0,-1,1,0", "--out", "json", "periods", "--parity", "-"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["rational"], true);
    let got: Vec<String> =
        v["ratios"]["odd"]["ratios"].as_array().unwrap().iter().map(|r| r["rational"].as_str().unwrap().to_string()).collect();
    assert_eq!(got, ["1", "-25/4", "21/2", "-25/4", "1"]);
    assert!(v["ratios"]["even"].is_null());
    assert!(v["bound"].as_f64().unwrap() < 1e-30);
}

#[test]
fn level11_periods_from_generator_file() {
    let dir = tempfile::tempdir().unwrap();
    let gens = GeneratorSet::for_level(11).unwrap();
    let mats: Vec<Value> = gens.mats.iter().map(|m| serde_json::json!([[m.a as i64, m.b as i64], [m.c as i64, m.d as i64]])).collect();
    std::fs::write(dir.path().join("gens.json"), serde_json::to_string(&mats).unwrap()).unwrap();
    let g = gens.mats.iter().find(|m| m.c != 0).unwrap();
    let gamma = format!("{},{},{},{}", g.a, g.b, g.c, g.d);
    let out = eslab(
        dir.path(),
        &["--form", "level11", "--gens", "gens.json", "--gamma", &gamma, "--out", "json", "periods", "--parity", "r"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let bound = v["bound"].as_f64().unwrap();
    assert!(bound.is_finite() && bound < 1e-30, "{bound}");
    for c in v["coeffs"].as_array().unwrap() {
        let re: f64 = c["re"].as_str().unwrap().parse().unwrap();
        assert!(re.is_finite());
    }
    // outside Γ0(11)
    let out = eslab(dir.path(), &["--form", "level11", "--gamma", "0,-1,1,0", "periods"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn connect_recovers_one_minus_k() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--eps", "+", "--out", "json", "connect", "--word", "S T"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["expected"], -11);
    assert!((v["fitted"][0].as_f64().unwrap() + 11.0).abs() < 1e-12);
    assert_eq!(v["values"][0]["gamma"], "[[0, -1], [1, 1]]");
    let out = eslab(dir.path(), &["--form", "level11", "--eps", "-", "--out", "json", "connect"]);
    assert_eq!(code(&out), 0);
    assert!((json(&out)["fitted"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn connect_on_zero_form_reports_zero() {
    let dir = tempfile::tempdir().unwrap();
    let zeros = serde_json::json!({"weight": 12, "level": 1, "coeffs": vec![0; 40]});
    std::fs::write(dir.path().join("zero.json"), zeros.to_string()).unwrap();
    let out = eslab(dir.path(), &["--form", "zero.json", "--out", "json", "connect"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for r in v["records"].as_array().unwrap() {
        assert_eq!(r["max_residual"], 0.0, "{r}");
    }
}

#[test]
fn config_file_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("eslab.conf"), "# defaults\nseed = 5\nout = json\ncache_dir = from_file\n").unwrap();
    let v = json(&eslab(dir.path(), &["check", "esdim"]));
    assert_eq!(v["seed"], 5);
    let v = json(&eslab(dir.path(), &["--seed", "9", "check", "esdim"]));
    assert_eq!(v["seed"], 9);

    assert_eq!(code(&eslab(dir.path(), &["--terms", "12", "qexp"])), 0);
    assert!(dir.path().join("from_file/delta_M12.json").exists());
    let out = Command::new(env!("CARGO_BIN_EXE_eslab"))
        .args(["--terms", "12", "qexp"])
        .current_dir(dir.path())
        .env("ESLAB_CACHE", "from_env")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("from_env/delta_M12.json").exists());
    assert_eq!(code(&eslab(dir.path(), &["--terms", "12", "--cache-dir", "from_flag", "qexp"])), 0);
    assert!(dir.path().join("from_flag/delta_M12.json").exists());
}

#[test]
fn csv_columns_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--out", "csv", "check", "esdim"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "suite,seed,precision,check,k,trials,max_residual,tolerance,pass,detail");
    assert_eq!(lines.count(), 12);
}

#[test]
fn reports_are_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = eslab(dir.path(), &["--seed", "3", "--out", "json", "check", "poly"]);
    let b = eslab(dir.path(), &["--seed", "3", "--out", "json", "check", "poly"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn qexp_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--form", "level11", "--terms", "25", "--out", "json", "qexp", "--save", "f.json"]);
    assert_eq!(code(&out), 0);
    let again = eslab(dir.path(), &["--form", "f.json", "--out", "json", "qexp"]);
    assert_eq!(json(&out)["coeffs"], json(&again)["coeffs"]);
    assert_eq!(json(&out)["coeffs"][1], -2);
}

#[test]
fn lvalue_lists_critical_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = eslab(dir.path(), &["--out", "json", "lvalue"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["values"].as_array().unwrap().len(), 11);
    assert_eq!(code(&eslab(dir.path(), &["lvalue", "--s", "12"])), 2);
}
