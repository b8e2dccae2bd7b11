//! `eslab`: run the check suites and compute periods, connecting cocycles,
//! L-values and q-expansions.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eslab_core::checks::{connect_form, run_suite, SUITES};
use eslab_core::connecting::ConnectingMap;
use eslab_core::modular_forms::{l_value, QExpansion};
use eslab_core::numeric::{Complex, Mpf, Real};
use eslab_core::period_cocycles::{
    ratio_analysis, BasePoint, CocycleKind, GroupWord, IntMat, Parity, PeriodEngine, RatioAnalysis,
};
use eslab_core::poly_rep::HomPoly;
use eslab_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use config::{Overrides, RunConfig, CACHE_ENV};
use output::{emit_report, emit_table, Table};

#[derive(Parser)]
#[command(name = "eslab", version, about = "Eichler-Shimura periods and connecting cocycles")]
struct Cli {
    #[command(flatten)]
    flags: Overrides,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a check suite: ktype, poly, alpha, manin, hecke, parity, connect, esdim or all.
    Check {
        suite: String,
        /// Random word pairs for the cocycle law.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
    },
    /// Period cocycle value on one group element, with rationality analysis.
    Periods {
        /// r (plain cocycle), + or -.
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        parity: String,
    },
    /// Connecting cocycle against (1 - k) times the period cocycle.
    Connect {
        /// Word in the generators to evaluate, e.g. "g0 g1^-1"; repeatable.
        #[arg(long = "word")]
        words: Vec<String>,
    },
    /// Critical values Λ(f, s).
    Lvalue {
        /// A single s; all critical s when omitted.
        #[arg(long)]
        s: Option<i64>,
    },
    /// Print or save the q-expansion of the selected form.
    Qexp {
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dir = std::env::current_dir().unwrap_or_else(|_| PathBuf::from("."));
    let run = RunConfig::resolve(&cli.flags, &dir, std::env::var(CACHE_ENV).ok()).and_then(|cfg| dispatch(&cli.cmd, &cfg));
    match run {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: &Cmd, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Cmd::Check { suite, pairs } => check(cfg, suite, *pairs),
        Cmd::Periods { parity } => periods(cfg, parity),
        Cmd::Connect { words } => connect(cfg, words),
        Cmd::Lvalue { s } => lvalue(cfg, *s),
        Cmd::Qexp { save } => qexp(cfg, save.as_deref()),
    }
}

fn check(cfg: &RunConfig, suite: &str, pairs: usize) -> Result<Outcome> {
    if !SUITES.contains(&suite) {
        return Err(Error::Parse(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
    }
    if matches!(suite, "alpha" | "all") && cfg.precision < 64 {
        return Err(Error::Parse(format!("suite {suite} needs at least 64 bits, got {}", cfg.precision)));
    }
    // the exact and dimension suites need no forms
    let mut scfg = if matches!(suite, "ktype" | "poly" | "esdim") {
        eslab_core::checks::SuiteConfig::new(cfg.precision, cfg.seed, Vec::new())
    } else {
        cfg.suite_config()?
    };
    scfg.tol = cfg.tol.clone();
    scfg.law_pairs = pairs;
    let report = run_suite(suite, &scfg)?;
    emit_report(&report, None, cfg.out)?;
    Ok(if report.pass() { Outcome::Pass } else { Outcome::Fail })
}

fn coeff_rows(p: &HomPoly<Complex<Mpf>>, digits: usize) -> (Vec<Vec<String>>, Vec<Value>) {
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for (j, c) in p.coeffs().iter().enumerate() {
        let re = c.re.0.to_string_radix(10, Some(digits));
        let im = c.im.0.to_string_radix(10, Some(digits));
        rows.push(vec![j.to_string(), re.clone(), im.clone()]);
        js.push(json!({"j": j, "re": re, "im": im}));
    }
    (rows, js)
}

fn ratio_json(a: &RatioAnalysis) -> Value {
    let entries: Vec<Value> = a
        .ratios
        .iter()
        .map(|(j, v, q)| json!({"j": j, "value": v, "rational": q.as_ref().map(|q| q.to_string())}))
        .collect();
    json!({"normalizer": a.normalizer, "rational": a.all_rational(), "ratios": entries})
}

fn periods(cfg: &RunConfig, parity: &str) -> Result<Outcome> {
    let form = cfg.form_or("delta")?;
    let gamma = cfg.gamma.unwrap_or(IntMat::S);
    if gamma.det() != 1 || !gamma.in_gamma0(form.level) {
        return Err(Error::NotInGroup(gamma.entries_i64()));
    }
    let kind = match parity {
        "r" | "plain" => CocycleKind::Plain,
        p => CocycleKind::Es(Parity::parse(p)?),
    };
    let base = cfg.base.clone().unwrap_or(BasePoint::Infinity);
    let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
    let cert = engine.cocycle_certified(&gamma, &base)?;
    let (value, bound) = match kind {
        CocycleKind::Plain => (cert.value, cert.bound),
        // r^ω is r at ωγω moved by ω, which only permutes signs
        CocycleKind::Es(_) => (engine.value_of(kind, &gamma, &base)?, cert.bound.mul_i64(2)),
    };
    let digits = (cfg.precision as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let (rows, coeffs) = coeff_rows(&value, digits);
    let scale = value.max_abs();
    let small = scale.clone() * Mpf::epsilon(cfg.precision).sqrt();
    let mut ratios = serde_json::Map::new();
    let mut rational = true;
    let mut footer = vec![format!("error bound {:.3e}", bound.to_f64())];
    for (odd, tag) in [(true, "odd"), (false, "even")] {
        let class_max = value
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(j, _)| (j % 2 == 1) == odd)
            .fold(Mpf::zero(cfg.precision), |acc, (_, c)| Mpf::max_of(acc, c.abs()));
        if class_max <= small {
            ratios.insert(tag.into(), Value::Null);
            footer.push(format!("{tag} part vanishes"));
            continue;
        }
        let a = ratio_analysis(&value, odd, 1_000_000);
        rational &= a.all_rational();
        let shown: Vec<String> = a
            .ratios
            .iter()
            .map(|(j, v, q)| format!("{j}:{}", q.as_ref().map_or(format!("{v:.6e}"), |q| q.to_string())))
            .collect();
        footer.push(format!("{tag} ratios (by x^{}): {}", a.normalizer, shown.join(" ")));
        ratios.insert(tag.into(), ratio_json(&a));
    }
    footer.push(format!("rational: {rational}"));
    let label = match kind {
        CocycleKind::Plain => "r".to_string(),
        CocycleKind::Es(p) => if p == Parity::Plus { "+" } else { "-" }.to_string(),
    };
    let t = Table {
        title: format!("{} k={} level={} gamma={gamma} base={base} parity={label} precision={}", form.id, form.weight, form.level, cfg.precision),
        header: vec!["j", "re", "im"],
        rows,
        footer,
        json: json!({
            "form": form.id, "weight": form.weight, "level": form.level,
            "gamma": gamma.to_string(), "base": base.to_string(), "parity": label,
            "precision": cfg.precision, "bound": bound.to_f64(),
            "coeffs": coeffs, "ratios": ratios, "rational": rational,
        }),
    };
    emit_table(&t, cfg.out)?;
    Ok(Outcome::Pass)
}

fn connect(cfg: &RunConfig, words: &[String]) -> Result<Outcome> {
    let form = cfg.form_or("delta")?;
    let gens = cfg.generators(form.level)?;
    let engine = PeriodEngine::<Mpf>::new(form.clone(), cfg.precision)?;
    let mut scfg = eslab_core::checks::SuiteConfig::new(cfg.precision, cfg.seed, vec![form.clone()]);
    scfg.tol = cfg.tol.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (recs, th) = connect_form(&scfg, &engine, &gens, cfg.eps, &mut rng)?;
    let mut report = eslab_core::report::Report::new("connect", cfg.seed, cfg.precision);
    report.extend(recs);
    let map = ConnectingMap::new(&engine, cfg.eps);
    let digits = (cfg.precision as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mut values = Vec::new();
    for w in words {
        let word = GroupWord::parse(w, &gens)?;
        let v = map.value_word(&word, &gens)?;
        let (_, coeffs) = coeff_rows(&v, digits);
        values.push(json!({"word": word.display(&gens), "gamma": word.eval(&gens).to_string(), "coeffs": coeffs}));
    }
    let extra = json!({
        "form": form.id, "eps": cfg.eps.to_string(),
        "fitted": [th.fitted.0, th.fitted.1], "expected": th.expected, "values": values,
    });
    emit_report(&report, Some(extra), cfg.out)?;
    if cfg.out == config::OutFormat::Pretty {
        println!("fitted constant {}, expected {}", th.fitted_display(), th.expected);
        for v in &values {
            println!("{} = {}:", v["word"].as_str().unwrap_or(""), v["gamma"].as_str().unwrap_or(""));
            for c in v["coeffs"].as_array().into_iter().flatten() {
                println!("  x^{}  {}  {}", c["j"], c["re"].as_str().unwrap_or(""), c["im"].as_str().unwrap_or(""));
            }
        }
    }
    Ok(if report.pass() { Outcome::Pass } else { Outcome::Fail })
}

fn lvalue(cfg: &RunConfig, s: Option<i64>) -> Result<Outcome> {
    let form = cfg.form_or("delta")?;
    let ss: Vec<i64> = match s {
        Some(s) => vec![s],
        None => (1..form.weight).collect(),
    };
    let digits = (cfg.precision as f64 * std::f64::consts::LOG10_2).floor() as usize;
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for s in ss {
        let v = l_value::<Mpf>(&form, s, cfg.precision)?;
        let val = v.value.0.to_string_radix(10, Some(digits));
        rows.push(vec![s.to_string(), val.clone(), format!("{:.3e}", v.bound.to_f64())]);
        js.push(json!({"s": s, "value": val, "bound": v.bound.to_f64()}));
    }
    let t = Table {
        title: format!("Λ({}, s)  precision={}", form.id, cfg.precision),
        header: vec!["s", "value", "bound"],
        rows,
        footer: Vec::new(),
        json: json!({"form": form.id, "weight": form.weight, "level": form.level, "precision": cfg.precision, "values": js}),
    };
    emit_table(&t, cfg.out)?;
    Ok(Outcome::Pass)
}

fn qexp(cfg: &RunConfig, save: Option<&std::path::Path>) -> Result<Outcome> {
    let form: QExpansion = cfg.form_or("delta")?;
    if let Some(p) = save {
        form.save(p)?;
    }
    let rows = form.coeffs().iter().enumerate().map(|(n, a)| vec![(n + 1).to_string(), a.to_string()]).collect();
    let t = Table {
        title: format!("{} k={} level={} terms={}", form.id, form.weight, form.level, form.len()),
        header: vec!["n", "a_n"],
        rows,
        footer: Vec::new(),
        json: form.to_json(),
    };
    emit_table(&t, cfg.out)?;
    Ok(Outcome::Pass)
}
