//! Run configuration: `./eslab.conf`, then `ESLAB_CACHE`, then flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use eslab_core::checks::{SuiteConfig, Tolerances, DELTA_TERMS, LEVEL11_TERMS};
use eslab_core::connecting::Character;
use eslab_core::modular_forms::{builtin_cached, QExpansion};
use eslab_core::period_cocycles::{BasePoint, GeneratorSet, IntMat};
use eslab_core::{Error, Result};

pub const CONF_FILE: &str = "eslab.conf";
pub const CACHE_ENV: &str = "ESLAB_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Pretty,
}

/// Options shared by every subcommand; `None` means "not given here".
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Seed of all random trials.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Built-in form id (delta, level11) or path of a q-expansion JSON file.
    #[arg(long, global = true)]
    pub form: Option<String>,
    /// Number of q-expansion coefficients for built-in forms.
    #[arg(long, global = true)]
    pub terms: Option<usize>,
    /// Group element as "a,b,c,d".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Character value on diag(1, -1): + or -.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps: Option<String>,
    /// Base point of the cocycle: i, inf, or a height such as 2i.
    #[arg(long, global = true)]
    pub base: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutFormat>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// JSON file with the generator matrices of the form's group.
    #[arg(long, global = true)]
    pub gens: Option<PathBuf>,
    /// Tolerance override, NAME=VALUE; repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub seed: u64,
    pub form: Option<String>,
    pub terms: Option<usize>,
    pub gamma: Option<IntMat>,
    pub eps: Character,
    pub base: Option<BasePoint>,
    pub out: OutFormat,
    pub cache_dir: Option<PathBuf>,
    pub gens: Option<PathBuf>,
    pub tol: Tolerances,
}

fn parse_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{CONF_FILE}:{}: expected key=value", n + 1)))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

impl RunConfig {
    /// Merge flags over the config file in `dir` (if any) and the
    /// environment.
    pub fn resolve(flags: &Overrides, dir: &Path, env_cache: Option<String>) -> Result<RunConfig> {
        let path = dir.join(CONF_FILE);
        let file = match fs::read_to_string(&path) {
            Ok(text) => parse_file(&text)?,
            Err(_) => BTreeMap::new(),
        };
        let mut merged = Overrides::default();
        let mut tol_file = Vec::new();
        for (k, v) in &file {
            match k.as_str() {
                "precision" => merged.precision = Some(parse_num(k, v)?),
                "seed" => merged.seed = Some(parse_num(k, v)?),
                "form" => merged.form = Some(v.clone()),
                "terms" => merged.terms = Some(parse_num(k, v)?),
                "gamma" => merged.gamma = Some(v.clone()),
                "eps" => merged.eps = Some(v.clone()),
                "base" => merged.base = Some(v.clone()),
                "out" => {
                    merged.out = Some(OutFormat::from_str(v, true).map_err(|_| Error::Parse(format!("bad out {v:?}")))?)
                }
                "cache_dir" => merged.cache_dir = Some(PathBuf::from(v)),
                "gens" => merged.gens = Some(PathBuf::from(v)),
                _ => match k.strip_prefix("tol.") {
                    Some(name) => tol_file.push(format!("{name}={v}")),
                    None => return Err(Error::Parse(format!("{CONF_FILE}: unknown key {k:?}"))),
                },
            }
        }
        if let Some(c) = env_cache.filter(|c| !c.is_empty()) {
            merged.cache_dir = Some(PathBuf::from(c));
        }
        let pick = |a: &Option<String>, b: &Option<String>| a.clone().or_else(|| b.clone());

        let mut tol = Tolerances::default();
        for t in tol_file.iter().chain(&flags.tol) {
            let (name, v) = t.split_once('=').ok_or_else(|| Error::Parse(format!("bad tolerance {t:?}")))?;
            tol.set(name.trim(), parse_num(name, v.trim())?)?;
        }
        let precision = flags.precision.or(merged.precision).unwrap_or(128);
        if precision < 32 {
            return Err(Error::Parse(format!("precision {precision} below 32 bits")));
        }
        Ok(RunConfig {
            precision,
            seed: flags.seed.or(merged.seed).unwrap_or(1),
            form: pick(&flags.form, &merged.form),
            terms: flags.terms.or(merged.terms),
            gamma: pick(&flags.gamma, &merged.gamma).map(|g| IntMat::parse(&g)).transpose()?,
            eps: pick(&flags.eps, &merged.eps).map(|e| Character::parse(&e)).transpose()?.unwrap_or(Character::Trivial),
            base: pick(&flags.base, &merged.base).map(|b| BasePoint::parse(&b)).transpose()?,
            out: flags.out.or(merged.out).unwrap_or(OutFormat::Pretty),
            cache_dir: flags.cache_dir.clone().or(merged.cache_dir),
            gens: flags.gens.clone().or(merged.gens),
            tol,
        })
    }

    fn builtin_terms(&self, id: &str) -> usize {
        self.terms.unwrap_or(if id == "delta" { DELTA_TERMS } else { LEVEL11_TERMS })
    }

    fn load_form(&self, sel: &str) -> Result<QExpansion> {
        match sel {
            "delta" | "level11" | "11a" => builtin_cached(sel, self.builtin_terms(sel), self.cache_dir.as_deref()),
            path => QExpansion::load(Path::new(path)),
        }
    }

    /// The selected form, or `default` when none is selected.
    pub fn form_or(&self, default: &str) -> Result<QExpansion> {
        self.load_form(self.form.as_deref().unwrap_or(default))
    }

    /// The selected form, or both built-in forms.
    pub fn forms(&self) -> Result<Vec<QExpansion>> {
        match &self.form {
            Some(sel) => Ok(vec![self.load_form(sel)?]),
            None => ["delta", "level11"].iter().map(|id| self.load_form(id)).collect(),
        }
    }

    pub fn generators(&self, level: u64) -> Result<GeneratorSet> {
        match &self.gens {
            Some(p) => GeneratorSet::load(level, p),
            None => GeneratorSet::for_level(level),
        }
    }

    pub fn suite_config(&self) -> Result<SuiteConfig> {
        let forms = self.forms()?;
        let mut cfg = SuiteConfig::new(self.precision, self.seed, forms);
        if self.gens.is_some() {
            let level = cfg.forms.first().map_or(1, |f| f.level);
            cfg.generators = Some(self.generators(level)?);
        }
        cfg.tol = self.tol.clone();
        Ok(cfg)
    }
}
