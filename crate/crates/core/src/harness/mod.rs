//! Batch verification: run configuration, suite dispatch, relation-table
//! caching and the JSON report.

pub mod cache;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::checks::check_relations_with;
use crate::algebra::{AlgebraConfig, Normalization, RelationTable};
use crate::center::suite as center_suite;
use crate::center::CenterParams;
use crate::error::{Error, Result};
use crate::fnorm::{check_fnorm, solve_f};
use crate::gauss::currents::Family;
use crate::gauss::suite::{self as gauss_suite, GaussParams};
use crate::hc::suite::{self as hc_suite, HcParams, WakimotoSuiteParams};
use crate::hc::WakimotoParams;
use crate::report::{timed, CheckRecord};
use crate::scalar::Rational;
use crate::tensor::{check_crossing, check_jucys, check_ybe_unitarity};

pub use cache::{load_or_derive, table_path, CacheEvent, CacheStatus};

pub const SCHEMA_VERSION: u32 = 1;

/// Every suite the harness knows, in execution order.
pub const SUITES: [&str; 7] = ["rmatrix", "fnorm", "relations", "gauss", "center", "hc", "wakimoto"];

/// Number of random Wakimoto parameter sets per run.
pub const WAKIMOTO_SEEDS: u64 = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub algebra: AlgebraConfig,
    pub suites: Vec<String>,
    pub seed: u64,
    pub cache_dir: PathBuf,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Extra Wakimoto parameter files in the text format of
    /// [`WakimotoParams::parse`].
    #[serde(default)]
    pub wakimoto_params: Vec<PathBuf>,
    /// Suites running at once.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebra: AlgebraConfig {
                n: 2,
                c: Rational::from_int(-2),
                normalization: Normalization::Normalized,
                m: 4,
                order: 4,
                w: 4,
                p: 6,
            },
            suites: vec![],
            seed: 0,
            cache_dir: PathBuf::from(".dyh-cache"),
            output: None,
            wakimoto_params: vec![],
            workers: 2,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.algebra.validate()?;
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::InvalidConfig(format!("unknown suite {s:?}; known suites: {}", SUITES.join(", "))));
            }
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be positive".into()));
        }
        Ok(())
    }

    fn hc_params(&self) -> HcParams {
        let a = &self.algebra;
        HcParams { n: a.n, m: a.m, order: a.order as i32, p: a.p, k_max: a.n, mult: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Coefficients of the normalizing series `f(u) = Σ c_k (h/u)^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FnormExport {
    pub n: usize,
    /// `c_0, c_1, …` as exact rationals.
    pub coeffs: Vec<String>,
    pub note: String,
}

pub const FNORM_NOTE: &str =
    "f is defined by its functional equation; the infinite product expression is not evaluated";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    /// Relation tables used by the run.
    pub cache: Vec<CacheEvent>,
    pub warnings: Vec<String>,
    /// Sorted by `(suite, check_id)`.
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fnorm: Option<FnormExport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| Error::Parse(format!("report: {e}")))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::IncompatibleCache(format!("report schema {}, expected {SCHEMA_VERSION}", r.schema_version)));
        }
        Ok(r)
    }

    /// The report with wall times zeroed and cache outcomes reduced to the
    /// fingerprints: the part that depends only on `(config, seed)`.
    pub fn deterministic(&self) -> Report {
        let mut r = self.clone();
        for x in &mut r.records {
            x.wall_time_ms = 0.0;
        }
        for c in &mut r.cache {
            c.status = CacheStatus::Hit;
        }
        r.warnings.clear();
        r
    }
}

struct SuiteOutput {
    records: Vec<CheckRecord>,
    cache: Vec<CacheEvent>,
    warnings: Vec<String>,
    fnorm: Option<FnormExport>,
}

impl SuiteOutput {
    fn records(records: Vec<CheckRecord>) -> Self {
        SuiteOutput { records, cache: vec![], warnings: vec![], fnorm: None }
    }
}

/// A suite that could not start becomes one failing record.
fn setup_failure(suite: &str, e: Error) -> Vec<CheckRecord> {
    vec![timed(suite, "setup", "suite configuration", || Err(e))]
}

fn or_setup_failure(suite: &str, r: Result<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    r.unwrap_or_else(|e| setup_failure(suite, e))
}

fn run_suite(name: &str, cfg: &RunConfig) -> SuiteOutput {
    let a = &cfg.algebra;
    let n = a.n;
    match name {
        "rmatrix" => {
            let mut out = check_ybe_unitarity(n, cfg.seed, 16);
            for k in 2..=n.min(3) {
                out.push(check_jucys(k, n));
            }
            match solve_f(n, a.m.max(a.order as usize)) {
                Ok(f) => out.extend(check_crossing(n, a.m, a.order, &f)),
                Err(e) => out.extend(setup_failure(name, e)),
            }
            SuiteOutput::records(out)
        }
        "fnorm" => {
            let k = a.m.max(a.order as usize);
            let fnorm = solve_f(n, k).ok().map(|f| FnormExport {
                n,
                coeffs: f.coeffs.iter().map(|c| c.to_string()).collect(),
                note: FNORM_NOTE.into(),
            });
            SuiteOutput { fnorm, ..SuiteOutput::records(check_fnorm(n, k)) }
        }
        "relations" => match load_or_derive(&cfg.cache_dir, a) {
            Ok((table, ev, warning)) => SuiteOutput {
                records: check_relations_with(a, cfg.seed, Some(&table)),
                cache: vec![ev],
                warnings: warning.into_iter().collect(),
                fnorm: None,
            },
            Err(e) => SuiteOutput::records(setup_failure(name, e)),
        },
        "gauss" => {
            let p = GaussParams {
                n,
                c: a.c.clone(),
                m: a.m,
                order: a.order,
                window: (a.order as i32).min(3),
                families: Family::ALL.to_vec(),
            };
            SuiteOutput::records(or_setup_failure(gauss_suite::SUITE, gauss_suite::run(&p)))
        }
        "center" => {
            let p = CenterParams::new(n, a.m, a.p);
            SuiteOutput::records(or_setup_failure(center_suite::SUITE, center_suite::run(&p)))
        }
        "hc" => SuiteOutput::records(or_setup_failure(hc_suite::SUITE, hc_suite::run(&cfg.hc_params()))),
        "wakimoto" => {
            let extra: Result<Vec<WakimotoParams>> = cfg
                .wakimoto_params
                .iter()
                .map(|p| WakimotoParams::parse(&std::fs::read_to_string(p)?))
                .collect();
            let r = extra.and_then(|extra| {
                let seeds = (cfg.seed..cfg.seed + WAKIMOTO_SEEDS).collect();
                let w = WakimotoSuiteParams { extra, ..WakimotoSuiteParams::new(cfg.hc_params(), seeds) };
                hc_suite::run_wakimoto(&w)
            });
            SuiteOutput::records(or_setup_failure(hc_suite::WAKIMOTO_SUITE, r))
        }
        _ => SuiteOutput::records(setup_failure(name, Error::InvalidConfig(format!("unknown suite {name:?}")))),
    }
}

/// Runs the selected suites, at most `workers` at a time, and assembles the
/// report. Records are sorted, so the report does not depend on scheduling.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut names: Vec<&str> = SUITES.iter().copied().filter(|s| cfg.suites.iter().any(|x| x == s)).collect();
    names.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    let outputs: Vec<SuiteOutput> = pool.install(|| names.par_iter().map(|s| run_suite(s, cfg)).collect());
    let mut records = Vec::new();
    let mut cache = Vec::new();
    let mut warnings = Vec::new();
    let mut fnorm = None;
    for o in outputs {
        records.extend(o.records);
        cache.extend(o.cache);
        warnings.extend(o.warnings);
        fnorm = fnorm.or(o.fnorm);
    }
    records.sort_by(|x, y| (&x.suite, &x.check_id).cmp(&(&y.suite, &y.check_id)));
    for w in records.windows(2) {
        if w[0].suite == w[1].suite && w[0].check_id == w[1].check_id {
            return Err(Error::InvalidConfig(format!("check {}/{} ran twice", w[0].suite, w[0].check_id)));
        }
    }
    let passed = records.iter().filter(|r| r.passed()).count();
    let summary = Summary { total: records.len(), passed, failed: records.len() - passed };
    Ok(Report { schema_version: SCHEMA_VERSION, config: cfg.clone(), cache, warnings, records, summary, fnorm })
}

/// Writes the relation table of `cfg` to `path`, reusing the cache.
pub fn export_tables(cfg: &RunConfig, path: &Path) -> Result<(RelationTable, CacheEvent, Option<String>)> {
    cfg.validate()?;
    let (t, ev, w) = load_or_derive(&cfg.cache_dir, &cfg.algebra)?;
    t.write(path)?;
    Ok((t, ev, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: &[&str], tag: &str) -> RunConfig {
        RunConfig {
            algebra: AlgebraConfig::new(2, Rational::from_int(-2), Normalization::Normalized, 2, 2, 2, 3).unwrap(),
            suites: suites.iter().map(|s| s.to_string()).collect(),
            cache_dir: std::env::temp_dir().join(format!("dyh-harness-{tag}-{}", std::process::id())),
            ..RunConfig::default()
        }
    }

    #[test]
    fn empty_suite_list_gives_an_empty_passing_report() {
        let r = run(&small(&[], "empty")).unwrap();
        assert!(r.records.is_empty() && r.passed());
        assert_eq!(r.schema_version, SCHEMA_VERSION);
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(matches!(run(&small(&["nope"], "bad")), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn reports_are_deterministic_and_round_trip() {
        let cfg = small(&["fnorm", "rmatrix", "relations"], "det");
        let a = run(&cfg).unwrap();
        let b = run(&RunConfig { workers: 1, ..cfg.clone() }).unwrap();
        assert!(a.passed(), "{:?}", a.records.iter().find(|r| !r.passed()));
        let strip = |r: &Report| Report { config: RunConfig { workers: 0, ..r.config.clone() }, ..r.deterministic() };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.cache[0].status, CacheStatus::Derived);
        let f = a.fnorm.as_ref().unwrap();
        assert_eq!(f.coeffs[0], "1");
        assert_eq!(f.coeffs.len(), 3);
        assert_eq!(b.cache[0].status, CacheStatus::Hit);
        let _ = std::fs::remove_dir_all(&cfg.cache_dir);
    }

    #[test]
    fn export_round_trips_bit_exactly() {
        let cfg = small(&[], "export");
        let path = cfg.cache_dir.join("exported.txt");
        let (t, _, _) = export_tables(&cfg, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let back = RelationTable::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.len(), RelationTable::expected_rows(&cfg.algebra));
        let _ = std::fs::remove_dir_all(&cfg.cache_dir);
    }
}
