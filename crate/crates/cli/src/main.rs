//! `dyh`: batch verification of the truncated DY_h(gl_n) engine.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
//! or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use dyh_core::algebra::{AlgebraConfig, Normalization};
use dyh_core::harness::{self, Report, RunConfig, SUITES};
use dyh_core::scalar::Rational;

#[derive(Parser)]
#[command(name = "dyh", version, about = "Exact verification suites for the double Yangian of gl_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites and write a JSON report.
    Run(ConfigArgs),
    /// Derive (or load from the cache) the relation table and write it out.
    ExportTables {
        #[command(flatten)]
        config: ConfigArgs,
        /// Destination file.
        #[arg(long)]
        to: PathBuf,
    },
    /// Print the resolved run configuration as JSON.
    ShowConfig(ConfigArgs),
}

/// Flags mirror the fields of the run configuration; unset flags keep the
/// values of `--config` or the defaults.
#[derive(Args)]
struct ConfigArgs {
    /// JSON run configuration used as the base.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Central charge, an exact rational such as -2 or 3/2.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<Rational>,
    /// `normalized` or `unnormalized`.
    #[arg(long)]
    normalization: Option<Normalization>,
    /// Truncation order in h.
    #[arg(short = 'M', long = "M")]
    m: Option<usize>,
    /// Truncation order in the spectral parameter.
    #[arg(short = 'N', long = "N")]
    order: Option<u32>,
    /// Mode window.
    #[arg(short = 'W', long = "W")]
    w: Option<u32>,
    /// Plus-mode cutoff.
    #[arg(short = 'p', long = "p")]
    p: Option<u32>,
    /// Suites to run, comma separated or repeated.
    #[arg(long = "suite", value_delimiter = ',')]
    suites: Vec<String>,
    /// Run every suite.
    #[arg(long, conflicts_with = "suites")]
    all: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "DYH_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Extra Wakimoto parameter files.
    #[arg(long = "wakimoto-params")]
    wakimoto_params: Vec<PathBuf>,
    /// Suites running at once.
    #[arg(long)]
    workers: Option<usize>,
}

impl ConfigArgs {
    fn resolve(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let a = &mut cfg.algebra;
        a.n = self.n.unwrap_or(a.n);
        a.c = self.c.unwrap_or_else(|| a.c.clone());
        a.normalization = self.normalization.unwrap_or(a.normalization);
        a.m = self.m.unwrap_or(a.m);
        a.order = self.order.unwrap_or(a.order);
        a.w = self.w.unwrap_or(a.w);
        a.p = self.p.unwrap_or(a.p);
        *a = AlgebraConfig::new(a.n, a.c.clone(), a.normalization, a.m, a.order, a.w, a.p)?;
        if self.all {
            cfg.suites = SUITES.iter().map(|s| s.to_string()).collect();
        } else if !self.suites.is_empty() {
            cfg.suites = self.suites;
        }
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.cache_dir = self.cache_dir.unwrap_or(cfg.cache_dir);
        cfg.output = self.output.or(cfg.output);
        if !self.wakimoto_params.is_empty() {
            cfg.wakimoto_params = self.wakimoto_params;
        }
        cfg.workers = self.workers.unwrap_or(cfg.workers);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn summarize(r: &Report) {
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    for x in &r.records {
        let status = if x.passed() { "PASS" } else { "FAIL" };
        eprint!("{status} {}/{} ({:.0} ms)", x.suite, x.check_id, x.wall_time_ms);
        match &x.witness {
            Some(w) if !x.passed() => eprintln!(": {w}"),
            _ => eprintln!(),
        }
    }
    eprintln!("{} checks, {} passed, {} failed", r.summary.total, r.summary.passed, r.summary.failed);
}

fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let report = harness::run(&cfg)?;
            summarize(&report);
            let json = report.to_json();
            match &cfg.output {
                Some(p) => std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
                None => println!("{json}"),
            }
            Ok(report.passed())
        }
        Command::ExportTables { config, to } => {
            let cfg = config.resolve()?;
            let (t, ev, warning) = harness::export_tables(&cfg, &to)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            eprintln!("{} rows, fingerprint {} ({:?}), written to {}", t.len(), ev.fingerprint, ev.status, to.display());
            Ok(true)
        }
        Command::ShowConfig(args) => {
            println!("{}", serde_json::to_string_pretty(&args.resolve()?)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
