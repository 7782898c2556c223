//! Command-line runner: config layering, scenario dispatch and reports.

pub mod catalog;
pub mod config;
pub mod report;
pub mod scenarios;

use crate::error::{Error, Result};
use clap::{Parser, Subcommand};
use config::{Inputs, RunConfig};
use report::{Outcome, Provenance, Report};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Parser, Debug)]
#[command(name = "rgsym", version, about = "Run RG-symmetry scenarios and write verification reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario. Extra `--section.key=value` flags override parameters.
    Run {
        /// Scenario id from `list-scenarios` [default: verify-all]
        #[arg(long)]
        scenario: Option<String>,
        /// TOML file layered over the built-in defaults
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for the report, tables and plot scripts
        #[arg(long)]
        output: Option<String>,
        /// Seed for oracle sampling
        #[arg(long)]
        seed: Option<u64>,
        /// Use the reduced-resolution table
        #[arg(long)]
        fast: bool,
        /// Parameter overrides, collected separately.
        #[arg(skip)]
        overrides: Vec<String>,
    },
    /// Print the scenario catalog.
    ListScenarios,
}

const RUN_FLAGS: &[&str] = &["scenario", "config", "output", "seed"];

/// Splits the `run` arguments into those clap knows and parameter overrides,
/// so overrides may appear anywhere on the line.
fn split_overrides(args: Vec<String>) -> (Vec<String>, Vec<String>) {
    let Some(pos) = args.iter().position(|a| a == "run") else {
        return (args, Vec::new());
    };
    let mut known: Vec<String> = args[..=pos].to_vec();
    let mut extra = Vec::new();
    let mut it = args[pos + 1..].iter().peekable();
    while let Some(tok) = it.next() {
        let name = tok.strip_prefix("--").map(|b| b.split('=').next().unwrap_or(b));
        match name {
            Some(n) if RUN_FLAGS.contains(&n) => {
                known.push(tok.clone());
                if !tok.contains('=') {
                    known.extend(it.next().cloned());
                }
            }
            Some("fast" | "help") | None => known.push(tok.clone()),
            Some(_) if tok == "-h" => known.push(tok.clone()),
            Some(_) => {
                extra.push(tok.clone());
                if !tok.contains('=') {
                    extra.extend(it.next_if(|n| !n.starts_with("--")).cloned());
                }
            }
        }
    }
    (known, extra)
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let (known, extra) = split_overrides(args);
    let cli = match Cli::try_parse_from(known) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::ListScenarios => {
            print!("{}", catalog::listing());
            0
        }
        Command::Run {
            scenario,
            config,
            output,
            seed,
            fast,
            ..
        } => {
            let inputs = Inputs {
                scenario,
                output,
                seed,
                fast,
                overrides: extra,
                ..Inputs::default()
            };
            let inputs = match config {
                Some(path) => inputs.with_config_file(&path),
                None => Ok(inputs),
            };
            match inputs.and_then(|i| config::build(&i)).and_then(|cfg| execute(&cfg)) {
                Ok(report) => {
                    println!(
                        "{}: {} checks, {} failing",
                        report.scenario,
                        report.checks.len(),
                        report.failing.len()
                    );
                    if report.passed {
                        0
                    } else {
                        for name in &report.failing {
                            eprintln!("FAIL {name}");
                        }
                        1
                    }
                }
                Err(e @ Error::Config(_)) => {
                    eprintln!("config error: {e}");
                    2
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    }
}

/// Runs one catalog scenario.
pub fn run_scenario(id: &str, cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.run.seed;
    match id {
        "transfer" => scenarios::transfer::run(&cfg.transfer, seed),
        "hopf" => scenarios::hopf::run(&cfg.hopf),
        "chaplygin-soliton" => scenarios::chaplygin::run_soliton(&cfg.soliton),
        "chaplygin-slab" => scenarios::chaplygin::run_slab(&cfg.slab),
        "resonance" => scenarios::resonance::run(&cfg.resonance),
        "beam" => scenarios::beam::run(&cfg.beam),
        "bunch" => scenarios::bunch::run(&cfg.bunch, seed),
        "group" => scenarios::group::run(&cfg.group, seed),
        other => Err(Error::Config(format!("unknown scenario `{other}`"))),
    }
}

const ALL: &[&str] = &[
    "transfer",
    "hopf",
    "chaplygin-soliton",
    "chaplygin-slab",
    "resonance",
    "beam",
    "bunch",
    "group",
];

fn parameters(id: &str, cfg: &RunConfig) -> serde_json::Value {
    let full = serde_json::to_value(cfg).unwrap_or_default();
    match id {
        "verify-all" => full,
        id => serde_json::json!({ "run": full["run"], id: full[id] }),
    }
}

/// Runs the configured scenario, writes the artifacts and returns the report.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let id = cfg.run.scenario.as_str();
    let outcome = if id == "verify-all" {
        let mut all = Outcome::default();
        for &s in ALL {
            all.merge(s, timed(s, cfg)?);
        }
        all
    } else {
        timed(id, cfg)?
    };
    let failing: Vec<String> = outcome.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let report = Report {
        scenario: id.to_string(),
        parameters: parameters(id, cfg),
        checks: outcome.checks.clone(),
        residuals: outcome.residuals.clone(),
        singularities: outcome.singularities.clone(),
        provenance: Provenance {
            toolkit: "rgsym".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: cfg.hash(),
            resolution: cfg.resolution().into(),
            seed: cfg.run.seed,
            conventions: outcome.conventions.clone(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        },
        passed: failing.is_empty(),
        failing,
    };
    report::write_artifacts(Path::new(&cfg.run.output), &report, &outcome)?;
    Ok(report)
}

fn timed(id: &str, cfg: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let out = run_scenario(id, cfg)?;
    eprintln!("{id}: {:.2} s", start.elapsed().as_secs_f64());
    Ok(out)
}
