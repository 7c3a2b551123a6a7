use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use condmed::harness::{self, GeneratorConfig, tightness};
use condmed::{Instance, MechanismId, Objective, oracle};

#[derive(Parser)]
#[command(name = "condmed", version, about = "Strategyproof two-facility location on a line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on an instance and print its outcome.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "conditional-median")]
        mechanism: MechanismId,
    },
    /// Print the optimal solution for an objective.
    Opt {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        objective: Objective,
    },
    /// Print the approximation-ratio record of a mechanism on an instance.
    Ratio {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "conditional-median")]
        mechanism: MechanismId,
        #[arg(long)]
        objective: Objective,
    },
    /// Search every single-agent misreport; exits 1 if one is profitable.
    VerifySp {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "conditional-median")]
        mechanism: MechanismId,
    },
    /// Evaluate the two tightness families and print the ratio table.
    PaperExamples {
        /// Emit JSON rows instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Hill-climb toward the worst ratio for a mechanism.
    Search {
        #[arg(long)]
        objective: Objective,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "conditional-median")]
        mechanism: MechanismId,
        /// Generator config JSON for the starting and restart instances.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a batch experiment and write report.json and records.csv.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { instance, mechanism } => {
            let inst = load_instance(&instance)?;
            print_json(&mechanism.run(&inst))?;
        }
        Command::Opt { instance, objective } => {
            let inst = load_instance(&instance)?;
            let (solution, cost) = oracle::optimal_solution(&inst, objective);
            print_json(&json!({ "objective": objective, "solution": solution, "cost": cost }))?;
        }
        Command::Ratio { instance, mechanism, objective } => {
            let inst = load_instance(&instance)?;
            let (_, record) = oracle::evaluate(&inst, mechanism, objective);
            print_json(&record)?;
        }
        Command::VerifySp { instance, mechanism } => {
            let inst = load_instance(&instance)?;
            let report = oracle::verify_strategyproof_with(&inst, mechanism);
            print_json(&report)?;
            if !report.is_strategyproof() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::PaperExamples { json } => {
            let rows = tightness::paper_examples()?;
            if json {
                print_json(&rows)?;
            } else {
                emit(tightness::format_table(&rows).trim_end())?;
            }
        }
        Command::Search { objective, iters, seed, mechanism, config } => {
            let cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let cfg: GeneratorConfig = serde_json::from_str(&text)?;
                    cfg.with_seed(seed)
                }
                None => harness::default_search_config(seed),
            };
            let result = harness::hill_climb(&cfg, objective, mechanism, iters)?;
            print_json(&result)?;
        }
        Command::Experiment { config, out } => {
            let report = harness::run_experiment_file(&config, &out)?;
            for row in &report.summary {
                eprintln!(
                    "{:<20} {} n={:<6} max={:.6} mean={:.6} unit={} violation={}",
                    row.mechanism.as_str(),
                    row.objective,
                    row.count,
                    row.max_ratio,
                    row.mean_ratio,
                    row.unit_count,
                    row.violation_count
                );
            }
            eprintln!(
                "strategyproofness: {} instances audited, {} deviations",
                report.sp_audits.instances_audited, report.sp_audits.deviations_found
            );
            for b in &report.breaches {
                eprintln!("BREACH {b}");
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
