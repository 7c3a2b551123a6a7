//! Batch experiments over many instances, with bound checks and a
//! strategyproofness audit, written out as JSON and CSV.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::{GeneratorConfig, gen_mc_tight, gen_random, gen_sc_tight};
use crate::mechanism::{CaseTag, MechanismId};
use crate::model::{Instance, Objective};
use crate::oracle::{Deviation, RatioFlag, RatioRecord, evaluate, verify_strategyproof_with};

/// Slack allowed above a proven bound before a record counts as a breach.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("reading {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("writing report: {0}")]
    Write(#[from] std::io::Error),
    #[error("bad config: {0}")]
    Config(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] crate::error::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomBatch {
    pub count: usize,
    pub generator: GeneratorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum TightFamily {
    #[serde(rename = "sc")]
    Sc { n: usize, eps: f64 },
    #[serde(rename = "mc")]
    Mc { eps: f64 },
}

impl TightFamily {
    fn id(&self) -> String {
        match self {
            TightFamily::Sc { n, eps } => format!("sc-tight-n{n}-eps{eps:e}"),
            TightFamily::Mc { eps } => format!("mc-tight-eps{eps:e}"),
        }
    }

    fn build(&self) -> crate::error::Result<Instance> {
        match *self {
            TightFamily::Sc { n, eps } => gen_sc_tight(n, eps),
            TightFamily::Mc { eps } => gen_mc_tight(eps),
        }
    }
}

fn default_mechanisms() -> Vec<MechanismId> {
    vec![MechanismId::ConditionalMedian, MechanismId::ZhaoSc, MechanismId::ZhaoMc]
}

fn default_objectives() -> Vec<Objective> {
    Objective::ALL.to_vec()
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub random: Option<RandomBatch>,
    #[serde(default)]
    pub tight: Vec<TightFamily>,
    #[serde(default = "default_mechanisms")]
    pub mechanisms: Vec<MechanismId>,
    #[serde(default = "default_objectives")]
    pub objectives: Vec<Objective>,
    /// Audit conditional-median on every instance with the exact verifier.
    #[serde(default = "yes")]
    pub audit_strategyproofness: bool,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self, ExperimentError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Instances in report order: tightness families first, then the random
    /// batch with seeds `seed, seed + 1, ...`.
    pub fn instances(&self) -> Result<Vec<(String, Instance)>, ExperimentError> {
        let mut out = Vec::new();
        for fam in &self.tight {
            out.push((fam.id(), fam.build()?));
        }
        if let Some(batch) = &self.random {
            batch.generator.validate()?;
            for k in 0..batch.count as u64 {
                let seed = batch.generator.seed.wrapping_add(k);
                out.push((format!("random-{seed}"), gen_random(&batch.generator.with_seed(seed))?));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance_id: String,
    pub mechanism: MechanismId,
    pub case_tag: CaseTag,
    pub n_agents: usize,
    #[serde(flatten)]
    pub record: RatioRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub mechanism: MechanismId,
    pub objective: Objective,
    pub count: usize,
    /// Max and mean of [`RatioRecord::score`] (UNIT counts as 1).
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub unit_count: usize,
    pub violation_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoundDeviation {
    pub instance_id: String,
    #[serde(flatten)]
    pub deviation: Deviation,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpAudits {
    pub instances_audited: usize,
    pub probes: usize,
    pub deviations_found: usize,
    pub deviations: Vec<FoundDeviation>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<SummaryRow>,
    pub sp_audits: SpAudits,
    /// Human-readable description of every VIOLATION flag and bound breach.
    pub breaches: Vec<String>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.breaches.is_empty() && self.sp_audits.deviations_found == 0
    }
}

/// Proven upper bound for a mechanism on an objective, if one is checked.
/// The baseline bounds apply only to the objective each baseline targets.
pub fn ratio_bound(mechanism: MechanismId, objective: Objective, case_tag: CaseTag, n: usize) -> Option<f64> {
    match (mechanism, objective) {
        (MechanismId::ConditionalMedian, Objective::Sc) if case_tag.is_case1() => Some(7.0),
        (MechanismId::ConditionalMedian, Objective::Sc) => Some(11.0),
        (MechanismId::ConditionalMedian, Objective::Mc) => Some(5.0),
        (MechanismId::ZhaoSc, Objective::Sc) => Some(2.0 * n as f64 + 1.0),
        (MechanismId::ZhaoMc, Objective::Mc) => Some(9.0),
        _ => None,
    }
}

struct InstanceResult {
    records: Vec<ExperimentRecord>,
    audit: Option<(usize, Vec<Deviation>)>,
}

fn run_instance(config: &ExperimentConfig, id: &str, instance: &Instance) -> InstanceResult {
    let mut records = Vec::with_capacity(config.mechanisms.len() * config.objectives.len());
    for &mechanism in &config.mechanisms {
        for &objective in &config.objectives {
            let (outcome, record) = evaluate(instance, mechanism, objective);
            records.push(ExperimentRecord {
                instance_id: id.to_owned(),
                mechanism,
                case_tag: outcome.case_tag,
                n_agents: instance.len(),
                record,
            });
        }
    }
    let audit = config.audit_strategyproofness.then(|| {
        let r = verify_strategyproof_with(instance, MechanismId::ConditionalMedian);
        (r.probe_count, r.deviations)
    });
    InstanceResult { records, audit }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let instances = config.instances()?;
    let results: Vec<InstanceResult> = instances.par_iter().map(|(id, inst)| run_instance(config, id, inst)).collect();

    let mut report = ExperimentReport::default();
    for ((id, _), res) in instances.iter().zip(results) {
        if let Some((probes, deviations)) = res.audit {
            report.sp_audits.instances_audited += 1;
            report.sp_audits.probes += probes;
            report.sp_audits.deviations_found += deviations.len();
            report
                .sp_audits
                .deviations
                .extend(deviations.into_iter().map(|deviation| FoundDeviation { instance_id: id.clone(), deviation }));
        }
        report.records.extend(res.records);
    }

    for r in &report.records {
        if r.record.flag == RatioFlag::Violation {
            report.breaches.push(format!(
                "{} {} {}: VIOLATION (mechanism cost {} with zero optimum)",
                r.instance_id, r.mechanism, r.record.objective, r.record.mechanism_cost
            ));
        } else if let Some(bound) = ratio_bound(r.mechanism, r.record.objective, r.case_tag, r.n_agents) {
            let score = r.record.score();
            if score > bound + BOUND_TOL {
                report.breaches.push(format!(
                    "{} {} {} ({}): ratio {score} exceeds bound {bound}",
                    r.instance_id, r.mechanism, r.record.objective, r.case_tag
                ));
            }
        }
    }
    report.summary = summarize(&report.records, &config.mechanisms, &config.objectives);
    Ok(report)
}

pub fn summarize(
    records: &[ExperimentRecord],
    mechanisms: &[MechanismId],
    objectives: &[Objective],
) -> Vec<SummaryRow> {
    let mut rows = Vec::new();
    for &mechanism in mechanisms {
        for &objective in objectives {
            let sel: Vec<&RatioRecord> = records
                .iter()
                .filter(|r| r.mechanism == mechanism && r.record.objective == objective)
                .map(|r| &r.record)
                .collect();
            if sel.is_empty() {
                continue;
            }
            let scores = sel.iter().map(|r| r.score());
            rows.push(SummaryRow {
                mechanism,
                objective,
                count: sel.len(),
                max_ratio: scores.clone().fold(f64::NEG_INFINITY, f64::max),
                mean_ratio: scores.sum::<f64>() / sel.len() as f64,
                unit_count: sel.iter().filter(|r| r.flag == RatioFlag::Unit).count(),
                violation_count: sel.iter().filter(|r| r.flag == RatioFlag::Violation).count(),
            });
        }
    }
    rows
}

pub const CSV_HEADER: [&str; 8] =
    ["instance_id", "mechanism", "objective", "mech_cost", "opt_cost", "ratio", "flag", "case_tag"];

pub fn write_csv<W: std::io::Write>(records: &[ExperimentRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.mechanism.to_string(),
            r.record.objective.to_string(),
            r.record.mechanism_cost.to_string(),
            r.record.optimal_cost.to_string(),
            r.record.ratio.map(|x| x.to_string()).unwrap_or_default(),
            r.record.flag.as_str().to_owned(),
            r.case_tag.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `report.json` and `records.csv` into `out_dir`, creating it.
pub fn write_report(report: &ExperimentReport, out_dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(report)?)?;
    write_csv(&report.records, fs::File::create(out_dir.join("records.csv"))?)?;
    Ok(())
}

/// Loads the config at `config_path`, runs it, and writes the report files.
pub fn run_experiment_file(config_path: &Path, out_dir: &Path) -> Result<ExperimentReport, ExperimentError> {
    let text = fs::read_to_string(config_path)
        .map_err(|source| ExperimentError::Read { path: config_path.display().to_string(), source })?;
    let config = ExperimentConfig::from_json(&text)?;
    let report = run_experiment(&config)?;
    write_report(&report, out_dir)?;
    Ok(report)
}
