//! Exact ground truth: brute-force optimal solutions, approximation ratios,
//! and an exhaustive single-agent deviation search.
//!
//! The deviation search relies on the mechanisms being piecewise constant in
//! any one agent's report. A report enters only through (a) its rank among
//! other reports, which can change only at other agents' positions, and
//! (b) which candidate is nearest or second-nearest to it, which can change
//! only at midpoints of candidate pairs. Probing every such breakpoint plus
//! one point inside each gap between them covers every distinct outcome.
//! The mean strawman violates (a), so for it the search is sound but not
//! exhaustive.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mechanism::{MechanismId, MechanismOutcome};
use crate::model::{Instance, Objective, Solution};

/// Tolerance for zero optima and for strict improvements.
pub const DELTA_TOL: f64 = 1e-9;

/// Returns the cheapest feasible pair under `objective`. Pairs are scanned in
/// lexicographic (y1, y2) order and only a strictly smaller cost replaces the
/// incumbent, so ties resolve to the lexicographically smallest pair.
pub fn optimal_solution(instance: &Instance, objective: Objective) -> (Solution, f64) {
    let cands = instance.candidates();
    let mut best: Option<(Solution, f64)> = None;
    for &y1 in cands {
        for &y2 in cands {
            if y1 == y2 {
                continue;
            }
            let s = Solution::new(y1, y2);
            let cost = instance.objective_unchecked(objective, s);
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((s, cost));
            }
        }
    }
    best.expect("instance has >= 2 candidates")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RatioFlag {
    Ok,
    /// Mechanism and optimum both cost (numerically) zero.
    Unit,
    /// Optimum is zero but the mechanism is not. Falsifies any ratio bound.
    Violation,
}

impl RatioFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioFlag::Ok => "OK",
            RatioFlag::Unit => "UNIT",
            RatioFlag::Violation => "VIOLATION",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub objective: Objective,
    #[serde(rename = "mech_cost")]
    pub mechanism_cost: f64,
    #[serde(rename = "opt_cost")]
    pub optimal_cost: f64,
    /// `None` whenever `flag` is not `Ok`.
    pub ratio: Option<f64>,
    pub flag: RatioFlag,
    #[serde(rename = "opt_y1")]
    pub opt_y1: f64,
    #[serde(rename = "opt_y2")]
    pub opt_y2: f64,
}

impl RatioRecord {
    pub fn optimal_solution(&self) -> Solution {
        Solution::new(self.opt_y1, self.opt_y2)
    }

    /// Ratio used when ranking records: UNIT counts as 1, VIOLATION as +inf.
    pub fn score(&self) -> f64 {
        match self.flag {
            RatioFlag::Ok => self.ratio.unwrap_or(f64::NAN),
            RatioFlag::Unit => 1.0,
            RatioFlag::Violation => f64::INFINITY,
        }
    }
}

/// Ratio of `solution` against the exact optimum. `solution` must be feasible.
pub fn ratio_of_solution(instance: &Instance, solution: Solution, objective: Objective) -> RatioRecord {
    let mechanism_cost = instance.objective_unchecked(objective, solution);
    let (opt, optimal_cost) = optimal_solution(instance, objective);
    let (ratio, flag) = if optimal_cost <= DELTA_TOL {
        if mechanism_cost <= DELTA_TOL { (None, RatioFlag::Unit) } else { (None, RatioFlag::Violation) }
    } else {
        (Some(mechanism_cost / optimal_cost), RatioFlag::Ok)
    };
    RatioRecord { objective, mechanism_cost, optimal_cost, ratio, flag, opt_y1: opt.y1, opt_y2: opt.y2 }
}

/// Runs `mechanism` and compares it with the optimum; the outcome is returned
/// too so callers can inspect the case that fired.
pub fn evaluate(instance: &Instance, mechanism: MechanismId, objective: Objective) -> (MechanismOutcome, RatioRecord) {
    let outcome = mechanism.run(instance);
    (outcome, ratio_of_solution(instance, outcome.solution, objective))
}

pub fn approximation_ratio(instance: &Instance, mechanism: &str, objective: Objective) -> Result<RatioRecord> {
    let id: MechanismId = mechanism.parse()?;
    Ok(evaluate(instance, id, objective).1)
}

/// Every position at which some mechanism's dependence on agent
/// `agent_index`'s report can change, plus one representative inside each
/// gap and one beyond each end. Sorted and deduplicated.
pub fn deviation_breakpoints(instance: &Instance, agent_index: usize) -> Result<Vec<f64>> {
    instance.agent(agent_index)?;
    let cands = instance.candidates();
    let mut points: Vec<f64> = instance
        .agents()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != agent_index)
        .map(|(_, a)| a.x)
        .chain(cands.iter().copied())
        .collect();
    for (i, &a) in cands.iter().enumerate() {
        for &b in &cands[i + 1..] {
            points.push(midpoint(a, b));
        }
    }
    sort_dedup(&mut points);

    let mut probes = Vec::with_capacity(2 * points.len() + 1);
    probes.push(points[0] - 1.0);
    for w in points.windows(2) {
        probes.push(w[0]);
        probes.push(midpoint(w[0], w[1]));
    }
    probes.push(*points.last().expect("nonempty"));
    probes.push(points.last().expect("nonempty") + 1.0);
    sort_dedup(&mut probes);
    Ok(probes)
}

fn midpoint(a: f64, b: f64) -> f64 {
    a + (b - a) / 2.0
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    #[serde(rename = "agent")]
    pub agent_index: usize,
    pub true_cost: f64,
    #[serde(rename = "report")]
    pub misreport: f64,
    #[serde(rename = "new_cost")]
    pub deviated_cost: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub deviations: Vec<Deviation>,
    pub probe_count: usize,
}

impl DeviationReport {
    pub fn is_strategyproof(&self) -> bool {
        self.deviations.is_empty()
    }
}

/// Tries every probe report for every agent and records each one that lowers
/// that agent's true cost by more than [`DELTA_TOL`].
pub fn verify_strategyproof_with(instance: &Instance, mechanism: MechanismId) -> DeviationReport {
    let truthful = mechanism.run(instance).solution;
    let mut report = DeviationReport::default();
    for (i, agent) in instance.agents().iter().enumerate() {
        let true_cost = agent.cost(truthful);
        let probes = deviation_breakpoints(instance, i).expect("index in range");
        report.probe_count += probes.len();
        for p in probes {
            let lied = instance.with_report(i, p).expect("finite probe");
            let deviated_cost = agent.cost(mechanism.run(&lied).solution);
            if deviated_cost < true_cost - DELTA_TOL {
                report.deviations.push(Deviation { agent_index: i, true_cost, misreport: p, deviated_cost });
            }
        }
    }
    report
}

pub fn verify_strategyproof(instance: &Instance, mechanism: &str) -> Result<DeviationReport> {
    let id: MechanismId = mechanism.parse()?;
    Ok(verify_strategyproof_with(instance, id))
}
