//! The worked tightness instances, evaluated end to end.

use serde::Serialize;

use super::generate::{gen_mc_tight, gen_sc_tight};
use crate::error::Result;
use crate::mechanism::{CaseTag, MechanismId};
use crate::model::{Instance, Objective, Solution};
use crate::oracle::{RatioRecord, evaluate};

#[derive(Debug, Clone, Serialize)]
pub struct TightnessRow {
    pub family: String,
    pub objective: Objective,
    pub limit: f64,
    pub mechanism_solution: Solution,
    pub case_tag: CaseTag,
    pub record: RatioRecord,
}

fn row(family: String, instance: &Instance, objective: Objective, limit: f64) -> TightnessRow {
    let (outcome, record) = evaluate(instance, MechanismId::ConditionalMedian, objective);
    TightnessRow { family, objective, limit, mechanism_solution: outcome.solution, case_tag: outcome.case_tag, record }
}

pub fn mc_tight_row(eps: f64) -> Result<TightnessRow> {
    Ok(row(format!("mc-tight eps={eps:e}"), &gen_mc_tight(eps)?, Objective::Mc, 5.0))
}

pub fn sc_tight_row(n: usize, eps: f64) -> Result<TightnessRow> {
    Ok(row(format!("sc-tight n={n} eps={eps:e}"), &gen_sc_tight(n, eps)?, Objective::Sc, 11.0))
}

/// Both families at the parameters used throughout the docs and tests.
pub fn paper_examples() -> Result<Vec<TightnessRow>> {
    let mut rows = vec![mc_tight_row(1e-3)?, sc_tight_row(12, 1e-3)?];
    for n in [12, 120, 1200] {
        rows.push(sc_tight_row(n, 1e-9)?);
    }
    Ok(rows)
}

pub fn format_table(rows: &[TightnessRow]) -> String {
    let mut out = format!(
        "{:<28} {:>3} {:>22} {:<18} {:>12} {:>22} {:>12} {:>10} {:>6}\n",
        "family", "obj", "mechanism (y1, y2)", "case", "mech cost", "optimum (y1, y2)", "opt cost", "ratio", "limit"
    );
    for r in rows {
        let ratio = r.record.ratio.map_or_else(|| r.record.flag.as_str().to_owned(), |x| format!("{x:.6}"));
        out.push_str(&format!(
            "{:<28} {:>3} {:>22} {:<18} {:>12.6} {:>22} {:>12.6} {:>10} {:>6}\n",
            r.family,
            r.objective.as_str(),
            format!("({}, {})", r.mechanism_solution.y1, r.mechanism_solution.y2),
            r.case_tag.as_str(),
            r.record.mechanism_cost,
            format!("({}, {})", r.record.opt_y1, r.record.opt_y2),
            r.record.optimal_cost,
            ratio,
            r.limit,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_has_one_line_per_row() {
        let rows = paper_examples().unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(format_table(&rows).lines().count(), 6);
    }
}
