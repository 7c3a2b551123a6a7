//! Strategyproof two-facility location on a line with candidate locations.
//!
//! Agents have private positions and public approvals over two facilities
//! F1 and F2. A solution puts the facilities on two distinct candidate
//! locations, and each agent pays its distance to the farthest facility it
//! approves. The crate provides:
//!
//! - [`model`]: instances, solutions, social and max cost, nearest-candidate
//!   and median queries;
//! - [`mechanism`]: the Conditional-Median mechanism plus baselines;
//! - [`oracle`]: brute-force optima, approximation ratios and an exact
//!   single-agent deviation search;
//! - [`harness`]: tightness families, random and adversarial instance
//!   generation, and the batch experiment runner behind the `condmed` CLI.
//!
//! ```
//! use condmed::{gen_mc_tight, conditional_median, Objective, oracle};
//!
//! let inst = gen_mc_tight(1e-3).unwrap();
//! let out = conditional_median(&inst);
//! assert_eq!((out.solution.y1, out.solution.y2), (2.0, 6.0));
//! let rec = oracle::approximation_ratio(&inst, "conditional-median", Objective::Mc).unwrap();
//! assert!(rec.ratio.unwrap() > 4.99);
//! ```

pub mod error;
pub mod harness;
pub mod mechanism;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use harness::{gen_mc_tight, gen_random, gen_sc_tight};
pub use mechanism::{
    CaseTag, MechanismId, MechanismOutcome, conditional_median, mean_strawman, zhao_mc_baseline, zhao_sc_baseline,
};
pub use model::{
    Agent, AgentSetView, Instance, Objective, Solution, agent_cost, agent_set_view, distance, left_median, max_cost,
    nearest_candidate, social_cost,
};
pub use oracle::{
    DELTA_TOL, Deviation, DeviationReport, RatioFlag, RatioRecord, approximation_ratio, deviation_breakpoints,
    optimal_solution, verify_strategyproof,
};
