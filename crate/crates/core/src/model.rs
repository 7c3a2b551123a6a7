//! Domain model: agents on the line, candidate locations, two-facility
//! solutions, and the cost functions every mechanism and oracle shares.
//!
//! An agent's cost is the distance to the *farthest* facility it approves.
//! Instances are validated on construction, so code holding an [`Instance`]
//! can rely on at least two sorted, distinct, finite candidates and at least
//! one agent, each approving one or both facilities.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance between two points on the line.
#[inline]
pub fn distance(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Agent {
    pub x: f64,
    #[serde(rename = "f1")]
    pub approves_f1: bool,
    #[serde(rename = "f2")]
    pub approves_f2: bool,
}

impl Agent {
    pub fn new(x: f64, approves_f1: bool, approves_f2: bool) -> Self {
        Self { x, approves_f1, approves_f2 }
    }

    pub fn only_f1(x: f64) -> Self {
        Self::new(x, true, false)
    }

    pub fn only_f2(x: f64) -> Self {
        Self::new(x, false, true)
    }

    pub fn both(x: f64) -> Self {
        Self::new(x, true, true)
    }

    /// Max-variant cost of this agent, standing at `at`, for facilities at
    /// `y1` and `y2`. Unapproved facilities are ignored.
    #[inline]
    pub fn cost_from(&self, at: f64, solution: Solution) -> f64 {
        let c1 = if self.approves_f1 { distance(at, solution.y1) } else { 0.0 };
        let c2 = if self.approves_f2 { distance(at, solution.y2) } else { 0.0 };
        c1.max(c2)
    }

    /// Cost at the agent's own position.
    #[inline]
    pub fn cost(&self, solution: Solution) -> f64 {
        self.cost_from(self.x, solution)
    }
}

/// Locations of F1 and F2. Feasibility against an instance is checked by
/// [`Instance::check_solution`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub y1: f64,
    pub y2: f64,
}

impl Solution {
    pub fn new(y1: f64, y2: f64) -> Self {
        Self { y1, y2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Objective {
    #[serde(alias = "sc")]
    Sc,
    #[serde(alias = "mc")]
    Mc,
}

impl Objective {
    pub const ALL: [Objective; 2] = [Objective::Sc, Objective::Mc];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Sc => "SC",
            Objective::Mc => "MC",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" | "social" | "social-cost" => Ok(Objective::Sc),
            "mc" | "max" | "max-cost" => Ok(Objective::Mc),
            _ => Err(Error::UnknownObjective(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    candidates: Vec<f64>,
    agents: Vec<Agent>,
}

/// Candidate locations plus agents. The complete input to a mechanism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    candidates: Vec<f64>,
    agents: Vec<Agent>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.candidates, raw.agents)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance { candidates: inst.candidates, agents: inst.agents }
    }
}

impl Instance {
    /// Validates and builds an instance. Candidates may come in any order and
    /// are sorted; duplicates are rejected rather than merged.
    pub fn new(mut candidates: Vec<f64>, agents: Vec<Agent>) -> Result<Self> {
        if let Some(pos) = candidates.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("candidate {pos}")));
        }
        if candidates.len() < 2 {
            return Err(Error::TooFewCandidates(candidates.len()));
        }
        candidates.sort_by(f64::total_cmp);
        if let Some(w) = candidates.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCandidate(w[0]));
        }
        if agents.is_empty() {
            return Err(Error::NoAgents);
        }
        for (i, a) in agents.iter().enumerate() {
            if !a.x.is_finite() {
                return Err(Error::NonFinite(format!("agent {i}")));
            }
            if !a.approves_f1 && !a.approves_f2 {
                return Err(Error::NoApproval(i));
            }
        }
        Ok(Self { candidates, agents })
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization is infallible")
    }

    /// Sorted, distinct candidate coordinates.
    pub fn candidates(&self) -> &[f64] {
        &self.candidates
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, index: usize) -> Result<&Agent> {
        self.agents.get(index).ok_or(Error::AgentIndex { index, len: self.agents.len() })
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn is_candidate(&self, y: f64) -> bool {
        self.candidates.contains(&y)
    }

    /// Copy of this instance with agent `index` reporting `x` instead.
    pub fn with_report(&self, index: usize, x: f64) -> Result<Self> {
        self.agent(index)?;
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("report of agent {index}")));
        }
        let mut out = self.clone();
        out.agents[index].x = x;
        Ok(out)
    }

    pub fn check_solution(&self, s: Solution) -> Result<()> {
        if s.y1 == s.y2 {
            return Err(Error::InfeasibleSolution {
                y1: s.y1,
                y2: s.y2,
                reason: "both facilities at the same location",
            });
        }
        if !self.is_candidate(s.y1) || !self.is_candidate(s.y2) {
            return Err(Error::InfeasibleSolution { y1: s.y1, y2: s.y2, reason: "location is not a candidate" });
        }
        Ok(())
    }

    /// Nearest candidate to `point`, skipping `excluded`. Infallible because a
    /// valid instance always has a second candidate.
    pub(crate) fn nearest(&self, point: f64, excluded: Option<f64>) -> f64 {
        nearest_in(&self.candidates, point, excluded).expect("instance has >= 2 candidates")
    }

    /// Leftmost candidate other than `occupied`.
    pub(crate) fn leftmost_free(&self, occupied: f64) -> f64 {
        *self.candidates.iter().find(|&&c| c != occupied).expect("instance has >= 2 candidates")
    }

    /// Unchecked objective evaluation for hot loops; callers guarantee
    /// feasibility.
    pub(crate) fn objective_unchecked(&self, objective: Objective, s: Solution) -> f64 {
        let costs = self.agents.iter().map(|a| a.cost(s));
        match objective {
            Objective::Sc => costs.sum(),
            Objective::Mc => costs.fold(0.0, f64::max),
        }
    }

    pub fn objective(&self, objective: Objective, s: Solution) -> Result<f64> {
        self.check_solution(s)?;
        Ok(self.objective_unchecked(objective, s))
    }
}

pub fn agent_cost(instance: &Instance, agent_index: usize, solution: Solution) -> Result<f64> {
    let agent = instance.agent(agent_index)?;
    instance.check_solution(solution)?;
    Ok(agent.cost(solution))
}

pub fn social_cost(instance: &Instance, solution: Solution) -> Result<f64> {
    instance.objective(Objective::Sc, solution)
}

pub fn max_cost(instance: &Instance, solution: Solution) -> Result<f64> {
    instance.objective(Objective::Mc, solution)
}

fn nearest_in(candidates: &[f64], point: f64, excluded: Option<f64>) -> Option<f64> {
    candidates
        .iter()
        .copied()
        .filter(|&c| Some(c) != excluded)
        .min_by(|&a, &b| distance(a, point).total_cmp(&distance(b, point)).then(a.total_cmp(&b)))
}

/// Candidate closest to `point`, ties going to the smaller coordinate.
/// With `excluded = Some(t)` where `t` is the closest candidate, this yields
/// the second-closest one.
pub fn nearest_candidate(candidates: &[f64], point: f64, excluded: Option<f64>) -> Result<f64> {
    if let Some(e) = excluded
        && !candidates.contains(&e)
    {
        return Err(Error::NotACandidate(e));
    }
    nearest_in(candidates, point, excluded).ok_or(Error::EmptyCandidateSet)
}

/// Order of agents used for every order statistic: position, then index.
pub(crate) fn position_order(agents: &[Agent], a: usize, b: usize) -> Ordering {
    agents[a].x.total_cmp(&agents[b].x).then(a.cmp(&b))
}

/// Left median of `index_set`: element `(k - 1) / 2` after sorting by
/// (position, index).
pub fn left_median(instance: &Instance, index_set: &[usize]) -> Result<usize> {
    if index_set.is_empty() {
        return Err(Error::EmptyAgentSet);
    }
    for &i in index_set {
        instance.agent(i)?;
    }
    Ok(left_median_unchecked(instance.agents(), index_set))
}

pub(crate) fn left_median_unchecked(agents: &[Agent], index_set: &[usize]) -> usize {
    let mut sorted = index_set.to_vec();
    let k = (sorted.len() - 1) / 2;
    let (_, median, _) = sorted.select_nth_unstable_by(k, |&a, &b| position_order(agents, a, b));
    *median
}

/// Leftmost agent of `index_set`, ties by index.
pub(crate) fn leftmost_unchecked(agents: &[Agent], index_set: &[usize]) -> usize {
    *index_set.iter().min_by(|&&a, &&b| position_order(agents, a, b)).expect("nonempty set")
}

/// The approval partition of the agents. Every list is sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AgentSetView {
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
    pub only_f1: Vec<usize>,
    pub only_f2: Vec<usize>,
    pub both: Vec<usize>,
}

pub fn agent_set_view(instance: &Instance) -> AgentSetView {
    let mut view = AgentSetView::default();
    for (i, a) in instance.agents().iter().enumerate() {
        if a.approves_f1 {
            view.n1.push(i);
        }
        if a.approves_f2 {
            view.n2.push(i);
        }
        match (a.approves_f1, a.approves_f2) {
            (true, true) => view.both.push(i),
            (true, false) => view.only_f1.push(i),
            (false, true) => view.only_f2.push(i),
            (false, false) => unreachable!("validated instance"),
        }
    }
    view
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-3;

    fn mc_tight() -> Instance {
        Instance::new(
            vec![0.0, 2.0, 6.0],
            vec![
                Agent::only_f1(1.0 + EPS),
                Agent::only_f1(1.0 + EPS),
                Agent::only_f1(1.0 + EPS),
                Agent::only_f2(1.0),
                Agent::only_f2(3.0 + EPS),
                Agent::only_f2(3.0 + EPS),
            ],
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(3.0, 5.0), 2.0);
        assert_eq!(distance(4.0, 4.0), 0.0);
        assert!(distance(1.0, 6.0) <= distance(1.0, 2.0) + distance(2.0, 6.0));
        assert_eq!(distance(1.0, 6.0), distance(1.0, 2.0) + distance(2.0, 6.0));
    }

    #[test]
    fn agent_cost_examples() {
        let inst = Instance::new(
            vec![-1.0, 1.0, 2.0, 4.0, 5.0, 6.0],
            vec![Agent::both(3.0), Agent::only_f1(0.0), Agent::only_f2(1.0)],
        )
        .unwrap();
        assert_eq!(agent_cost(&inst, 0, Solution::new(1.0, 5.0)).unwrap(), 2.0);
        assert_eq!(agent_cost(&inst, 1, Solution::new(4.0, -1.0)).unwrap(), 4.0);
        assert_eq!(agent_cost(&inst, 2, Solution::new(2.0, 6.0)).unwrap(), 5.0);
    }

    #[test]
    fn agent_cost_rejects_bad_input() {
        let inst = Instance::new(vec![0.0, 1.0], vec![Agent::both(0.0)]).unwrap();
        assert!(matches!(agent_cost(&inst, 3, Solution::new(0.0, 1.0)), Err(Error::AgentIndex { index: 3, len: 1 })));
        assert!(matches!(agent_cost(&inst, 0, Solution::new(1.0, 1.0)), Err(Error::InfeasibleSolution { .. })));
        assert!(matches!(agent_cost(&inst, 0, Solution::new(0.0, 0.5)), Err(Error::InfeasibleSolution { .. })));
    }

    #[test]
    fn social_and_max_cost_examples() {
        let single = Instance::new(vec![0.0, 1.0], vec![Agent::both(0.0)]).unwrap();
        assert_eq!(social_cost(&single, Solution::new(0.0, 1.0)).unwrap(), 1.0);

        let pair = Instance::new(vec![0.0, 5.0, 10.0], vec![Agent::only_f1(0.0), Agent::only_f1(10.0)]).unwrap();
        assert_eq!(social_cost(&pair, Solution::new(5.0, 0.0)).unwrap(), 10.0);

        let inst = mc_tight();
        assert_eq!(max_cost(&inst, Solution::new(2.0, 6.0)).unwrap(), 5.0);
        let no_eps =
            Instance::new(vec![0.0, 2.0, 6.0], inst.agents().iter().map(|a| Agent { x: a.x.round(), ..*a }).collect())
                .unwrap();
        assert_eq!(max_cost(&no_eps, Solution::new(0.0, 2.0)).unwrap(), 1.0);

        for &c in &[0.0, 2.0, 6.0] {
            let one = Instance::new(vec![0.0, 2.0, 6.0], vec![Agent::both(c)]).unwrap();
            for &c2 in &[0.0, 2.0, 6.0] {
                if c2 != c {
                    assert_eq!(max_cost(&one, Solution::new(c, c2)).unwrap(), distance(c, c2));
                }
            }
        }
    }

    #[test]
    fn nearest_candidate_examples() {
        let c = [0.0, 2.0, 6.0];
        assert_eq!(nearest_candidate(&c, 3.0 + EPS, None).unwrap(), 2.0);
        assert_eq!(nearest_candidate(&c, 3.0 + EPS, Some(2.0)).unwrap(), 6.0);
        assert_eq!(nearest_candidate(&[0.0, 10.0], 5.0, None).unwrap(), 0.0);
        assert_eq!(nearest_candidate(&[0.0, 10.0], 5.0, Some(0.0)).unwrap(), 10.0);
    }

    #[test]
    fn nearest_candidate_errors() {
        assert_eq!(nearest_candidate(&[], 1.0, None), Err(Error::EmptyCandidateSet));
        assert_eq!(nearest_candidate(&[3.0], 1.0, Some(3.0)), Err(Error::EmptyCandidateSet));
        assert_eq!(nearest_candidate(&[3.0, 4.0], 1.0, Some(7.0)), Err(Error::NotACandidate(7.0)));
    }

    #[test]
    fn left_median_examples() {
        let inst = mc_tight();
        let m = left_median(&inst, &[3, 4, 5]).unwrap();
        assert_eq!(inst.agents()[m].x, 3.0 + EPS);
        assert_eq!(m, 4);

        let single = Instance::new(vec![0.0, 1.0], vec![Agent::both(7.0)]).unwrap();
        assert_eq!(left_median(&single, &[0]).unwrap(), 0);

        let two = Instance::new(vec![0.0, 1.0], vec![Agent::both(10.0), Agent::both(0.0)]).unwrap();
        assert_eq!(left_median(&two, &[0, 1]).unwrap(), 1);

        assert_eq!(left_median(&two, &[]), Err(Error::EmptyAgentSet));
        assert!(matches!(left_median(&two, &[5]), Err(Error::AgentIndex { .. })));
    }

    #[test]
    fn left_median_ties_break_by_index() {
        let inst = Instance::new(vec![0.0, 1.0], vec![Agent::both(1.0); 4]).unwrap();
        assert_eq!(left_median(&inst, &[3, 2, 1, 0]).unwrap(), 1);
    }

    #[test]
    fn set_view_examples() {
        let one = Instance::new(vec![0.0, 1.0], vec![Agent::both(0.0)]).unwrap();
        let v = agent_set_view(&one);
        assert_eq!(v.both, vec![0]);
        assert!(v.only_f1.is_empty() && v.only_f2.is_empty());

        let v = agent_set_view(&mc_tight());
        assert_eq!((v.only_f1.len(), v.only_f2.len(), v.both.len()), (3, 3, 0));
    }

    #[test]
    fn instance_validation() {
        assert_eq!(Instance::new(vec![1.0], vec![Agent::both(0.0)]), Err(Error::TooFewCandidates(1)));
        assert_eq!(Instance::new(vec![1.0, 0.0, 1.0], vec![Agent::both(0.0)]), Err(Error::DuplicateCandidate(1.0)));
        assert_eq!(Instance::new(vec![0.0, 1.0], vec![]), Err(Error::NoAgents));
        assert_eq!(Instance::new(vec![0.0, 1.0], vec![Agent::new(0.0, false, false)]), Err(Error::NoApproval(0)));
        assert!(matches!(Instance::new(vec![0.0, f64::NAN], vec![Agent::both(0.0)]), Err(Error::NonFinite(_))));
        assert!(matches!(Instance::new(vec![0.0, 1.0], vec![Agent::both(f64::INFINITY)]), Err(Error::NonFinite(_))));
        let sorted = Instance::new(vec![6.0, 0.0, 2.0], vec![Agent::both(0.0)]).unwrap();
        assert_eq!(sorted.candidates(), &[0.0, 2.0, 6.0]);
    }

    #[test]
    fn json_format() {
        let json = r#"{"candidates": [2, 0], "agents": [{"x": 1.5, "f1": true, "f2": false}]}"#;
        let inst = Instance::from_json(json).unwrap();
        assert_eq!(inst.candidates(), &[0.0, 2.0]);
        assert_eq!(inst.agents()[0], Agent::only_f1(1.5));
        assert_eq!(inst.to_json(), r#"{"candidates":[0.0,2.0],"agents":[{"x":1.5,"f1":true,"f2":false}]}"#);

        for bad in [
            r#"{"candidates": [0], "agents": [{"x": 1, "f1": true, "f2": false}]}"#,
            r#"{"candidates": [0, 0], "agents": [{"x": 1, "f1": true, "f2": false}]}"#,
            r#"{"candidates": [0, 1], "agents": [{"x": 1, "f1": false, "f2": false}]}"#,
            r#"{"candidates": [0, 1], "agents": []}"#,
            r#"{"candidates": [0, 1e999], "agents": [{"x": 1, "f1": true, "f2": false}]}"#,
            r#"{"candidates": [0, 1], "agents": [{"x": 1, "f1": true}]}"#,
        ] {
            assert!(Instance::from_json(bad).is_err(), "accepted {bad}");
        }
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("sc".parse::<Objective>().unwrap(), Objective::Sc);
        assert_eq!("MC".parse::<Objective>().unwrap(), Objective::Mc);
        assert!("median".parse::<Objective>().is_err());
    }
}
