//! Deterministic mechanisms mapping reported positions (plus the public
//! approval profile) to a pair of distinct candidate locations.
//!
//! [`conditional_median`] is the strategyproof mechanism this crate is built
//! around. The two `zhao_*` baselines are the earlier case-split mechanisms
//! it is compared against, and [`mean_strawman`] is a deliberately
//! manipulable mechanism used to check that the strategyproofness verifier
//! can actually find deviations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Solution, agent_set_view, left_median_unchecked, leftmost_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "Case1-NoCollision")]
    Case1NoCollision,
    #[serde(rename = "Case1-Collision")]
    Case1Collision,
    #[serde(rename = "Case2")]
    Case2,
    #[serde(rename = "Baseline-Intersect")]
    BaselineIntersect,
    #[serde(rename = "Baseline-Disjoint")]
    BaselineDisjoint,
    #[serde(rename = "Strawman")]
    Strawman,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1NoCollision => "Case1-NoCollision",
            CaseTag::Case1Collision => "Case1-Collision",
            CaseTag::Case2 => "Case2",
            CaseTag::BaselineIntersect => "Baseline-Intersect",
            CaseTag::BaselineDisjoint => "Baseline-Disjoint",
            CaseTag::Strawman => "Strawman",
        }
    }

    pub fn is_case1(self) -> bool {
        matches!(self, CaseTag::Case1NoCollision | CaseTag::Case1Collision)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanismOutcome {
    pub solution: Solution,
    pub case_tag: CaseTag,
    /// True when F2 had strictly more approvers and took the role of F1.
    pub swapped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MechanismId {
    #[serde(rename = "conditional-median")]
    ConditionalMedian,
    #[serde(rename = "zhao-sc")]
    ZhaoSc,
    #[serde(rename = "zhao-mc")]
    ZhaoMc,
    #[serde(rename = "mean-strawman")]
    MeanStrawman,
}

impl MechanismId {
    pub const ALL: [MechanismId; 4] =
        [MechanismId::ConditionalMedian, MechanismId::ZhaoSc, MechanismId::ZhaoMc, MechanismId::MeanStrawman];

    pub fn as_str(self) -> &'static str {
        match self {
            MechanismId::ConditionalMedian => "conditional-median",
            MechanismId::ZhaoSc => "zhao-sc",
            MechanismId::ZhaoMc => "zhao-mc",
            MechanismId::MeanStrawman => "mean-strawman",
        }
    }

    pub fn run(self, instance: &Instance) -> MechanismOutcome {
        match self {
            MechanismId::ConditionalMedian => conditional_median(instance),
            MechanismId::ZhaoSc => zhao_sc_baseline(instance),
            MechanismId::ZhaoMc => zhao_mc_baseline(instance),
            MechanismId::MeanStrawman => mean_strawman(instance),
        }
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MechanismId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MechanismId::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| Error::UnknownMechanism(s.to_owned()))
    }
}

/// Which facility is placed first and which second.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    F1First,
    F2First,
}

impl Order {
    fn solution(self, first: f64, second: f64) -> Solution {
        match self {
            Order::F1First => Solution::new(first, second),
            Order::F2First => Solution::new(second, first),
        }
    }
}

/// Places the first facility at the candidate nearest `first_point`, then the
/// second at the free candidate nearest `second_point`. A facility nobody
/// approves gets the leftmost free candidate.
fn place_sequentially(
    instance: &Instance,
    order: Order,
    first_point: Option<f64>,
    second_point: Option<f64>,
) -> (Solution, bool) {
    let first = match first_point {
        Some(p) => instance.nearest(p, None),
        None => instance.candidates()[0],
    };
    let (second, collided) = match second_point {
        Some(p) => {
            let unconstrained = instance.nearest(p, None);
            if unconstrained == first { (instance.nearest(p, Some(first)), true) } else { (unconstrained, false) }
        }
        None => (instance.leftmost_free(first), false),
    };
    (order.solution(first, second), collided)
}

/// The Conditional-Median mechanism.
///
/// Let A be the facility with more approvers (F1 on ties) and B the other.
/// If at least as many agents approve only A as approve both, A goes to the
/// candidate nearest the left median of the A-only agents and B to the free
/// candidate nearest the left median of all B approvers. Otherwise both
/// facilities go to the nearest and second-nearest candidates of the left
/// median of the agents approving both.
pub fn conditional_median(instance: &Instance) -> MechanismOutcome {
    let view = agent_set_view(instance);
    let agents = instance.agents();
    let swapped = view.n2.len() > view.n1.len();
    let (order, only_a, n_b) =
        if swapped { (Order::F2First, &view.only_f2, &view.n1) } else { (Order::F1First, &view.only_f1, &view.n2) };

    if only_a.len() >= view.both.len() {
        // only_a is nonempty here: otherwise both would be nonempty too.
        let m_a = left_median_unchecked(agents, only_a);
        let m_b = (!n_b.is_empty()).then(|| agents[left_median_unchecked(agents, n_b)].x);
        let (solution, collided) = place_sequentially(instance, order, Some(agents[m_a].x), m_b);
        let case_tag = if collided { CaseTag::Case1Collision } else { CaseTag::Case1NoCollision };
        MechanismOutcome { solution, case_tag, swapped }
    } else {
        let m = agents[left_median_unchecked(agents, &view.both)].x;
        let t = instance.nearest(m, None);
        let s = instance.nearest(m, Some(t));
        MechanismOutcome { solution: order.solution(t, s), case_tag: CaseTag::Case2, swapped }
    }
}

/// Social-cost baseline. With some agent approving both facilities, both go
/// to the two candidates nearest the left median of all agents. Otherwise
/// the majority facility is placed first near the median of its approvers,
/// then the other at the nearest free candidate to the median of its own.
pub fn zhao_sc_baseline(instance: &Instance) -> MechanismOutcome {
    let view = agent_set_view(instance);
    let agents = instance.agents();
    if !view.both.is_empty() {
        let all: Vec<usize> = (0..agents.len()).collect();
        let m = agents[left_median_unchecked(agents, &all)].x;
        let t = instance.nearest(m, None);
        let s = instance.nearest(m, Some(t));
        return MechanismOutcome {
            solution: Solution::new(t, s),
            case_tag: CaseTag::BaselineIntersect,
            swapped: false,
        };
    }
    let median = |set: &[usize]| (!set.is_empty()).then(|| agents[left_median_unchecked(agents, set)].x);
    let swapped = view.n2.len() > view.n1.len();
    let (order, first, second) = if swapped {
        (Order::F2First, median(&view.n2), median(&view.n1))
    } else {
        (Order::F1First, median(&view.n1), median(&view.n2))
    };
    let (solution, _) = place_sequentially(instance, order, first, second);
    MechanismOutcome { solution, case_tag: CaseTag::BaselineDisjoint, swapped }
}

/// Max-cost baseline: same shape as [`zhao_sc_baseline`] with the leftmost
/// agent of each set as the designated agent and F1 placed first in the
/// disjoint case (unless nobody approves F1).
pub fn zhao_mc_baseline(instance: &Instance) -> MechanismOutcome {
    let view = agent_set_view(instance);
    let agents = instance.agents();
    if !view.both.is_empty() {
        let all: Vec<usize> = (0..agents.len()).collect();
        let m = agents[leftmost_unchecked(agents, &all)].x;
        let t = instance.nearest(m, None);
        let s = instance.nearest(m, Some(t));
        return MechanismOutcome {
            solution: Solution::new(t, s),
            case_tag: CaseTag::BaselineIntersect,
            swapped: false,
        };
    }
    let leftmost = |set: &[usize]| (!set.is_empty()).then(|| agents[leftmost_unchecked(agents, set)].x);
    let swapped = view.n1.is_empty();
    let (order, first, second) = if swapped {
        (Order::F2First, leftmost(&view.n2), None)
    } else {
        (Order::F1First, leftmost(&view.n1), leftmost(&view.n2))
    };
    let (solution, _) = place_sequentially(instance, order, first, second);
    MechanismOutcome { solution, case_tag: CaseTag::BaselineDisjoint, swapped }
}

/// F1 at the candidate nearest the mean report of its approvers, F2 at the
/// free candidate nearest the mean of its approvers. Manipulable.
pub fn mean_strawman(instance: &Instance) -> MechanismOutcome {
    let view = agent_set_view(instance);
    let agents = instance.agents();
    let mean =
        |set: &[usize]| (!set.is_empty()).then(|| set.iter().map(|&i| agents[i].x).sum::<f64>() / set.len() as f64);
    let swapped = view.n1.is_empty();
    let (order, first, second) =
        if swapped { (Order::F2First, mean(&view.n2), None) } else { (Order::F1First, mean(&view.n1), mean(&view.n2)) };
    let (solution, _) = place_sequentially(instance, order, first, second);
    MechanismOutcome { solution, case_tag: CaseTag::Strawman, swapped }
}
