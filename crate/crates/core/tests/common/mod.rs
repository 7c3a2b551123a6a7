#![allow(dead_code)]

use condmed::{Agent, Instance};
use proptest::prelude::*;

/// Instances on a quarter-unit grid so coincident positions, candidate
/// midpoints and median ties come up often.
pub fn grid_instance(max_agents: usize, max_candidates: usize) -> impl Strategy<Value = Instance> {
    let cands = prop::collection::btree_set(0i32..=40, 2..=max_candidates);
    let agents = prop::collection::vec((-4i32..=44, 0u8..3), 1..=max_agents);
    (cands, agents).prop_map(|(c, a)| {
        let candidates = c.into_iter().map(|v| v as f64 * 0.25).collect();
        let agents = a
            .into_iter()
            .map(|(x, kind)| {
                let x = x as f64 * 0.25;
                match kind {
                    0 => Agent::only_f1(x),
                    1 => Agent::only_f2(x),
                    _ => Agent::both(x),
                }
            })
            .collect();
        Instance::new(candidates, agents).expect("valid by construction")
    })
}

/// Instances with continuous coordinates.
pub fn real_instance(max_agents: usize, max_candidates: usize) -> impl Strategy<Value = Instance> {
    let cands = prop::collection::vec(0.0f64..10.0, 2..=max_candidates);
    let agents = prop::collection::vec((-1.0f64..11.0, 0u8..3), 1..=max_agents);
    (cands, agents).prop_filter_map("distinct candidates", |(c, a)| {
        let agents = a
            .into_iter()
            .map(|(x, kind)| match kind {
                0 => Agent::only_f1(x),
                1 => Agent::only_f2(x),
                _ => Agent::both(x),
            })
            .collect();
        Instance::new(c, agents).ok()
    })
}

pub fn any_instance(max_agents: usize, max_candidates: usize) -> impl Strategy<Value = Instance> {
    prop_oneof![grid_instance(max_agents, max_candidates), real_instance(max_agents, max_candidates)]
}
