//! Hill climbing over instances toward a mechanism's worst approximation
//! ratio.

use rand::Rng;
use rand::seq::IndexedRandom;
use serde::Serialize;

use super::generate::{GeneratorConfig, gen_random_with, rng_for};
use crate::error::Result;
use crate::mechanism::{MechanismId, MechanismOutcome};
use crate::model::{Agent, Instance, Objective};
use crate::oracle::{RatioFlag, RatioRecord, evaluate};

/// Iterations without improvement before restarting from a fresh random
/// instance. The best instance seen is kept across restarts.
const RESTART_PATIENCE: usize = 250;

/// Gains below this still move the walk but do not reset the patience
/// counter, so basins that only creep toward a supremum get abandoned.
const MIN_PROGRESS: f64 = 1e-4;

const SEARCH_SALT: u64 = 0x5eed_c11b_0000_0001;

/// Small instances with at least three candidates, where both the
/// collision geometry and the Case-2 structure are reachable by local moves.
pub fn default_search_config(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        n_agents: [2, 8],
        n_candidates: [3, 6],
        coordinate_range: [0.0, 10.0],
        approval_mix: [0.3, 0.3, 0.4],
        seed,
        grid: None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub instance: Instance,
    pub outcome: MechanismOutcome,
    pub record: RatioRecord,
    pub iterations: usize,
    pub accepted_moves: usize,
    pub restarts: usize,
}

struct Scored {
    instance: Instance,
    outcome: MechanismOutcome,
    record: RatioRecord,
}

impl Scored {
    fn new(instance: Instance, mechanism: MechanismId, objective: Objective) -> Self {
        let (outcome, record) = evaluate(&instance, mechanism, objective);
        Self { instance, outcome, record }
    }

    fn score(&self) -> f64 {
        self.record.score()
    }
}

/// Starts from `gen_random(config)` and applies random local moves (move an
/// agent, move a candidate, flip an approval bit). Moves that do not lower
/// the ratio are kept, so the walk can drift across plateaus; after
/// [`RESTART_PATIENCE`] moves without a gain of at least [`MIN_PROGRESS`] it
/// restarts from a fresh
/// random instance. Deterministic in `config.seed`.
pub fn hill_climb_worst_case(
    config: &GeneratorConfig,
    objective: Objective,
    mechanism: MechanismId,
    iterations: usize,
) -> Result<(Instance, RatioRecord)> {
    let r = hill_climb(config, objective, mechanism, iterations)?;
    Ok((r.instance, r.record))
}

pub fn hill_climb(
    config: &GeneratorConfig,
    objective: Objective,
    mechanism: MechanismId,
    iterations: usize,
) -> Result<SearchResult> {
    config.validate()?;
    let start = super::generate::gen_random(config)?;
    let mut rng = rng_for(config.seed ^ SEARCH_SALT);

    let mut current = Scored::new(start, mechanism, objective);
    let mut best = Scored { instance: current.instance.clone(), ..current };
    let mut stale = 0;
    let mut accepted_moves = 0;
    let mut restarts = 0;
    let mut done = 0;

    for _ in 0..iterations.max(1) {
        done += 1;
        if best.record.flag == RatioFlag::Violation {
            break;
        }
        if stale >= RESTART_PATIENCE {
            current = Scored::new(gen_random_with(config, &mut rng)?, mechanism, objective);
            restarts += 1;
            stale = 0;
        }
        let Some(candidate) = propose(&current.instance, config, &mut rng) else {
            stale += 1;
            continue;
        };
        let next = Scored::new(candidate, mechanism, objective);
        let gain = next.score() - current.score();
        if gain >= 0.0 {
            current = next;
            accepted_moves += 1;
            if current.score() > best.score() {
                best = Scored { instance: current.instance.clone(), ..current };
            }
        }
        if gain > MIN_PROGRESS {
            stale = 0;
        } else {
            stale += 1;
        }
    }

    Ok(SearchResult {
        instance: best.instance,
        outcome: best.outcome,
        record: best.record,
        iterations: done,
        accepted_moves,
        restarts,
    })
}

/// Perturbed position: a multi-scale step, or a snap onto a candidate, a
/// candidate midpoint, or another agent.
fn perturb(x: f64, instance: &Instance, config: &GeneratorConfig, rng: &mut impl Rng) -> f64 {
    let [lo, hi] = config.coordinate_range;
    let cands = instance.candidates();
    let span = hi - lo;
    let snapped = match rng.random_range(0..6) {
        0 => Some(*cands.choose(rng).expect("nonempty")),
        1 => {
            let a = *cands.choose(rng).expect("nonempty");
            let b = *cands.choose(rng).expect("nonempty");
            Some(a + (b - a) / 2.0)
        }
        2 => Some(instance.agents().choose(rng).expect("nonempty").x),
        3 => return config.draw_coordinate(rng),
        _ => None,
    };
    let y = match snapped {
        // land on or just beside the snap target
        Some(t) if rng.random_bool(0.5) => {
            t + rng.random_range(-1.0..=1.0) * span * 10f64.powf(-rng.random_range(2.0..6.0))
        }
        Some(t) => t,
        None => x + rng.random_range(-1.0..=1.0) * span * 10f64.powf(-rng.random_range(0.0..4.0)),
    };
    y.clamp(lo, hi)
}

fn propose(current: &Instance, config: &GeneratorConfig, rng: &mut impl Rng) -> Option<Instance> {
    let mut candidates = current.candidates().to_vec();
    let mut agents: Vec<Agent> = current.agents().to_vec();
    match rng.random_range(0..10) {
        0..=5 => {
            let i = rng.random_range(0..agents.len());
            agents[i].x = perturb(agents[i].x, current, config, rng);
        }
        6..=7 => {
            let j = rng.random_range(0..candidates.len());
            candidates[j] = perturb(candidates[j], current, config, rng);
        }
        _ => {
            let i = rng.random_range(0..agents.len());
            let a = &mut agents[i];
            if rng.random_bool(0.5) {
                a.approves_f1 = !a.approves_f1;
            } else {
                a.approves_f2 = !a.approves_f2;
            }
        }
    }
    Instance::new(candidates, agents).ok()
}
