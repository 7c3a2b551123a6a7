//! Instance generators: the two tightness families and seeded random draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Agent, Instance};

const MAX_CANDIDATE_REDRAWS: usize = 1000;

/// Social-cost tightness family on candidates {0, eps, 1, 1+eps}.
///
/// `n/3` agents approving only F1 and `n/3` approving only F2 sit at 0,
/// together with `n/6` agents approving both; another `n/6 + 1` agents
/// approving both sit at `1/2 + 2 eps`. That is `n + 1` agents in total.
pub fn gen_sc_tight(n: usize, eps: f64) -> Result<Instance> {
    if n < 12 || !n.is_multiple_of(12) {
        return Err(Error::InvalidParameter(format!("n must be a positive multiple of 12, got {n}")));
    }
    if !(eps > 0.0 && eps < 1.0 / (4.0 * n as f64)) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1/(4n)), got {eps}")));
    }
    let third = n / 3;
    let sixth = n / 6;
    let agents = std::iter::repeat_n(Agent::only_f1(0.0), third)
        .chain(std::iter::repeat_n(Agent::only_f2(0.0), third))
        .chain(std::iter::repeat_n(Agent::both(0.0), sixth))
        .chain(std::iter::repeat_n(Agent::both(0.5 + 2.0 * eps), sixth + 1))
        .collect();
    Instance::new(vec![0.0, eps, 1.0, 1.0 + eps], agents)
}

/// Max-cost tightness family on candidates {0, 2, 6}: three F1-only agents
/// at `1+eps`, one F2-only agent at 1 and two at `3+eps`.
pub fn gen_mc_tight(eps: f64) -> Result<Instance> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 0.1), got {eps}")));
    }
    let agents = vec![
        Agent::only_f1(1.0 + eps),
        Agent::only_f1(1.0 + eps),
        Agent::only_f1(1.0 + eps),
        Agent::only_f2(1.0),
        Agent::only_f2(3.0 + eps),
        Agent::only_f2(3.0 + eps),
    ];
    Instance::new(vec![0.0, 2.0, 6.0], agents)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    /// Inclusive range of agent counts.
    pub n_agents: [usize; 2],
    /// Inclusive range of candidate counts.
    pub n_candidates: [usize; 2],
    pub coordinate_range: [f64; 2],
    /// Probabilities of (only F1, only F2, both).
    pub approval_mix: [f64; 3],
    pub seed: u64,
    /// Snap every coordinate to a multiple of this step. Coarse grids produce
    /// the coincident positions that exercise tie-breaking.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<f64>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_agents: [1, 12],
            n_candidates: [2, 8],
            coordinate_range: [0.0, 10.0],
            approval_mix: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            seed: 0,
            grid: None,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let [a_lo, a_hi] = self.n_agents;
        if a_lo < 1 || a_lo > a_hi {
            return bad(format!("n_agents range {a_lo}..={a_hi} is empty or starts below 1"));
        }
        let [c_lo, c_hi] = self.n_candidates;
        if c_lo < 2 || c_lo > c_hi {
            return bad(format!("n_candidates range {c_lo}..={c_hi} is empty or starts below 2"));
        }
        let [lo, hi] = self.coordinate_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return bad(format!("coordinate range [{lo}, {hi}] is empty or non-finite"));
        }
        let mix = self.approval_mix;
        if mix.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return bad(format!("approval_mix {mix:?} has a negative or non-finite entry"));
        }
        if (mix.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return bad(format!("approval_mix {mix:?} does not sum to 1"));
        }
        if let Some(g) = self.grid {
            if !(g.is_finite() && g > 0.0) {
                return bad(format!("grid step {g} must be positive"));
            }
            let slots = ((hi - lo) / g).floor() as usize + 1;
            if slots < c_hi {
                return bad(format!("grid of {slots} points cannot hold {c_hi} distinct candidates"));
            }
        }
        Ok(())
    }

    pub(crate) fn draw_coordinate(&self, rng: &mut impl Rng) -> f64 {
        let [lo, hi] = self.coordinate_range;
        let x = rng.random_range(lo..=hi);
        match self.grid {
            Some(g) => (lo + ((x - lo) / g).round() * g).min(hi),
            None => x,
        }
    }

    pub(crate) fn draw_approval(&self, rng: &mut impl Rng) -> (bool, bool) {
        let [p1, p2, _] = self.approval_mix;
        let u: f64 = rng.random();
        if u < p1 {
            (true, false)
        } else if u < p1 + p2 {
            (false, true)
        } else if self.approval_mix[2] > 0.0 {
            (true, true)
        } else if p2 > 0.0 {
            // rounding spill past p1 + p2 when p_both is zero
            (false, true)
        } else {
            (true, false)
        }
    }
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws a random instance. Deterministic in `config.seed`.
pub fn gen_random(config: &GeneratorConfig) -> Result<Instance> {
    config.validate()?;
    let mut rng = rng_for(config.seed);
    gen_random_with(config, &mut rng)
}

pub(crate) fn gen_random_with(config: &GeneratorConfig, rng: &mut impl Rng) -> Result<Instance> {
    let k = rng.random_range(config.n_candidates[0]..=config.n_candidates[1]);
    let mut candidates: Vec<f64> = Vec::with_capacity(k);
    let mut redraws = 0;
    while candidates.len() < k {
        let c = config.draw_coordinate(rng);
        if candidates.contains(&c) {
            redraws += 1;
            if redraws > MAX_CANDIDATE_REDRAWS {
                return Err(Error::GeneratorExhausted(MAX_CANDIDATE_REDRAWS));
            }
            continue;
        }
        candidates.push(c);
    }
    let n = rng.random_range(config.n_agents[0]..=config.n_agents[1]);
    let agents = (0..n)
        .map(|_| {
            let x = config.draw_coordinate(rng);
            let (f1, f2) = config.draw_approval(rng);
            Agent::new(x, f1, f2)
        })
        .collect();
    Instance::new(candidates, agents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::agent_set_view;

    #[test]
    fn sc_tight_shape() {
        let inst = gen_sc_tight(12, 1e-3).unwrap();
        assert_eq!(inst.len(), 13);
        assert_eq!(inst.candidates(), &[0.0, 1e-3, 1.0, 1.0 + 1e-3]);
        let v = agent_set_view(&inst);
        assert_eq!((v.only_f1.len(), v.only_f2.len(), v.both.len()), (4, 4, 5));
    }

    #[test]
    fn sc_tight_rejects_bad_parameters() {
        assert!(gen_sc_tight(0, 1e-3).is_err());
        assert!(gen_sc_tight(18, 1e-3).is_err());
        assert!(gen_sc_tight(12, 0.0).is_err());
        assert!(gen_sc_tight(12, 1.0 / 48.0).is_err());
        assert!(gen_sc_tight(1200, 1e-3).is_err());
    }

    #[test]
    fn mc_tight_shape() {
        let inst = gen_mc_tight(1e-3).unwrap();
        assert_eq!(inst.candidates(), &[0.0, 2.0, 6.0]);
        assert_eq!(inst.len(), 6);
        assert!(gen_mc_tight(0.0).is_err());
        assert!(gen_mc_tight(0.1).is_err());
        assert!(gen_mc_tight(f64::NAN).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let cfg = GeneratorConfig { seed: 42, ..Default::default() };
        assert_eq!(gen_random(&cfg).unwrap(), gen_random(&cfg).unwrap());
        assert_eq!(gen_random(&cfg).unwrap().to_json(), gen_random(&cfg).unwrap().to_json());
        assert_ne!(gen_random(&cfg).unwrap(), gen_random(&cfg.with_seed(43)).unwrap());
    }

    #[test]
    fn only_f1_mix() {
        let cfg = GeneratorConfig { approval_mix: [1.0, 0.0, 0.0], ..Default::default() };
        for seed in 0..50 {
            let inst = gen_random(&cfg.with_seed(seed)).unwrap();
            assert!(inst.agents().iter().all(|a| a.approves_f1 && !a.approves_f2));
        }
    }

    #[test]
    fn grid_snaps_coordinates() {
        let cfg = GeneratorConfig { grid: Some(0.5), ..Default::default() };
        for seed in 0..50 {
            let inst = gen_random(&cfg.with_seed(seed)).unwrap();
            for x in inst.candidates().iter().chain(inst.agents().iter().map(|a| &a.x)) {
                assert_eq!((x * 2.0).fract(), 0.0);
            }
        }
    }

    #[test]
    fn config_validation() {
        let ok = GeneratorConfig::default();
        assert!(ok.validate().is_ok());
        let cases = [
            GeneratorConfig { n_agents: [0, 3], ..ok.clone() },
            GeneratorConfig { n_agents: [4, 3], ..ok.clone() },
            GeneratorConfig { n_candidates: [1, 3], ..ok.clone() },
            GeneratorConfig { coordinate_range: [1.0, 1.0], ..ok.clone() },
            GeneratorConfig { approval_mix: [0.5, 0.5, 0.5], ..ok.clone() },
            GeneratorConfig { approval_mix: [1.5, -0.5, 0.0], ..ok.clone() },
            GeneratorConfig { grid: Some(5.0), ..ok.clone() },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
            assert!(gen_random(&c).is_err());
        }
    }
}
