use super::moves::{neighbour, random_move};
use super::trace::{Budget, CheckpointRecord, StopReason, Tracker};
use super::RunResult;
use crate::config::{Config, MoveSettings};
use crate::construct::initial_solution_with;
use crate::model::Instance;
use crate::{rng, Error, Result};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub t_initial: f64,
    pub t_min: f64,
    pub cooling_alpha: f64,
    /// `L`: moves without changing the current solution before stopping.
    pub stall_limit_current: u64,
    /// `LB`: moves without a new best before rebuilding the current solution.
    pub stall_limit_best: u64,
    pub budget: Budget,
    /// Checkpoint marks in the budget's unit.
    pub checkpoints: Vec<f64>,
    pub seed: u64,
    pub moves: MoveSettings,
}

impl SaParams {
    pub fn from_config(config: &Config, budget: Budget, seed: u64) -> Self {
        let s = &config.sa;
        Self {
            t_initial: s.t_initial,
            t_min: s.t_min,
            cooling_alpha: s.cooling_alpha,
            stall_limit_current: s.stall_limit_current,
            stall_limit_best: s.stall_limit_best,
            budget,
            checkpoints: Vec::new(),
            seed,
            moves: config.moves.clone(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.cooling_alpha > 0.0 && self.cooling_alpha < 1.0) {
            return Err(Error::InvalidParams("cooling_alpha must lie in (0, 1)".into()));
        }
        if !(self.t_min > 0.0 && self.t_min < self.t_initial) {
            return Err(Error::InvalidParams("t_min must be positive and below t_initial".into()));
        }
        Ok(())
    }
}

/// Probability of moving to a candidate `delta` better than the current
/// solution at temperature `t`.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    if delta > 0.0 {
        1.0
    } else {
        (delta / t).exp()
    }
}

/// One acceptance draw.
pub fn accepts(delta: f64, t: f64, r: &mut rng::Rng) -> bool {
    delta > 0.0 || r.random::<f64>() < acceptance_probability(delta, t)
}

/// Greedy start followed by simulated annealing with geometric cooling. The
/// current solution is rebuilt from scratch after `LB` moves without a new
/// best; the temperature carries over.
pub fn simulated_annealing(instance: &Instance, params: &SaParams) -> Result<RunResult> {
    simulated_annealing_observed(instance, params, &mut |_| {})
}

/// Like [`simulated_annealing`], calling `observer` at every checkpoint as it is passed.
pub fn simulated_annealing_observed(
    instance: &Instance,
    params: &SaParams,
    observer: &mut dyn FnMut(&CheckpointRecord),
) -> Result<RunResult> {
    params.check()?;
    let config = Config {
        moves: params.moves.clone(),
        ..Config::default()
    };
    let mut r = rng::from_seed(rng::sub_seed(params.seed, 0x5A));
    let mut x0 = initial_solution_with(instance, params.seed, &config)?;
    let mut best = x0.clone();
    let mut tracker = Tracker::new("sa", params.seed, params.budget, params.checkpoints.clone(), best.value.total, observer);
    let mut t = params.t_initial;
    let (mut lk, mut lbk) = (0u64, 0u64);
    tracker.tick(best.value.total);
    let stop = loop {
        if tracker.exhausted() {
            break StopReason::Budget;
        }
        if t <= params.t_min {
            break StopReason::Cooled;
        }
        if lk >= params.stall_limit_current {
            break StopReason::Stalled;
        }
        let mv = match random_move(instance, &x0, &params.moves, &mut r) {
            Ok(mv) => mv,
            Err(Error::NoApplicableMove) => break StopReason::NoApplicableMove,
            Err(e) => return Err(e),
        };
        tracker.propose(mv.kind());
        let moved = match neighbour(instance, &x0, &mv, &params.moves, r.random())? {
            Some(x1) => {
                let delta = x1.value.total - x0.value.total;
                let take = accepts(delta, t, &mut r);
                if take {
                    x0 = x1;
                }
                take
            }
            None => {
                tracker.discard();
                false
            }
        };
        if moved {
            tracker.accept(mv.kind());
            lk = 0;
            if x0.value.total > best.value.total {
                best = x0.clone();
                lbk = 0;
            } else {
                lbk += 1;
            }
        } else {
            lk += 1;
            lbk += 1;
        }
        t *= params.cooling_alpha;
        if lbk >= params.stall_limit_best {
            tracker.restart();
            let seed = rng::sub_seed(params.seed, 0x1000 + tracker.trace.restarts);
            x0 = initial_solution_with(instance, seed, &config)?;
            if x0.value.total > best.value.total {
                best = x0.clone();
            }
            lbk = 0;
        }
        tracker.tick(best.value.total);
    };
    let trace = tracker.finish(stop, best.value.total);
    Ok(RunResult { best, trace })
}
