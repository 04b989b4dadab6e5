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
pub struct IlsParams {
    /// `N1`: outer iterations.
    pub outer_limit: u64,
    /// `N`: hill-climbing trials per outer iteration.
    pub inner_budget: u64,
    /// `L`: outer iterations without improvement before stopping.
    pub stall_limit: u64,
    pub budget: Budget,
    pub checkpoints: Vec<f64>,
    pub seed: u64,
    pub moves: MoveSettings,
}

impl IlsParams {
    pub fn from_config(config: &Config, budget: Budget, seed: u64) -> Self {
        let s = &config.ils;
        Self {
            outer_limit: s.outer_limit,
            inner_budget: s.inner_budget,
            stall_limit: s.stall_limit,
            budget,
            checkpoints: Vec::new(),
            seed,
            moves: config.moves.clone(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.inner_budget == 0 {
            return Err(Error::InvalidParams("inner_budget must be at least 1".into()));
        }
        Ok(())
    }
}

enum Step<T> {
    Go(T),
    Stop(StopReason),
}

/// Greedy start followed by iterated local search: perturb the current
/// solution with one random move, hill-climb from there for `N` trials and
/// keep the result if it beats the current solution.
pub fn iterated_local_search(instance: &Instance, params: &IlsParams) -> Result<RunResult> {
    iterated_local_search_observed(instance, params, &mut |_| {})
}

/// Like [`iterated_local_search`], calling `observer` at every checkpoint as it is passed.
pub fn iterated_local_search_observed(
    instance: &Instance,
    params: &IlsParams,
    observer: &mut dyn FnMut(&CheckpointRecord),
) -> Result<RunResult> {
    params.check()?;
    let config = Config {
        moves: params.moves.clone(),
        ..Config::default()
    };
    let mut r = rng::from_seed(rng::sub_seed(params.seed, 0x15));
    let mut x0 = initial_solution_with(instance, params.seed, &config)?;
    let mut tracker = Tracker::new("ils", params.seed, params.budget, params.checkpoints.clone(), x0.value.total, observer);
    tracker.tick(x0.value.total);

    // One candidate from `from`, counted against the budget.
    let mut trial = |from: &crate::construct::Solution, tracker: &mut Tracker| -> Result<Step<Option<crate::construct::Solution>>> {
        if tracker.exhausted() {
            return Ok(Step::Stop(StopReason::Budget));
        }
        let mv = match random_move(instance, from, &params.moves, &mut r) {
            Ok(mv) => mv,
            Err(Error::NoApplicableMove) => return Ok(Step::Stop(StopReason::NoApplicableMove)),
            Err(e) => return Err(e),
        };
        tracker.propose(mv.kind());
        let cand = neighbour(instance, from, &mv, &params.moves, r.random())?;
        match &cand {
            Some(c) if c.value.total > from.value.total => tracker.accept(mv.kind()),
            Some(_) => {}
            None => tracker.discard(),
        }
        Ok(Step::Go(cand))
    };

    let (mut outer, mut lk) = (0u64, 0u64);
    let stop = 'outer: loop {
        if outer >= params.outer_limit {
            break StopReason::OuterLimit;
        }
        if lk >= params.stall_limit {
            break StopReason::Stalled;
        }
        let mut x1 = match trial(&x0, &mut tracker)? {
            Step::Go(c) => c.unwrap_or_else(|| x0.clone()),
            Step::Stop(s) => break s,
        };
        tracker.tick(x0.value.total);
        for _ in 0..params.inner_budget {
            match trial(&x1, &mut tracker)? {
                Step::Go(Some(x2)) if x2.value.total > x1.value.total => x1 = x2,
                Step::Go(_) => {}
                Step::Stop(s) => {
                    if x1.value.total > x0.value.total {
                        x0 = x1;
                    }
                    break 'outer s;
                }
            }
            tracker.tick(x0.value.total.max(x1.value.total));
        }
        if x1.value.total > x0.value.total {
            x0 = x1;
            lk = 0;
        } else {
            lk += 1;
        }
        outer += 1;
        tracker.tick(x0.value.total);
    };
    let trace = tracker.finish(stop, x0.value.total);
    Ok(RunResult { best: x0, trace })
}
