use super::moves::MoveKind;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// When a run stops. Iteration budgets count candidate solutions and make a
/// run reproducible; wall-clock budgets do not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Iterations(u64),
    Seconds(f64),
}

impl Budget {
    fn is_wall(&self) -> bool {
        matches!(self, Budget::Seconds(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Budget,
    /// Temperature reached its floor.
    Cooled,
    /// Too many moves without improving the current solution.
    Stalled,
    /// Outer iteration limit reached.
    OuterLimit,
    NoApplicableMove,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    /// Checkpoint mark, in iterations or seconds like the budget.
    pub mark: f64,
    pub iterations: u64,
    pub best: f64,
    pub restarts: u64,
    pub accepted: BTreeMap<MoveKind, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: String,
    pub seed: u64,
    pub budget: Budget,
    pub initial: f64,
    pub best: f64,
    pub iterations: u64,
    pub restarts: u64,
    pub stop: StopReason,
    pub proposed: BTreeMap<MoveKind, u64>,
    pub accepted: BTreeMap<MoveKind, u64>,
    /// Candidates rejected because repair could not restore feasibility.
    pub discarded: u64,
    pub checkpoints: Vec<CheckpointRecord>,
    /// Present for wall-clock budgets only, so iteration runs serialize
    /// identically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

/// Bookkeeping shared by both drivers.
pub(crate) struct Tracker<'a> {
    pub trace: RunTrace,
    started: Instant,
    marks: Vec<f64>,
    next_mark: usize,
    observer: &'a mut dyn FnMut(&CheckpointRecord),
}

impl<'a> Tracker<'a> {
    pub fn new(
        algorithm: &str,
        seed: u64,
        budget: Budget,
        mut marks: Vec<f64>,
        initial: f64,
        observer: &'a mut dyn FnMut(&CheckpointRecord),
    ) -> Self {
        marks.sort_by(f64::total_cmp);
        marks.dedup();
        Self {
            trace: RunTrace {
                algorithm: algorithm.into(),
                seed,
                budget,
                initial,
                best: initial,
                iterations: 0,
                restarts: 0,
                stop: StopReason::Budget,
                proposed: BTreeMap::new(),
                accepted: BTreeMap::new(),
                discarded: 0,
                checkpoints: Vec::new(),
                seconds: None,
            },
            started: Instant::now(),
            marks,
            next_mark: 0,
            observer,
        }
    }

    fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    fn progress(&self) -> f64 {
        match self.trace.budget {
            Budget::Iterations(_) => self.trace.iterations as f64,
            Budget::Seconds(_) => self.elapsed().as_secs_f64(),
        }
    }

    pub fn exhausted(&self) -> bool {
        match self.trace.budget {
            Budget::Iterations(n) => self.trace.iterations >= n,
            Budget::Seconds(s) => self.elapsed().as_secs_f64() >= s,
        }
    }

    pub fn propose(&mut self, kind: MoveKind) {
        self.trace.iterations += 1;
        *self.trace.proposed.entry(kind).or_default() += 1;
    }

    pub fn accept(&mut self, kind: MoveKind) {
        *self.trace.accepted.entry(kind).or_default() += 1;
    }

    pub fn discard(&mut self) {
        self.trace.discarded += 1;
    }

    pub fn restart(&mut self) {
        self.trace.restarts += 1;
    }

    /// Records every checkpoint passed so far with the best value.
    pub fn tick(&mut self, best: f64) {
        self.trace.best = self.trace.best.max(best);
        let now = self.progress();
        while self.next_mark < self.marks.len() && now >= self.marks[self.next_mark] {
            let mark = self.marks[self.next_mark];
            self.record(mark);
            self.next_mark += 1;
        }
    }

    fn record(&mut self, mark: f64) {
        let seconds = self.trace.budget.is_wall().then(|| self.elapsed().as_secs_f64());
        self.trace.checkpoints.push(CheckpointRecord {
            mark,
            iterations: self.trace.iterations,
            best: self.trace.best,
            restarts: self.trace.restarts,
            accepted: self.trace.accepted.clone(),
            seconds,
        });
        (self.observer)(self.trace.checkpoints.last().expect("just pushed"));
    }

    /// Closes the run. Checkpoints the run did not live to see carry the
    /// final best.
    pub fn finish(mut self, stop: StopReason, best: f64) -> RunTrace {
        self.trace.best = self.trace.best.max(best);
        self.trace.stop = stop;
        while self.next_mark < self.marks.len() {
            let mark = self.marks[self.next_mark];
            self.record(mark);
            self.next_mark += 1;
        }
        if self.trace.budget.is_wall() {
            self.trace.seconds = Some(self.elapsed().as_secs_f64());
        }
        self.trace
    }
}
