use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::reductions::{ReductionTrace, StepKind, TraceStep};

/// Discrete-log oracle used for prime-order subproblems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DlogOracle {
    #[default]
    Bsgs,
    Rho,
    Brute,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub oracle: DlogOracle,
    /// Cap on the number of steps of any explicit orbit or cycle walk.
    pub max_walk: u64,
    /// Cap on baby-step table entries.
    pub bsgs_mem: u64,
    pub seed: u64,
    /// Largest automorphism order accepted by the small-order solver.
    pub small_order_bound: u128,
    /// Largest power `k` tried when looking for an inner `σ^k`.
    pub max_inner_power: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            oracle: DlogOracle::Bsgs,
            max_walk: 1 << 24,
            bsgs_mem: 1 << 26,
            seed: 0,
            small_order_bound: 1 << 10,
            max_inner_power: 64,
        }
    }
}

/// Configuration plus the reduction trace collected while solving.
#[derive(Debug, Default)]
pub struct Ctx {
    pub config: Config,
    steps: Mutex<Vec<TraceStep>>,
    depth: AtomicUsize,
    next_id: AtomicUsize,
}

impl Ctx {
    pub fn new(config: Config) -> Self {
        Self { config, ..Default::default() }
    }

    pub fn cfg(&self) -> &Config {
        &self.config
    }

    /// Records a step and returns the id assigned to its sub-instance.
    pub fn record(&self, kind: StepKind, detail: impl Into<String>) -> usize {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let step = TraceStep {
            depth: self.depth.load(Ordering::Relaxed),
            id,
            kind,
            detail: detail.into(),
        };
        self.steps.lock().expect("trace lock").push(step);
        id
    }

    /// Runs `f` one nesting level deeper in the trace.
    pub fn nested<T>(&self, f: impl FnOnce() -> T) -> T {
        self.depth.fetch_add(1, Ordering::Relaxed);
        let out = f();
        self.depth.fetch_sub(1, Ordering::Relaxed);
        out
    }

    pub fn trace(&self) -> ReductionTrace {
        ReductionTrace { steps: self.steps.lock().expect("trace lock").clone() }
    }

    /// Seed derived from the configured seed and a per-call salt.
    pub fn seed(&self, salt: u64) -> u64 {
        self.config.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}
