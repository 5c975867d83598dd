//! Decision procedures over evidence families.
//!
//! Every check enumerates `(world, action, seed)` cells in declaration order
//! (worlds, then actions, then seeds), so the first failing cell is the same
//! regardless of how the work is scheduled.

mod conformity;
mod entailment;
mod probes;
mod report;

pub use conformity::{check_conformity, check_demonstrability, check_monotonicity, conformity_report, MonotonicityError};
pub use entailment::{check_entailment, replay_cell, search_counterexample, EntailmentSetup};
pub use probes::{probe_random_target, probe_unknown_goal, RandomProbe, UnknownGoalProbe, PROBE_TAPES};
pub use report::{Cell, CheckReport, CheckVerdict, Defeat, Observed};

use crate::kernel::DEFAULT_BUDGET;

/// Seeds and step budget shared by every check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub seeds: Vec<u64>,
    pub budget: u64,
}

impl Settings {
    pub fn new(seeds: Vec<u64>, budget: u64) -> Self {
        Self { seeds, budget }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seeds: (0..16).collect(),
            budget: DEFAULT_BUDGET,
        }
    }
}
