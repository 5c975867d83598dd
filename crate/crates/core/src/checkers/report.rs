use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::Verdict;
use crate::machine::ExecError;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckVerdict {
    Holds,
    Fails,
    HypothesisViolated,
}

impl CheckVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Holds => "Holds",
            Self::Fails => "Fails",
            Self::HypothesisViolated => "HypothesisViolated",
        }
    }
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One side of a cell comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observed {
    Value(Value),
    Verdict(Verdict),
    /// A respondent call that produced no output.
    Absent { call: String },
    Failed(String),
}

impl Observed {
    pub fn from_result(r: Result<Value, ExecError>) -> Self {
        match r {
            Ok(v) => Observed::Value(v),
            Err(e) => Observed::Failed(e.to_string()),
        }
    }
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Value(v) => write!(f, "{v}"),
            Observed::Verdict(v) => write!(f, "{v:?}"),
            Observed::Absent { call } => write!(f, "absent from {call}"),
            Observed::Failed(e) => write!(f, "error: {e}"),
        }
    }
}

/// A `(world, action, seed)` cell and what was compared there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub world: String,
    pub action: String,
    pub seed: u64,
    /// Tape override for the target, when the cell varies it.
    pub target_tape: Option<u64>,
    pub expected: Observed,
    pub got: Observed,
}

/// A candidate post-processor and the cell that defeats it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defeat {
    pub candidate: String,
    pub witness: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: CheckVerdict,
    pub counterexample: Option<Cell>,
    pub cells: usize,
    /// Largest step count of any single run.
    pub budget_used: u64,
    /// `world/action` pairs left out because the action does not conform.
    pub skipped: Vec<String>,
    pub defeats: Vec<Defeat>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(verdict: CheckVerdict) -> Self {
        Self {
            verdict,
            counterexample: None,
            cells: 0,
            budget_used: 0,
            skipped: Vec::new(),
            defeats: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == CheckVerdict::Holds
    }

    pub(crate) fn fail(&mut self, cell: Cell) {
        self.verdict = CheckVerdict::Fails;
        self.counterexample = Some(cell);
    }

    pub(crate) fn used(&mut self, steps: u64) {
        self.budget_used = self.budget_used.max(steps);
    }
}
