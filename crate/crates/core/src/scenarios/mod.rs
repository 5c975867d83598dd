//! The scenario registry.
//!
//! A scenario bundles one or more cases. Each case carries its evidence
//! variants, the verifier and exemplar, the target and post-processor, the
//! action family entailment quantifies over, candidate post-processors for
//! the impossibility probes, and the verdicts the case is expected to give.

pub mod audit;
pub mod common;
pub mod decommit;
pub mod deniable;
pub mod hash;
pub mod hybrid;
pub mod otp_table;
mod params;
pub mod password;
pub mod two_factor;
pub mod unknown_goal;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::checkers::{
    check_demonstrability, check_entailment, check_monotonicity, conformity_report,
    probe_random_target, probe_unknown_goal, CheckReport, CheckVerdict, EntailmentSetup, MonotonicityError,
    RandomProbe, Settings, UnknownGoalProbe,
};
use crate::evidence::{Evidence, EvidenceError};
use crate::machine::Machine;

pub use audit::{audit_registry, audit_scenario, crypto_sweeps, sample_monotonicity, AuditEntry, AuditSummary};
pub use params::{ConfigError, Overrides, ParamKind, ParamSpec, ParamValue, Params};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvidenceKey {
    Weak,
    Strong,
    Star,
}

impl EvidenceKey {
    pub const ALL: [EvidenceKey; 3] = [EvidenceKey::Weak, EvidenceKey::Strong, EvidenceKey::Star];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Weak => "weak",
            Self::Strong => "strong",
            Self::Star => "star",
        }
    }
}

impl FromStr for EvidenceKey {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown evidence {s:?} (expected weak, strong or star)"))
    }
}

impl fmt::Display for EvidenceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Demonstrability,
    Conformity,
    Entailment,
    Counterexample,
    Monotonicity,
    ProbeUnknownGoal,
    ProbeRandom,
    AuditAll,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Demonstrability,
        CheckKind::Conformity,
        CheckKind::Entailment,
        CheckKind::Counterexample,
        CheckKind::Monotonicity,
        CheckKind::ProbeUnknownGoal,
        CheckKind::ProbeRandom,
        CheckKind::AuditAll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Demonstrability => "demonstrability",
            Self::Conformity => "conformity",
            Self::Entailment => "entailment",
            Self::Counterexample => "counterexample",
            Self::Monotonicity => "monotonicity",
            Self::ProbeUnknownGoal => "probe-unknown-goal",
            Self::ProbeRandom => "probe-random",
            Self::AuditAll => "audit-all",
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A counterexample cell pinned by an expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellRef {
    pub world: String,
    pub action: String,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Expectation {
    pub check: CheckKind,
    pub evidence: EvidenceKey,
    pub verdict: CheckVerdict,
    pub cell: Option<CellRef>,
    pub citation: String,
}

impl Expectation {
    pub fn new(check: CheckKind, evidence: EvidenceKey, verdict: CheckVerdict, citation: &str) -> Self {
        Self {
            check,
            evidence,
            verdict,
            cell: None,
            citation: citation.into(),
        }
    }

    pub fn at_cell(mut self, world: &str, action: &str, seed: u64) -> Self {
        self.cell = Some(CellRef {
            world: world.into(),
            action: action.into(),
            seed,
        });
        self
    }

    /// Does `report` meet this expectation?
    pub fn matches(&self, report: &CheckReport) -> bool {
        if report.verdict != self.verdict {
            return false;
        }
        match (&self.cell, &report.counterexample) {
            (None, _) => true,
            (Some(want), Some(got)) => {
                want.world == got.world && want.action == got.action && want.seed == got.seed
            }
            (Some(_), None) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub evidence: BTreeMap<EvidenceKey, Evidence>,
    pub verifier: Machine,
    pub exemplar: Machine,
    pub target: Machine,
    pub post: Machine,
    pub family: Vec<Machine>,
    pub candidate_posts: Vec<Machine>,
    /// World the randomness probe fixes.
    pub random_world: Option<String>,
    /// `(stronger, weaker)` pairs.
    pub edges: Vec<(EvidenceKey, EvidenceKey)>,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("case {case} has no {key} evidence")]
    MissingEvidence { case: String, key: EvidenceKey },
    #[error("check {check} does not apply to case {case}")]
    NotApplicable { case: String, check: CheckKind },
    #[error(transparent)]
    Monotonicity(#[from] MonotonicityError),
}

impl Case {
    pub fn new(label: &str, verifier: Machine, exemplar: Machine, target: Machine, post: Machine) -> Self {
        Self {
            label: label.into(),
            evidence: BTreeMap::new(),
            verifier,
            exemplar,
            target,
            post,
            family: Vec::new(),
            candidate_posts: Vec::new(),
            random_world: None,
            edges: Vec::new(),
            expectations: Vec::new(),
        }
    }

    pub fn evidence(&self, key: EvidenceKey) -> Result<&Evidence, RunError> {
        self.evidence.get(&key).ok_or_else(|| RunError::MissingEvidence {
            case: self.label.clone(),
            key,
        })
    }

    pub fn entailment_setup(&self, key: EvidenceKey) -> Result<EntailmentSetup<'_>, RunError> {
        Ok(EntailmentSetup {
            verifier: &self.verifier,
            target: &self.target,
            post: &self.post,
            evidence: self.evidence(key)?,
            family: &self.family,
        })
    }

    /// Run one check. `AuditAll` runs every expectation of the case.
    pub fn run(&self, check: CheckKind, key: EvidenceKey, settings: &Settings) -> Result<CheckReport, RunError> {
        let not_applicable = || RunError::NotApplicable {
            case: self.label.clone(),
            check,
        };
        match check {
            CheckKind::Demonstrability => Ok(check_demonstrability(
                &self.verifier,
                &self.exemplar,
                self.evidence(key)?,
                settings,
            )),
            CheckKind::Conformity => Ok(conformity_report(
                &self.verifier,
                &self.exemplar,
                self.evidence(key)?,
                settings,
            )),
            CheckKind::Entailment | CheckKind::Counterexample => {
                Ok(check_entailment(&self.entailment_setup(key)?, settings))
            }
            CheckKind::Monotonicity => {
                if self.edges.is_empty() {
                    return Err(not_applicable());
                }
                let mut total = CheckReport::new(CheckVerdict::Holds);
                for (strong, weak) in &self.edges {
                    let r = check_monotonicity(
                        &self.verifier,
                        &self.exemplar,
                        &self.family,
                        self.evidence(*weak)?,
                        self.evidence(*strong)?,
                        settings,
                    )?;
                    total.cells += r.cells;
                    total.budget_used = total.budget_used.max(r.budget_used);
                    total.notes.push(format!("{strong} ⪰ {weak}: {}", r.verdict));
                    if !r.holds() && total.holds() {
                        total.verdict = r.verdict;
                        total.counterexample = r.counterexample;
                    }
                }
                Ok(total)
            }
            CheckKind::ProbeUnknownGoal => {
                if self.candidate_posts.is_empty() {
                    return Err(not_applicable());
                }
                Ok(probe_unknown_goal(
                    &UnknownGoalProbe {
                        verifier: &self.verifier,
                        exemplar: &self.exemplar,
                        target: &self.target,
                        evidence: self.evidence(key)?,
                        candidates: &self.candidate_posts,
                    },
                    settings,
                ))
            }
            CheckKind::ProbeRandom => {
                let e = self.evidence(key)?;
                let label = self.random_world.as_deref().ok_or_else(not_applicable)?;
                let world = e.world(label).ok_or_else(not_applicable)?;
                if self.candidate_posts.is_empty() {
                    return Err(not_applicable());
                }
                Ok(probe_random_target(
                    &RandomProbe {
                        verifier: &self.verifier,
                        exemplar: &self.exemplar,
                        target: &self.target,
                        world,
                        candidates: &self.candidate_posts,
                        seed: settings.seeds.first().copied().unwrap_or(0),
                    },
                    settings,
                ))
            }
            CheckKind::AuditAll => {
                let mut total = CheckReport::new(CheckVerdict::Holds);
                for exp in &self.expectations {
                    let r = self.run(exp.check, exp.evidence, settings)?;
                    total.cells += r.cells;
                    total.budget_used = total.budget_used.max(r.budget_used);
                    let ok = exp.matches(&r);
                    total.notes.push(format!(
                        "{} {} {}: {} (expected {}){}",
                        self.label,
                        exp.check,
                        exp.evidence,
                        r.verdict,
                        exp.verdict,
                        if ok { "" } else { " MISMATCH" }
                    ));
                    if !ok && total.holds() {
                        total.verdict = CheckVerdict::Fails;
                        total.counterexample = r.counterexample;
                    }
                }
                Ok(total)
            }
        }
    }

    /// The expectation for `(check, key)`, if declared.
    pub fn expectation(&self, check: CheckKind, key: EvidenceKey) -> Option<&Expectation> {
        self.expectations
            .iter()
            .find(|e| e.check == check && e.evidence == key)
    }

    /// Self-consistency audit of every evidence variant.
    pub fn audit_evidence(&self) -> Result<(), EvidenceError> {
        for e in self.evidence.values() {
            e.audit()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub citation: String,
    pub cases: Vec<Case>,
}

impl Scenario {
    pub fn case(&self, label: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.label == label)
    }

    /// `"name"` for single-case scenarios, `"name/case"` otherwise.
    pub fn qualified(&self, case: &Case) -> String {
        if self.cases.len() == 1 {
            self.name.clone()
        } else {
            format!("{}/{}", self.name, case.label)
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Evidence(#[from] EvidenceError),
    #[error("scenario {0}: {1}")]
    Invalid(String, String),
}

pub type Builder = fn(&Params) -> Result<Scenario, ScenarioError>;

#[derive(Clone, Copy)]
pub struct ScenarioDef {
    pub name: &'static str,
    pub citation: &'static str,
    pub params: &'static [ParamSpec],
    pub build: Builder,
}

impl fmt::Debug for ScenarioDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScenarioDef").field("name", &self.name).finish()
    }
}

impl ScenarioDef {
    /// Build with `params` and run the evidence self-consistency audit.
    pub fn load(&self, params: &Params) -> Result<Scenario, ScenarioError> {
        let s = (self.build)(params)?;
        for c in &s.cases {
            c.audit_evidence()?;
        }
        Ok(s)
    }
}

pub fn registry() -> Vec<ScenarioDef> {
    vec![
        password::DEF,
        deniable::DEF,
        hybrid::DEF,
        two_factor::DEF,
        hash::DEF,
        decommit::DEF,
        otp_table::DEF,
        unknown_goal::DEF,
    ]
}

pub fn find(name: &str) -> Option<ScenarioDef> {
    registry().into_iter().find(|d| d.name == name)
}
