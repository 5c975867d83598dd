use thiserror::Error;

use super::report::{Cell, CheckReport, CheckVerdict, Observed};
use super::Settings;
use crate::evidence::Evidence;
use crate::kernel::{execute, CallOutcome, Verdict, World};
use crate::machine::Machine;

/// `action` makes `verifier` accept in `world` for every seed.
pub fn check_conformity(verifier: &Machine, action: &Machine, world: &World, settings: &Settings) -> bool {
    settings
        .seeds
        .iter()
        .all(|&s| execute(verifier, action, world.with_seed(s), settings.budget).accepted())
}

/// Conformity of `action` over every world of `evidence`.
pub fn conformity_report(verifier: &Machine, action: &Machine, evidence: &Evidence, settings: &Settings) -> CheckReport {
    let mut report = CheckReport::new(CheckVerdict::Holds);
    for w in &evidence.worlds {
        for &seed in &settings.seeds {
            let r = execute(verifier, action, w.world.with_seed(seed), settings.budget);
            report.cells += 1;
            report.used(r.transcript.steps);
            if !r.accepted() {
                report.fail(Cell {
                    world: w.label.clone(),
                    action: action.id().into(),
                    seed,
                    target_tape: None,
                    expected: Observed::Verdict(Verdict::Accept),
                    got: Observed::Verdict(r.transcript.verdict),
                });
                return report;
            }
        }
    }
    report
}

/// The exemplar is accepted in every world and seed, and every call it
/// makes to the respondent produces output.
pub fn check_demonstrability(
    verifier: &Machine,
    exemplar: &Machine,
    evidence: &Evidence,
    settings: &Settings,
) -> CheckReport {
    let mut report = CheckReport::new(CheckVerdict::Holds);
    for w in &evidence.worlds {
        for &seed in &settings.seeds {
            let r = execute(verifier, exemplar, w.world.with_seed(seed), settings.budget);
            report.cells += 1;
            report.used(r.transcript.steps);
            let cell = |expected, got| Cell {
                world: w.label.clone(),
                action: exemplar.id().into(),
                seed,
                target_tape: None,
                expected,
                got,
            };
            let silent = r
                .transcript
                .respondent_calls(w.world.respondent.id())
                .find(|e| matches!(e.outcome, CallOutcome::Absent | CallOutcome::NoSuchMethod));
            if let Some(e) = silent {
                let call = format!("{}.{}", e.callee, e.method);
                let got = match e.outcome {
                    CallOutcome::NoSuchMethod => Observed::Failed(format!("no such method {call}")),
                    _ => Observed::Absent { call: call.clone() },
                };
                report.fail(cell(Observed::Value(crate::value::Value::Null), got));
                report.notes.push(format!("respondent call {call} produced no output"));
                return report;
            }
            if !r.accepted() {
                report.fail(cell(
                    Observed::Verdict(Verdict::Accept),
                    Observed::Verdict(r.transcript.verdict),
                ));
                return report;
            }
        }
    }
    report
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonotonicityError {
    #[error("{strong} is not at least as strong as {weak}")]
    PreconditionViolated { strong: String, weak: String },
}

/// For `strong ⪰ weak`: demonstrability, and conformity of each action in
/// `family`, never hold on `weak` while failing on `strong`.
pub fn check_monotonicity(
    verifier: &Machine,
    exemplar: &Machine,
    family: &[Machine],
    weak: &Evidence,
    strong: &Evidence,
    settings: &Settings,
) -> Result<CheckReport, MonotonicityError> {
    if !strong.at_least_as_strong(weak) {
        return Err(MonotonicityError::PreconditionViolated {
            strong: strong.name.clone(),
            weak: weak.name.clone(),
        });
    }
    let mut report = CheckReport::new(CheckVerdict::Holds);
    let d_weak = check_demonstrability(verifier, exemplar, weak, settings);
    let d_strong = check_demonstrability(verifier, exemplar, strong, settings);
    report.cells += d_weak.cells + d_strong.cells;
    report.used(d_weak.budget_used.max(d_strong.budget_used));
    if d_weak.holds() && !d_strong.holds() {
        report.notes.push(format!("demonstrability degrades from {} to {}", weak.name, strong.name));
        report.fail(d_strong.counterexample.expect("failing report has a cell"));
        return Ok(report);
    }
    for a in family {
        let c_weak = conformity_report(verifier, a, weak, settings);
        let c_strong = conformity_report(verifier, a, strong, settings);
        report.cells += c_weak.cells + c_strong.cells;
        if c_weak.holds() && !c_strong.holds() {
            report.notes.push(format!("conformity of {} degrades", a.id()));
            report.fail(c_strong.counterexample.expect("failing report has a cell"));
            return Ok(report);
        }
    }
    Ok(report)
}
