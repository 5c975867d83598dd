use super::report::{Cell, CheckReport, CheckVerdict, Observed};
use super::Settings;
use crate::evidence::Evidence;
use crate::kernel::{execute, run_post, run_target, ExecutionResult};
use crate::machine::Machine;

/// Everything an entailment check quantifies over.
#[derive(Clone, Copy, Debug)]
pub struct EntailmentSetup<'a> {
    pub verifier: &'a Machine,
    pub target: &'a Machine,
    pub post: &'a Machine,
    pub evidence: &'a Evidence,
    pub family: &'a [Machine],
}

/// For every world, conforming action and seed, the post-processor run on
/// the post-execution world and transcript equals the target run on the
/// pre-execution world under the same tapes. Actions that do not conform in
/// a world are skipped there and listed in the report.
pub fn check_entailment(setup: &EntailmentSetup<'_>, settings: &Settings) -> CheckReport {
    let mut report = CheckReport::new(CheckVerdict::Holds);
    for w in &setup.evidence.worlds {
        for a in setup.family {
            let runs: Vec<(u64, ExecutionResult)> = settings
                .seeds
                .iter()
                .map(|&s| (s, execute(setup.verifier, a, w.world.with_seed(s), settings.budget)))
                .collect();
            for (_, r) in &runs {
                report.used(r.transcript.steps);
            }
            if !runs.iter().all(|(_, r)| r.accepted()) {
                report.skipped.push(format!("{}/{}", w.label, a.id()));
                continue;
            }
            for (seed, r) in runs {
                report.cells += 1;
                let pre = w.world.with_seed(seed);
                let got = Observed::from_result(run_post(setup.post, r.post_world, &r.transcript, settings.budget));
                let expected = Observed::from_result(run_target(setup.target, pre, settings.budget));
                if got != expected || matches!(got, Observed::Failed(_)) {
                    report.fail(Cell {
                        world: w.label.clone(),
                        action: a.id().into(),
                        seed,
                        target_tape: None,
                        expected,
                        got,
                    });
                    return report;
                }
            }
        }
    }
    if !report.skipped.is_empty() {
        report
            .notes
            .push(format!("skipped non-conforming: {}", report.skipped.join(", ")));
    }
    report
}

/// First cell where entailment breaks, if any.
pub fn search_counterexample(setup: &EntailmentSetup<'_>, settings: &Settings) -> Option<Cell> {
    check_entailment(setup, settings).counterexample
}

/// Recompute a cell directly through the kernel: `(expected, got)`.
pub fn replay_cell(setup: &EntailmentSetup<'_>, cell: &Cell, budget: u64) -> Option<(Observed, Observed)> {
    let w = setup.evidence.world(&cell.world)?;
    let a = setup.family.iter().find(|a| a.id() == cell.action)?;
    let pre = w.world.with_seed(cell.seed);
    let r = execute(setup.verifier, a, pre.snapshot(), budget);
    let got = Observed::from_result(run_post(setup.post, r.post_world, &r.transcript, budget));
    let expected = Observed::from_result(run_target(setup.target, pre, budget));
    Some((expected, got))
}
