//! Constructive witnesses for the two impossibility results.
//!
//! Neither result can be decided outright: both quantify over every
//! verifier and every post-processor. The probes instead run the proof
//! construction against a finite list of candidate post-processors and
//! report `Holds` when each candidate is defeated by a concrete cell.

use std::collections::{BTreeMap, BTreeSet};

use super::report::{Cell, CheckReport, CheckVerdict, Defeat, Observed};
use super::Settings;
use crate::evidence::{Evidence, LabeledWorld};
use crate::kernel::{execute, run_post, run_target, Nature};
use crate::machine::Machine;
use crate::tape::TapeOverride;
use crate::value::Value;

/// Number of target tape settings the randomness probe tries.
pub const PROBE_TAPES: u64 = 16;

#[derive(Clone, Copy, Debug)]
pub struct UnknownGoalProbe<'a> {
    pub verifier: &'a Machine,
    pub exemplar: &'a Machine,
    pub target: &'a Machine,
    pub evidence: &'a Evidence,
    pub candidates: &'a [Machine],
}

/// Worlds sharing a nature whose respondents' languages have empty
/// intersection. The action built from the exemplar by emulating the first
/// respondent of such a group is accepted everywhere in the group and never
/// reaches the real respondent, so any post-processor's output is the same
/// across the group; some respondent's language must then exclude it.
pub fn probe_unknown_goal(p: &UnknownGoalProbe<'_>, settings: &Settings) -> CheckReport {
    let Some(group) = disjoint_group(p.evidence) else {
        let mut r = CheckReport::new(CheckVerdict::HypothesisViolated);
        r.notes.push("every group of respondents shares a language element".into());
        return r;
    };
    let mut report = CheckReport::new(CheckVerdict::Holds);
    let r0 = &group[0].world.respondent;
    let a0 = p.exemplar.emulating(r0);
    report
        .notes
        .push(format!("A_0 emulates {} with respondent {}", p.exemplar.id(), r0.id()));

    let mut runs = BTreeMap::new();
    for w in &group {
        for &seed in &settings.seeds {
            let r = execute(p.verifier, &a0, w.world.with_seed(seed), settings.budget);
            report.cells += 1;
            report.used(r.transcript.steps);
            if !r.accepted() {
                report.fail(Cell {
                    world: w.label.clone(),
                    action: "A_0".into(),
                    seed,
                    target_tape: None,
                    expected: Observed::Verdict(crate::kernel::Verdict::Accept),
                    got: Observed::Verdict(r.transcript.verdict),
                });
                report.notes.push("A_0 does not conform; the construction does not apply".into());
                return report;
            }
            runs.insert((w.label.clone(), seed), r);
        }
    }

    let seed0 = settings.seeds[0];
    for cand in p.candidates {
        let mut outputs: Vec<Vec<Observed>> = Vec::new();
        for w in &group {
            outputs.push(
                settings
                    .seeds
                    .iter()
                    .map(|&s| {
                        let r = &runs[&(w.label.clone(), s)];
                        Observed::from_result(run_post(cand, r.post_world.clone(), &r.transcript, settings.budget))
                    })
                    .collect(),
            );
        }
        if outputs.iter().any(|o| *o != outputs[0]) {
            report
                .notes
                .push(format!("{} output depends on the respondent", cand.id()));
            report.verdict = CheckVerdict::Fails;
            continue;
        }
        let x_star = outputs[0][0].clone();
        let defeat = group.iter().find_map(|w| {
            let lang = w.language.as_ref()?;
            let excluded = match &x_star {
                Observed::Value(v) => !lang.contains(v),
                _ => true,
            };
            if !excluded {
                return None;
            }
            let t = Observed::from_result(run_target(p.target, w.world.with_seed(seed0), settings.budget));
            let in_lang = matches!(&t, Observed::Value(v) if lang.contains(v));
            in_lang.then(|| Cell {
                world: w.label.clone(),
                action: "A_0".into(),
                seed: seed0,
                target_tape: None,
                expected: t,
                got: x_star.clone(),
            })
        });
        match defeat {
            Some(witness) => report.defeats.push(Defeat {
                candidate: cand.id().into(),
                witness,
            }),
            None => {
                report.notes.push(format!("{} is not defeated", cand.id()));
                report.verdict = CheckVerdict::Fails;
            }
        }
    }
    if report.holds() {
        report.counterexample = report.defeats.first().map(|d| d.witness.clone());
    }
    report
}

fn disjoint_group(e: &Evidence) -> Option<Vec<&LabeledWorld>> {
    let mut groups: Vec<(&Nature, Vec<&LabeledWorld>)> = Vec::new();
    for w in e.worlds.iter().filter(|w| w.language.is_some()) {
        match groups.iter_mut().find(|(n, _)| **n == w.world.nature) {
            Some((_, g)) => g.push(w),
            None => groups.push((&w.world.nature, vec![w])),
        }
    }
    groups.into_iter().map(|(_, g)| g).find(|g| {
        let mut langs = g.iter().map(|w| w.language.clone().unwrap_or_default());
        let first: BTreeSet<Value> = langs.next().unwrap_or_default();
        langs.fold(first, |acc, l| &acc & &l).is_empty()
    })
}

#[derive(Clone, Copy, Debug)]
pub struct RandomProbe<'a> {
    pub verifier: &'a Machine,
    pub exemplar: &'a Machine,
    pub target: &'a Machine,
    pub world: &'a LabeledWorld,
    pub candidates: &'a [Machine],
    pub seed: u64,
}

/// With the world and every other tape fixed, and the action's and
/// post-processor's tapes pinned to zeros, the target's own tape still moves
/// its output between at least two values. A post-processor's output cannot
/// follow it, so some target tape disagrees with each candidate.
pub fn probe_random_target(p: &RandomProbe<'_>, settings: &Settings) -> CheckReport {
    let mut base = p
        .world
        .world
        .assignment
        .with_seed(p.seed)
        .with_override(p.exemplar.id(), TapeOverride::Zeros);
    for c in p.candidates {
        base = base.with_override(c.id(), TapeOverride::Zeros);
    }
    let at = |t: u64| {
        p.world
            .world
            .with_assignment(base.clone().with_override(p.target.id(), TapeOverride::Seed(t)))
    };

    let targets: Vec<Observed> = (0..PROBE_TAPES)
        .map(|t| Observed::from_result(run_target(p.target, at(t), settings.budget)))
        .collect();
    let support: BTreeSet<String> = targets.iter().map(|o| o.to_string()).collect();
    if support.len() < 2 {
        let mut r = CheckReport::new(CheckVerdict::HypothesisViolated);
        r.notes.push(format!("target support has size {} over {PROBE_TAPES} tapes", support.len()));
        return r;
    }

    let mut report = CheckReport::new(CheckVerdict::Holds);
    report.notes.push(format!("target support size {}", support.len()));
    let runs: Vec<_> = (0..PROBE_TAPES)
        .map(|t| execute(p.verifier, p.exemplar, at(t), settings.budget))
        .collect();
    for (t, r) in runs.iter().enumerate() {
        report.cells += 1;
        report.used(r.transcript.steps);
        if !r.accepted() {
            report.fail(Cell {
                world: p.world.label.clone(),
                action: format!("{}[zeros]", p.exemplar.id()),
                seed: p.seed,
                target_tape: Some(t as u64),
                expected: Observed::Verdict(crate::kernel::Verdict::Accept),
                got: Observed::Verdict(r.transcript.verdict),
            });
            report.notes.push("zero-tape exemplar does not conform".into());
            return report;
        }
    }
    for cand in p.candidates {
        let defeat = runs.iter().enumerate().find_map(|(t, r)| {
            let got = Observed::from_result(run_post(cand, r.post_world.clone(), &r.transcript, settings.budget));
            (got != targets[t]).then(|| Cell {
                world: p.world.label.clone(),
                action: format!("{}[zeros]", p.exemplar.id()),
                seed: p.seed,
                target_tape: Some(t as u64),
                expected: targets[t].clone(),
                got,
            })
        });
        match defeat {
            Some(witness) => report.defeats.push(Defeat {
                candidate: cand.id().into(),
                witness,
            }),
            None => {
                report.notes.push(format!("{} is not defeated", cand.id()));
                report.verdict = CheckVerdict::Fails;
            }
        }
    }
    if report.holds() {
        report.counterexample = report.defeats.first().map(|d| d.witness.clone());
    }
    report
}
