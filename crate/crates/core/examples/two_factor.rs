//! Two-factor unlock: the exemplar fetches the code from a second device
//! whose location only the respondent knows.

use foregone::checkers::Settings;
use foregone::kernel::{execute, DEFAULT_BUDGET};
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};

fn main() {
    let s = find("two-factor").unwrap().load(&Params::new()).unwrap();
    let case = &s.cases[0];
    let w = &case.evidence(EvidenceKey::Weak).unwrap().worlds[0];
    let run = execute(&case.verifier, &case.exemplar, w.world.with_seed(3), DEFAULT_BUDGET);
    println!("exemplar in {} (seed 3): {:?}", w.label, run.transcript.verdict);
    for e in &run.transcript.events {
        println!("  {} -> {}.{}({})", e.caller, e.callee, e.method, e.input);
    }
    for key in [EvidenceKey::Weak, EvidenceKey::Strong] {
        let d = case.run(CheckKind::Demonstrability, key, &Settings::default()).unwrap();
        let t = case.run(CheckKind::Entailment, key, &Settings::default()).unwrap();
        println!("{key}: demonstrability {}, entailment {}", d.verdict, t.verdict);
    }
}
