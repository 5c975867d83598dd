//! Replay a counterexample cell through the kernel and print its
//! transcript.

use foregone::checkers::{replay_cell, Settings};
use foregone::kernel::{execute, DEFAULT_BUDGET};
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};

fn main() {
    let s = find("password").unwrap().load(&Params::new()).unwrap();
    let case = &s.cases[0];
    let key = EvidenceKey::Star;
    let r = case.run(CheckKind::Counterexample, key, &Settings::default()).unwrap();
    let cell = r.counterexample.expect("E★ has a counterexample");
    println!("recorded: ({}, {}, seed {}) T = {}, P = {}", cell.world, cell.action, cell.seed, cell.expected, cell.got);

    let setup = case.entailment_setup(key).unwrap();
    let (t, p) = replay_cell(&setup, &cell, DEFAULT_BUDGET).unwrap();
    println!("replayed: T = {t}, P = {p}");

    let world = case.evidence(key).unwrap().world(&cell.world).unwrap();
    let action = case.family.iter().find(|a| a.id() == cell.action).unwrap();
    let run = execute(&case.verifier, action, world.world.with_seed(cell.seed), DEFAULT_BUDGET);
    for e in &run.transcript.events {
        println!("  {} -> {}.{}({}) = {:?}", e.caller, e.callee, e.method, e.input, e.outcome);
    }
    println!("  messages {:?}, verdict {:?}", run.transcript.messages, run.transcript.verdict);
}
