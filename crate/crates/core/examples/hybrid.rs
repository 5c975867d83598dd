//! A partially specified device admits a write method, which defeats the
//! read target until the specification is made full.

use foregone::checkers::Settings;
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};

fn main() {
    let s = find("hybrid").unwrap().load(&Params::new()).unwrap();
    let case = &s.cases[0];
    for key in [EvidenceKey::Weak, EvidenceKey::Strong] {
        let e = case.evidence(key).unwrap();
        let labels: Vec<&str> = e.worlds.iter().map(|w| w.label.as_str()).collect();
        let r = case.run(CheckKind::Entailment, key, &Settings::default()).unwrap();
        println!("{} worlds {labels:?}: entailment {}", e.name, r.verdict);
        if let Some(c) = r.counterexample {
            println!("  {} in {}: T = {}, P = {}", c.action, c.world, c.expected, c.got);
        }
    }
}
