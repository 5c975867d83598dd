//! Producing a file against a held hash: exact for an injective hash, and a
//! collision for a folding one.

use foregone::checkers::{Observed, Settings};
use foregone::crypto::{strings_up_to, HashSpec};
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};
use foregone::value::Value;

fn main() {
    let domain = strings_up_to(2);
    for h in [HashSpec::injective(), HashSpec::colliding()] {
        println!("{}: first collision over {} strings: {:?}", h.name, domain.len(), h.find_collision(&domain));
    }
    let s = find("hash").unwrap().load(&Params::new()).unwrap();
    for case in &s.cases {
        let r = case.run(CheckKind::Entailment, EvidenceKey::Weak, &Settings::default()).unwrap();
        println!("{}: entailment {}", case.label, r.verdict);
        if let Some(c) = r.counterexample {
            if let (Observed::Value(Value::Bytes(t)), Observed::Value(Value::Bytes(p))) = (&c.expected, &c.got) {
                let h = HashSpec::colliding();
                println!("  T = {:?}, P = {:?}, h(T) = {:?}, h(P) = {:?}", t, p, h.evaluate(t), h.evaluate(p));
            }
        }
    }
}
