//! Compelled decommitment under a binding and an equivocable scheme, and
//! post-composition with a function of the secret.

use foregone::checkers::Settings;
use foregone::crypto::{binding_domain, byte_domain, CommitmentScheme};
use foregone::scenarios::{find, Params};

fn main() {
    let bd = binding_domain();
    let bytes = byte_domain();
    for (scheme, domain) in [(CommitmentScheme::Transparent, &bd), (CommitmentScheme::XorPad, &bytes)] {
        match scheme.sweep_binding(domain, domain) {
            None => println!("{}: no double opening over {} strings", scheme.name(), domain.len()),
            Some(w) => println!("{}: {:?} opens to {:?} and {:?}", scheme.name(), w.c, w.x, w.x2),
        }
    }
    let s = find("decommit").unwrap().load(&Params::new()).unwrap();
    for case in &s.cases {
        for exp in &case.expectations {
            let r = case.run(exp.check, exp.evidence, &Settings::default()).unwrap();
            let cell = r
                .counterexample
                .map(|c| format!(" at ({}, {}): T = {}, P = {}", c.world, c.action, c.expected, c.got))
                .unwrap_or_default();
            println!("{:<5} {:<16} {:<7} {}{cell}", case.label, exp.check, exp.evidence, r.verdict);
        }
    }
}
