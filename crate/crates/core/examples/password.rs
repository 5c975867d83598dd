//! Demonstrability and entailment for the password-protected device under
//! the three evidence variants.

use foregone::checkers::Settings;
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};

fn main() {
    let s = find("password").unwrap().load(&Params::new()).unwrap();
    let case = &s.cases[0];
    let settings = Settings::default();
    for key in EvidenceKey::ALL {
        for check in [CheckKind::Demonstrability, CheckKind::Entailment] {
            let r = case.run(check, key, &settings).unwrap();
            print!("{check:<16} {key:<7} {}", r.verdict);
            if let Some(c) = &r.counterexample {
                print!("  at ({}, {}, seed {}): T = {}, P = {}", c.world, c.action, c.seed, c.expected, c.got);
            }
            println!();
        }
    }
}
