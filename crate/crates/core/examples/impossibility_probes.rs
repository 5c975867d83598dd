//! The two impossibility constructions run against candidate
//! post-processors, with the witness that defeats each one.

use foregone::checkers::Settings;
use foregone::scenarios::{find, EvidenceKey, Params};

fn main() {
    let s = find("unknown-goal").unwrap().load(&Params::new()).unwrap();
    for case in &s.cases {
        let exp = &case.expectations[0];
        let r = case.run(exp.check, EvidenceKey::Weak, &Settings::default()).unwrap();
        println!("{} ({}): {}", case.label, exp.check, r.verdict);
        for d in &r.defeats {
            let tape = d.witness.target_tape.map(|t| format!(", target tape {t}")).unwrap_or_default();
            println!(
                "  {:<10} defeated in {} (seed {}{tape}): T = {}, P = {}",
                d.candidate, d.witness.world, d.witness.seed, d.witness.expected, d.witness.got
            );
        }
        for n in &r.notes {
            println!("  note: {n}");
        }
    }
}
