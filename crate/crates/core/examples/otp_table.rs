//! The entailability table for OTP(k, R.x).

use foregone::checkers::{CheckVerdict, Settings};
use foregone::scenarios::{find, CheckKind, Params};

fn main() {
    let s = find("otp-table").unwrap().load(&Params::new()).unwrap();
    for case in &s.cases {
        let exp = case
            .expectations
            .iter()
            .find(|e| matches!(e.check, CheckKind::Entailment | CheckKind::ProbeUnknownGoal | CheckKind::ProbeRandom))
            .unwrap();
        let r = case.run(exp.check, exp.evidence, &Settings::default()).unwrap();
        let cell = match (exp.check, r.verdict) {
            (CheckKind::Entailment, CheckVerdict::Holds) => "E",
            (_, CheckVerdict::Holds) => "NE",
            _ => "?",
        };
        println!("{:<22} {cell:<3} via {} ({} candidates defeated)", case.label, exp.check, r.defeats.len());
    }
}
