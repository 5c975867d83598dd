//! A duress password splits the verdicts: the verifier stays demonstrable
//! but no longer entails the target. A known-file check restores it.

use foregone::checkers::Settings;
use foregone::scenarios::{find, CheckKind, EvidenceKey, Params};
use foregone::spec_order::{bounded_equivalent, bounded_implements, ProbeBounds};
use foregone::scenarios::password::{d_deny, d_pwd, DURESS_PWD};
use foregone::value::Value;

fn main() {
    let plain = d_pwd(b"hunter2", b"m");
    let deny = d_deny(b"hunter2", DURESS_PWD, b"m", true);
    let mut bounds = ProbeBounds::new(2, [Value::from("hunter2"), Value::from("guess")]);
    println!("D_pwd ≺ D_deny: {}", bounded_implements(&plain, &deny, &bounds).unwrap());
    bounds.alphabet.push(Value::pair(Value::bytes(DURESS_PWD), Value::from("cats")));
    println!("D_pwd ∼ D_deny with the duress input: {}", bounded_equivalent(&plain, &deny, &bounds).unwrap());

    let s = find("deniable").unwrap().load(&Params::new()).unwrap();
    let settings = Settings::default();
    for case in &s.cases {
        for exp in &case.expectations {
            let r = case.run(exp.check, exp.evidence, &settings).unwrap();
            println!("{:<18} {:<16} {:<7} {}", case.label, exp.check, exp.evidence, r.verdict);
        }
    }
    let main = s.case("main").unwrap();
    let r = main.run(CheckKind::Counterexample, EvidenceKey::Weak, &settings).unwrap();
    if let Some(c) = r.counterexample {
        println!("counterexample: {} in {} plants {} instead of {}", c.action, c.world, c.got, c.expected);
    }
}
