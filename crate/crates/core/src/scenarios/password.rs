//! Compelled decryption by entering a password.

use super::common::{ask, nat, respondent, run_fn, silent_respondent};
use super::{
    Case, CheckKind, EvidenceKey, Expectation, ParamKind, ParamSpec, Params, Scenario, ScenarioDef, ScenarioError,
};
use crate::checkers::CheckVerdict;
use crate::evidence::{Assertion, Evidence, Extension, LabeledWorld, LocationRef, SpecClaim, SpecKind};
use crate::kernel::{Nature, World};
use crate::machine::{Machine, Program, State};
use crate::spec_order::ProbeBounds;
use crate::value::{Location, Value};

pub const LOC_D: Location = 1;
pub const DURESS_PWD: &[u8] = b"panic";

pub const CITATION: &str = "password-protected device decryption";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "password",
    citation: CITATION,
    params: &[
        ParamSpec {
            name: "pwd",
            kind: ParamKind::Bytes,
            help: "password of the first device",
        },
        ParamSpec {
            name: "m",
            kind: ParamKind::Bytes,
            help: "plaintext of the first device",
        },
    ],
    build,
};

pub fn d_pwd(pwd: &[u8], m: &[u8]) -> Machine {
    Program::new("D_pwd")
        .method("prompt", |st, x, _| {
            if x == st.get("pwd") {
                st.set("decrypted", Value::Bool(true));
            }
            Ok(None)
        })
        .method("read", |st, _, _| {
            Ok(Some(if st.get("decrypted") == Value::Bool(true) {
                st.get("m")
            } else {
                Value::Null
            }))
        })
        .build(
            "D",
            State::new()
                .with("pwd", Value::bytes(pwd))
                .with("m", Value::bytes(m))
                .with("decrypted", false),
        )
}

/// A deniable device: `prompt((duress, m'))` replaces the contents with `m'`
/// and unlocks.
pub fn d_deny(pwd: &[u8], duress: &[u8], m: &[u8], duress_enabled: bool) -> Machine {
    Program::new("D_deny")
        .method("prompt", |st, x, _| {
            if x == st.get("pwd") {
                st.set("decrypted", Value::Bool(true));
            } else if let Some((d, replacement)) = x.as_pair() {
                if st.get("duress_enabled") == Value::Bool(true) && *d == st.get("duress") {
                    st.set("m", replacement.clone());
                    st.set("decrypted", Value::Bool(true));
                }
            }
            Ok(None)
        })
        .method("read", |st, _, _| {
            Ok(Some(if st.get("decrypted") == Value::Bool(true) {
                st.get("m")
            } else {
                Value::Null
            }))
        })
        .build(
            "D",
            State::new()
                .with("pwd", Value::bytes(pwd))
                .with("duress", Value::bytes(duress))
                .with("m", Value::bytes(m))
                .with("decrypted", false)
                .with("duress_enabled", duress_enabled),
        )
}

pub fn r_pwd(pwd: &[u8]) -> Machine {
    respondent("R_pwd", "R", &[("pwd", Value::bytes(pwd))])
}

pub fn r_deny(pwd: &[u8], duress: &[u8]) -> Machine {
    respondent(
        "R_deny",
        "R",
        &[("pwd", Value::bytes(pwd)), ("duress", Value::bytes(duress))],
    )
}

pub fn r_bot() -> Machine {
    silent_respondent("R", &["pwd"])
}

/// Accept iff the device reads something other than ⊥.
pub fn v_pwd() -> Machine {
    run_fn("V_pwd", "V", |_, _, o| {
        Ok(Some(Value::Bool(!nat(o, LOC_D, "read", Value::Null)?.is_null())))
    })
}

pub fn a_star() -> Machine {
    run_fn("A*_pwd", "A*_pwd", |_, _, o| {
        let x = ask(o, "pwd")?;
        o.nature(LOC_D, "prompt", x)?;
        Ok(None)
    })
}

pub fn a_typo_retry() -> Machine {
    run_fn("A_typo_retry", "A_typo_retry", |_, _, o| {
        o.nature(LOC_D, "prompt", Value::from("hunter3"))?;
        let x = ask(o, "pwd")?;
        o.nature(LOC_D, "prompt", x)?;
        Ok(None)
    })
}

pub fn a_double_entry() -> Machine {
    run_fn("A_double_entry", "A_double_entry", |_, _, o| {
        let x = ask(o, "pwd")?;
        o.nature(LOC_D, "prompt", x.clone())?;
        o.nature(LOC_D, "prompt", x)?;
        Ok(None)
    })
}

/// Enter the duress password with replacement contents `fake`.
pub fn a_duress(id: &str, fake: &[u8]) -> Machine {
    let fake = Value::bytes(fake);
    run_fn("A_duress", id, move |_, _, o| {
        let d = o
            .respondent("duress", Value::Null)?
            .unwrap_or(Value::Null);
        o.nature(LOC_D, "prompt", Value::pair(d, fake.clone()))?;
        Ok(None)
    })
}

pub fn t_pwd() -> Machine {
    run_fn("T_pwd", "T", |_, _, o| {
        let x = ask(o, "pwd")?;
        o.nature(LOC_D, "prompt", x)?;
        Ok(Some(nat(o, LOC_D, "read", Value::Null)?))
    })
}

pub fn p_pwd() -> Machine {
    run_fn("P_pwd", "P", |_, _, o| Ok(Some(nat(o, LOC_D, "read", Value::Null)?)))
}

pub fn partial_claim(alphabet: Vec<Value>) -> SpecClaim {
    SpecClaim::new(
        LocationRef::Fixed(LOC_D),
        d_pwd(b"", b""),
        &["pwd", "m"],
        ProbeBounds::new(2, alphabet),
    )
}

/// Evidence assertions shared with the deniable scenario.
pub fn base_assertions(alphabet: Vec<Value>) -> Vec<Assertion> {
    vec![
        Assertion::spec(
            "device",
            "a device implementing D_pwd is at the device location",
            partial_claim(alphabet),
            SpecKind::Partial,
        ),
        Assertion::predicate("m", "the device's message is not ⊥", |w| {
            Ok(!super::common::device_var(w, LOC_D, "m").is_null())
        }),
    ]
}

pub fn knows_pwd(extensions: Vec<Extension>) -> Assertion {
    Assertion::predicate("star", "R.pwd() returns the device password", |w| {
        Ok(super::common::query(w, "pwd")? == super::common::device_var(w, LOC_D, "pwd"))
    })
    .droppable(extensions)
}

fn build(params: &Params) -> Result<Scenario, ScenarioError> {
    let pwd0 = params.bytes("pwd", b"hunter2");
    let m0 = params.bytes("m", b"tax-records");
    let pwd1 = b"swordfish".to_vec();
    let m1 = b"diary".to_vec();
    if pwd0 == pwd1 {
        return Err(ScenarioError::Invalid("password".into(), "pwd must differ from the second world's".into()));
    }

    let worlds = vec![
        LabeledWorld::new("w0", World::new(Nature::new().with(LOC_D, d_pwd(&pwd0, &m0)), r_pwd(&pwd0))),
        LabeledWorld::new("w1", World::new(Nature::new().with(LOC_D, d_pwd(&pwd1, &m1)), r_pwd(&pwd1))),
        LabeledWorld::new(
            "deny",
            World::new(
                Nature::new().with(LOC_D, d_deny(&pwd0, DURESS_PWD, &m0, true)),
                r_deny(&pwd0, DURESS_PWD),
            ),
        ),
    ];
    let extensions = worlds
        .iter()
        .map(|w| Extension {
            parent: w.label.clone(),
            world: LabeledWorld::new(
                format!("{}/R_bot", w.label),
                World::new(w.world.nature.clone(), r_bot()),
            ),
        })
        .collect();

    let partial_alphabet = vec![
        Value::bytes(&pwd0),
        Value::bytes(&pwd1),
        Value::from("wrong"),
    ];
    let mut assertions = base_assertions(partial_alphabet.clone());
    assertions.push(knows_pwd(extensions));
    let weak = Evidence::new("E_pwd", assertions, worlds)?;
    let star = weak.drop_assertion("E_star", "star")?;

    let mut full_alphabet = partial_alphabet;
    full_alphabet.push(Value::pair(Value::bytes(DURESS_PWD), Value::from("cats")));
    let strong = weak.strengthen_to_full_spec("E_D_pwd", &partial_claim(full_alphabet))?;

    let emulated = a_star().emulating(&r_pwd(&pwd0)).renamed("A_emul");
    let mut case = Case::new("main", v_pwd(), a_star(), t_pwd(), p_pwd());
    case.family = vec![
        a_star(),
        a_typo_retry(),
        a_double_entry(),
        a_duress("A_duress", b"cats"),
        a_star().emulating(&r_bot()).renamed("A_bot"),
        emulated,
    ];
    case.evidence.insert(EvidenceKey::Weak, weak);
    case.evidence.insert(EvidenceKey::Strong, strong);
    case.evidence.insert(EvidenceKey::Star, star);
    case.edges = vec![
        (EvidenceKey::Strong, EvidenceKey::Weak),
        (EvidenceKey::Weak, EvidenceKey::Star),
    ];
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;
    case.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "V_pwd is demonstrable under E_pwd"),
        Expectation::new(Demonstrability, Strong, Holds, "V_pwd is demonstrable under E_D_pwd (monotonicity)"),
        Expectation::new(Demonstrability, Star, Fails, "R_bot produces no password under E_star"),
        Expectation::new(Conformity, Weak, Holds, "A*_pwd conforms in every E_pwd world"),
        Expectation::new(Entailment, Strong, Holds, "V_pwd entails T_pwd under E_D_pwd"),
        Expectation::new(Entailment, Weak, Fails, "a deniable device is consistent with E_pwd"),
        Expectation::new(Entailment, Star, Fails, "T_pwd is not entailable under E_star"),
        Expectation::new(Counterexample, Star, Fails, "P's output is independent of R; T outputs ⊥ with R_bot")
            .at_cell("w0/R_bot", "A_emul", 0),
        Expectation::new(Monotonicity, Weak, Holds, "demonstrability and conformity are monotone in evidence"),
    ];
    Ok(Scenario {
        name: "password".into(),
        citation: CITATION.into(),
        cases: vec![case],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::common::do_nothing;
    use crate::kernel::{execute, run_target, DEFAULT_BUDGET};
    use crate::spec_order::{bounded_equivalent, bounded_implements};

    fn alphabet() -> ProbeBounds {
        ProbeBounds::new(3, [Value::from("hunter2"), Value::from("wrong")])
    }

    #[test]
    fn device_unlocks_only_with_password() {
        let mut w = World::new(Nature::new().with(LOC_D, d_pwd(b"hunter2", b"tax-records")), r_pwd(b"hunter2"));
        assert_eq!(w.invoke_nature(LOC_D, "read", Value::Null, 100).unwrap(), Some(Value::Null));
        w.invoke_nature(LOC_D, "prompt", Value::from("hunter2"), 100).unwrap();
        assert_eq!(
            w.invoke_nature(LOC_D, "read", Value::Null, 100).unwrap(),
            Some(Value::from("tax-records"))
        );
    }

    #[test]
    fn deniable_device_refines_but_is_not_equivalent() {
        let p = d_pwd(b"hunter2", b"m");
        let d = d_deny(b"hunter2", DURESS_PWD, b"m", true);
        assert!(bounded_implements(&p, &d, &alphabet()).unwrap());
        let mut with_duress = alphabet();
        with_duress.alphabet.push(Value::pair(Value::bytes(DURESS_PWD), Value::from("cats")));
        assert!(!bounded_equivalent(&p, &d, &with_duress).unwrap());
        assert!(bounded_equivalent(&p, &p.clone(), &with_duress).unwrap());
    }

    #[test]
    fn target_and_exemplar() {
        let w = World::new(Nature::new().with(LOC_D, d_pwd(b"hunter2", b"tax-records")), r_pwd(b"hunter2"));
        assert_eq!(run_target(&t_pwd(), w.snapshot(), DEFAULT_BUDGET).unwrap(), Value::from("tax-records"));
        assert!(execute(&v_pwd(), &a_star(), w.snapshot(), DEFAULT_BUDGET).accepted());
        assert!(!execute(&v_pwd(), &do_nothing("A"), w.snapshot(), DEFAULT_BUDGET).accepted());
        let bot = World::new(w.nature.clone(), r_bot());
        assert_eq!(run_target(&t_pwd(), bot, DEFAULT_BUDGET).unwrap(), Value::Null);
    }
}
