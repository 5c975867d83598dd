//! Two-factor unlock: a password, then a code sent to a second device
//! whose location only the respondent knows.

use super::common::{ask, device_var, nat, query, respondent, run_fn};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::evidence::{Assertion, Evidence, LabeledWorld, LocationRef, SpecClaim, SpecKind};
use crate::kernel::{Nature, World};
use crate::machine::{Machine, Program, State};
use crate::spec_order::ProbeBounds;
use crate::value::{Location, Value};

pub const LOC_DEVICE: Location = 1;
pub const CITATION: &str = "two-factor device unlock";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "two-factor",
    citation: CITATION,
    params: &[],
    build,
};

fn unlockable(name: &str) -> Program {
    Program::new(name)
        .method("promptPwd", |st, x, o| {
            if x == st.get("pwd") {
                let code = Value::Bytes(o.tape().next_bytes(2));
                st.set("code", code.clone());
                st.set("gotPwd", Value::Bool(true));
                let second = st.get("second").as_loc().unwrap_or(0);
                o.nature(second, "setCode", code)?;
            }
            Ok(None)
        })
        .method("promptCode", |st, c, _| {
            if st.get("gotPwd") == Value::Bool(true) && c == st.get("code") {
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
}

fn device_state(pwd: &str, m: &str, second: Location) -> State {
    State::new()
        .with("pwd", pwd)
        .with("m", m)
        .with("second", Value::Loc(second))
        .with("gotPwd", false)
        .with("decrypted", false)
}

pub fn device(pwd: &str, m: &str, second: Location) -> Machine {
    unlockable("D_2fa").build("D", device_state(pwd, m, second))
}

/// The same device plus a method that replaces the contents and unlocks.
pub fn backdoored(pwd: &str, m: &str, second: Location) -> Machine {
    unlockable("D_2fa_overwrite")
        .method("overwrite", |st, x, _| {
            st.set("m", x);
            st.set("decrypted", Value::Bool(true));
            Ok(None)
        })
        .build("D", device_state(pwd, m, second))
}

pub fn second_device() -> Machine {
    Program::new("S")
        .method("setCode", |st, c, _| {
            st.set("code", c);
            Ok(None)
        })
        .method("getCode", |st, _, _| Ok(Some(st.get("code"))))
        .build("S", State::new())
}

fn r_2fa(pwd: &str, second: Location) -> Machine {
    respondent(
        "R_2fa",
        "R",
        &[("pwd", Value::from(pwd)), ("findSecond", Value::Loc(second))],
    )
}

fn unlock(o: &mut dyn crate::machine::Oracle) -> Result<(), crate::machine::ExecError> {
    let x = ask(o, "pwd")?;
    o.nature(LOC_DEVICE, "promptPwd", x)?;
    let loc = ask(o, "findSecond")?.as_loc().unwrap_or(0);
    let c = nat(o, loc, "getCode", Value::Null)?;
    o.nature(LOC_DEVICE, "promptCode", c)?;
    Ok(())
}

pub fn v_2fa() -> Machine {
    run_fn("V_2fa", "V", |_, _, o| {
        Ok(Some(Value::Bool(!nat(o, LOC_DEVICE, "read", Value::Null)?.is_null())))
    })
}

pub fn a_star() -> Machine {
    run_fn("A*_2fa", "A*_2fa", |_, _, o| {
        unlock(o)?;
        Ok(None)
    })
}

fn a_retry() -> Machine {
    run_fn("A_retry", "A_retry", |_, _, o| {
        o.nature(LOC_DEVICE, "promptPwd", Value::from("0000"))?;
        unlock(o)?;
        Ok(None)
    })
}

fn a_overwrite() -> Machine {
    run_fn("A_overwrite", "A_overwrite", |_, _, o| {
        o.nature(LOC_DEVICE, "overwrite", Value::from("cats"))?;
        Ok(None)
    })
}

pub fn t_2fa() -> Machine {
    run_fn("T_2fa", "T", |_, _, o| {
        unlock(o)?;
        Ok(Some(nat(o, LOC_DEVICE, "read", Value::Null)?))
    })
}

pub fn p_2fa() -> Machine {
    run_fn("P_2fa", "P", |_, _, o| Ok(Some(nat(o, LOC_DEVICE, "read", Value::Null)?)))
}

fn claims() -> (SpecClaim, SpecClaim) {
    let alphabet = [Value::from("1234"), Value::from("9999"), Value::from("0000")];
    (
        SpecClaim::new(
            LocationRef::Fixed(LOC_DEVICE),
            device("", "", 0),
            &["pwd", "m", "second"],
            ProbeBounds::new(2, alphabet.clone()),
        ),
        SpecClaim::new(
            LocationRef::ViaRespondent("findSecond".into()),
            second_device(),
            &[],
            ProbeBounds::new(2, alphabet),
        ),
    )
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    let world = |d: Machine, second: Location, pwd: &str| {
        World::new(
            Nature::new().with(LOC_DEVICE, d).with(second, second_device()),
            r_2fa(pwd, second),
        )
    };
    let worlds = vec![
        LabeledWorld::new("w0", world(device("1234", "tax-records", 7), 7, "1234")),
        LabeledWorld::new("w1", world(device("9999", "diary", 8), 8, "9999")),
        LabeledWorld::new("overwrite", world(backdoored("1234", "tax-records", 7), 7, "1234")),
    ];
    let (d_claim, s_claim) = claims();
    let assertions = vec![
        Assertion::spec("device", "D ≺ N[ℓ_device]", d_claim.clone(), SpecKind::Partial),
        Assertion::spec("second", "S ≺ N[R.findSecond()]", s_claim.clone(), SpecKind::Partial),
        Assertion::predicate("pwd", "R.pwd() == D.pwd", |w| {
            Ok(query(w, "pwd")? == device_var(w, LOC_DEVICE, "pwd"))
        }),
        Assertion::predicate("m", "D.m is not ⊥", |w| Ok(!device_var(w, LOC_DEVICE, "m").is_null())),
        Assertion::predicate("paired", "D sends its code to N[R.findSecond()]", |w| {
            Ok(query(w, "findSecond")? == device_var(w, LOC_DEVICE, "second"))
        }),
    ];
    let weak = Evidence::new("E_2fa", assertions, worlds)?;
    let strong = weak
        .strengthen_to_full_spec("E_D", &d_claim)?
        .strengthen_to_full_spec("E_D_S", &s_claim)?;

    let mut case = Case::new("main", v_2fa(), a_star(), t_2fa(), p_2fa());
    case.family = vec![a_star(), a_retry(), a_overwrite()];
    case.evidence.insert(EvidenceKey::Weak, weak);
    case.evidence.insert(EvidenceKey::Strong, strong);
    case.edges = vec![(EvidenceKey::Strong, EvidenceKey::Weak)];
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;
    case.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "V_2fa is demonstrable under E_2fa"),
        Expectation::new(Entailment, Strong, Holds, "V_2fa entails T_2fa under E_D_S"),
        Expectation::new(Entailment, Weak, Fails, "a device with extra methods is consistent with E_2fa")
            .at_cell("overwrite", "A_overwrite", 0),
        Expectation::new(Monotonicity, Weak, Holds, "demonstrability and conformity are monotone in evidence"),
    ];
    Ok(Scenario {
        name: "two-factor".into(),
        citation: CITATION.into(),
        cases: vec![case],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DEFAULT_BUDGET;

    #[test]
    fn wrong_code_keeps_device_locked() {
        let mut w = World::new(
            Nature::new().with(LOC_DEVICE, device("1234", "m", 7)).with(7, second_device()),
            r_2fa("1234", 7),
        );
        w.invoke_nature(LOC_DEVICE, "promptPwd", Value::from("1234"), DEFAULT_BUDGET).unwrap();
        w.invoke_nature(LOC_DEVICE, "promptCode", Value::bytes([0u8, 0]), DEFAULT_BUDGET)
            .unwrap();
        let code = w.nature.get(7).unwrap().var("code");
        assert_ne!(code, Value::bytes([0u8, 0]), "seed 0 happens to draw 0000; pick another");
        assert_eq!(
            w.invoke_nature(LOC_DEVICE, "read", Value::Null, DEFAULT_BUDGET).unwrap(),
            Some(Value::Null)
        );
        w.invoke_nature(LOC_DEVICE, "promptCode", code, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            w.invoke_nature(LOC_DEVICE, "read", Value::Null, DEFAULT_BUDGET).unwrap(),
            Some(Value::from("m"))
        );
    }
}
