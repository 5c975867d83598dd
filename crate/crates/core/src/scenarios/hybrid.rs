//! A device only partially specified by its read method.

use super::common::{accept_all, do_nothing, nat, respondent, run_fn};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::evidence::{Assertion, Evidence, LabeledWorld, LocationRef, SpecClaim, SpecKind};
use crate::kernel::{Nature, World};
use crate::machine::{Machine, Program, State};
use crate::spec_order::ProbeBounds;
use crate::value::{Location, Value};

pub const LOC_D: Location = 1;
pub const CITATION: &str = "entailment under a partially specified device";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "hybrid",
    citation: CITATION,
    params: &[],
    build,
};

pub fn d_read(m: &str) -> Machine {
    Program::new("D_read")
        .method("read", |st, _, _| Ok(Some(st.get("m"))))
        .build("D", State::new().with("m", m))
}

pub fn d_read_write(m: &str) -> Machine {
    Program::new("D_readWrite")
        .method("read", |st, _, _| Ok(Some(st.get("m"))))
        .method("write", |st, x, _| {
            st.set("m", x);
            Ok(None)
        })
        .build("D", State::new().with("m", m))
}

pub fn t_read() -> Machine {
    run_fn("T_read", "T", |_, _, o| Ok(Some(nat(o, LOC_D, "read", Value::Null)?)))
}

pub fn p_read() -> Machine {
    run_fn("P_read", "P", |_, _, o| Ok(Some(nat(o, LOC_D, "read", Value::Null)?)))
}

/// Overwrite the device with `x`.
pub fn a_x(x: &str) -> Machine {
    let x = Value::from(x);
    run_fn("A_x", "A_x", move |_, _, o| {
        o.nature(LOC_D, "write", x.clone())?;
        Ok(None)
    })
}

fn a_read() -> Machine {
    run_fn("A_read", "A_read", |_, _, o| {
        o.nature(LOC_D, "read", Value::Null)?;
        Ok(None)
    })
}

pub fn claim() -> SpecClaim {
    SpecClaim::new(
        LocationRef::Fixed(LOC_D),
        d_read(""),
        &["m"],
        ProbeBounds::new(3, [Value::from("cats"), Value::Null]),
    )
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    let r = || respondent("R", "R", &[]);
    let worlds = vec![
        LabeledWorld::new("read/dogs", World::new(Nature::new().with(LOC_D, d_read("dogs")), r())),
        LabeledWorld::new("read/birds", World::new(Nature::new().with(LOC_D, d_read("birds")), r())),
        LabeledWorld::new("readWrite/dogs", World::new(Nature::new().with(LOC_D, d_read_write("dogs")), r())),
    ];
    let weak = Evidence::new(
        "E_read",
        vec![Assertion::spec("device", "D_read ≺ N[ℓ_D]", claim(), SpecKind::Partial)],
        worlds,
    )?;
    let strong = weak.strengthen_to_full_spec("E_D_read", &claim())?;

    let mut case = Case::new("main", accept_all("V"), do_nothing("A_nothing"), t_read(), p_read());
    case.family = vec![do_nothing("A_nothing"), a_x("cats"), a_read()];
    case.evidence.insert(EvidenceKey::Weak, weak);
    case.evidence.insert(EvidenceKey::Strong, strong);
    case.edges = vec![(EvidenceKey::Strong, EvidenceKey::Weak)];
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;
    case.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "the accept-all verifier is demonstrable"),
        Expectation::new(Entailment, Weak, Fails, "T_read is not entailable under partial evidence")
            .at_cell("readWrite/dogs", "A_x", 0),
        Expectation::new(Entailment, Strong, Holds, "T_read is entailable when D_read fully specifies the device"),
        Expectation::new(Monotonicity, Weak, Holds, "demonstrability and conformity are monotone in evidence"),
    ];
    Ok(Scenario {
        name: "hybrid".into(),
        citation: CITATION.into(),
        cases: vec![case],
    })
}
