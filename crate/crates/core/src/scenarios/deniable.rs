//! Deniable encryption: a duress password that rewrites the device.

use super::common::run_fn;
use super::password::{
    a_double_entry, a_duress, a_star, a_typo_retry, base_assertions, d_deny, d_pwd, knows_pwd, p_pwd, partial_claim,
    r_deny, r_pwd, t_pwd, v_pwd, DURESS_PWD, LOC_D,
};
use super::{
    Case, CheckKind, EvidenceKey, Expectation, ParamKind, ParamSpec, Params, Scenario, ScenarioDef, ScenarioError,
};
use crate::checkers::CheckVerdict;
use crate::evidence::{Evidence, LabeledWorld};
use crate::kernel::{Nature, World};
use crate::machine::Machine;
use crate::value::Value;

pub const CITATION: &str = "deniable device with a duress password";

/// The file the government knows is on the device.
pub const KNOWN_FILE: &[u8] = b"ledger.csv";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "deniable",
    citation: CITATION,
    params: &[
        ParamSpec {
            name: "duress_enabled",
            kind: ParamKind::Int,
            help: "0 makes the deniable device ignore its duress password",
        },
        ParamSpec {
            name: "duress_pwd",
            kind: ParamKind::Bytes,
            help: "duress password of the deniable device",
        },
    ],
    build,
};

/// The files listed in a `;`-separated message.
pub fn files(m: &Value) -> Vec<Vec<u8>> {
    m.as_bytes()
        .map(|b| b.split(|c| *c == b';').map(<[u8]>::to_vec).collect())
        .unwrap_or_default()
}

/// Accept iff the device reads a file list containing the known file.
pub fn v_known_file() -> Machine {
    run_fn("V_known_file", "V", |_, _, o| {
        let m = super::common::nat(o, LOC_D, "read", Value::Null)?;
        Ok(Some(Value::Bool(files(&m).iter().any(|f| f == KNOWN_FILE))))
    })
}

fn build(params: &Params) -> Result<Scenario, ScenarioError> {
    let enabled = params.int("duress_enabled", 1) != 0;
    let duress = params.bytes("duress_pwd", DURESS_PWD);
    let pwd = b"hunter2".to_vec();
    let m = b"ledger.csv;notes".to_vec();
    let m_other = b"ledger.csv;photos".to_vec();

    let worlds = vec![
        LabeledWorld::new("pwd", World::new(Nature::new().with(LOC_D, d_pwd(&pwd, &m_other)), r_pwd(&pwd))),
        LabeledWorld::new(
            "deny",
            World::new(Nature::new().with(LOC_D, d_deny(&pwd, &duress, &m, enabled)), r_deny(&pwd, &duress)),
        ),
    ];
    let alphabet = vec![Value::bytes(&pwd), Value::from("wrong")];
    let mut assertions = base_assertions(alphabet.clone());
    assertions.push(knows_pwd(Vec::new()));
    let weak = Evidence::new("E_pwd+deny", assertions, worlds)?;
    let mut full_alphabet = alphabet;
    full_alphabet.push(Value::pair(Value::bytes(&duress), Value::from("cats")));
    let strong = weak.strengthen_to_full_spec("E_D_pwd", &partial_claim(full_alphabet))?;

    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;

    let mut main = Case::new("main", v_pwd(), a_star(), t_pwd(), p_pwd());
    main.family = vec![
        a_star(),
        a_typo_retry(),
        a_double_entry(),
        a_duress("A_duress", b"cats"),
    ];
    main.evidence.insert(Weak, weak.clone());
    main.evidence.insert(Strong, strong);
    main.edges = vec![(Strong, Weak)];
    main.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "V_pwd stays demonstrable with a deniable device"),
        Expectation::new(Entailment, Weak, Fails, "the duress password defeats entailment of T_pwd"),
        Expectation::new(Counterexample, Weak, Fails, "A_duress conforms and plants other contents")
            .at_cell("deny", "A_duress", 0),
        Expectation::new(Entailment, Strong, Holds, "full specification rules out the deniable device"),
        Expectation::new(Monotonicity, Weak, Holds, "demonstrability and conformity are monotone in evidence"),
    ];

    let mut known = Case::new("known-file", v_known_file(), a_star(), t_pwd(), p_pwd());
    known.family = main.family.clone();
    known.evidence.insert(Weak, weak.clone());
    known.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "checking a known file keeps the verifier demonstrable"),
        Expectation::new(Entailment, Weak, Holds, "a known-file check rejects the declared duress action"),
    ];

    let mut forged = Case::new("known-file-forged", v_known_file(), a_star(), t_pwd(), p_pwd());
    forged.family = vec![a_star(), a_duress("A_duress_forged", b"ledger.csv;forged")];
    forged.evidence.insert(Weak, weak);
    forged.expectations = vec![Expectation::new(
        Entailment,
        Weak,
        Fails,
        "duress contents that include the known file still pass the check",
    )
    .at_cell("deny", "A_duress_forged", 0)];

    Ok(Scenario {
        name: "deniable".into(),
        citation: CITATION.into(),
        cases: vec![main, known, forged],
    })
}
