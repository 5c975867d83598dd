//! Targets that depend on what only the respondent knows, or on the
//! target's own coins.

use super::common::{accept_all, ask, const_post, flipped_message_post, message_post, null_post, respondent, run_fn};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::crypto::CommitmentScheme;
use crate::evidence::{Evidence, LabeledWorld};
use crate::kernel::{Nature, World};
use crate::machine::Machine;
use crate::value::Value;

pub const CITATION: &str = "no verifier entails an unknown goal or a fresh coin";
/// Fixed commitment randomness for the derandomized commitment targets.
pub const R_FIXED: &[u8] = &[0x2a];

pub const DEF: ScenarioDef = ScenarioDef {
    name: "unknown-goal",
    citation: CITATION,
    params: &[],
    build,
};

pub fn t_x() -> Machine {
    run_fn("T_x", "T", |_, _, o| Ok(Some(ask(o, "x")?)))
}

pub fn a_tell() -> Machine {
    run_fn("A*_tell", "A*_tell", |_, _, o| {
        let x = ask(o, "x")?;
        o.send(x)?;
        Ok(None)
    })
}

pub fn t_coin() -> Machine {
    run_fn("T_coin", "T", |_, _, o| Ok(Some(Value::Bool(o.tape().next_bit()))))
}

pub fn a_coin() -> Machine {
    run_fn("A*_coin", "A*_coin", |_, _, o| {
        let b = o.tape().next_bit();
        o.send(Value::Bool(b))?;
        Ok(None)
    })
}

pub fn t_const() -> Machine {
    run_fn("T_const", "T", |_, _, _| Ok(Some(Value::Bool(true))))
}

/// `Com(R.x; r)` with `r` fixed, or drawn from the machine's own tape.
fn commit_x(scheme: CommitmentScheme, r: Option<&[u8]>, o: &mut dyn crate::machine::Oracle) -> Result<Value, crate::machine::ExecError> {
    let r = match r {
        Some(r) => r.to_vec(),
        None => o.tape().next_bytes(1),
    };
    let x = ask(o, "x")?;
    Ok(x.as_bytes()
        .and_then(|x| scheme.commit(x, &r).ok())
        .map(|(c, _)| Value::Bytes(c))
        .unwrap_or(Value::Null))
}

pub fn t_com(scheme: CommitmentScheme, r: Option<Vec<u8>>) -> Machine {
    run_fn("T_com", "T", move |_, _, o| Ok(Some(commit_x(scheme, r.as_deref(), o)?)))
}

pub fn a_com(scheme: CommitmentScheme, r: Option<Vec<u8>>) -> Machine {
    run_fn("A*_com", "A*_com", move |_, _, o| {
        let c = commit_x(scheme, r.as_deref(), o)?;
        o.send(c)?;
        Ok(None)
    })
}

fn candidates(extra: Vec<Machine>) -> Vec<Machine> {
    let mut c = vec![message_post("P_message"), null_post("P_null"), flipped_message_post("P_flip")];
    c.extend(extra);
    c
}

fn r_x(x: &[u8]) -> Machine {
    respondent("R_x", "R", &[("x", Value::bytes(x))])
}

fn secret_worlds(xs: &[&[u8]], language: impl Fn(&[u8]) -> Option<Vec<Value>>) -> Vec<LabeledWorld> {
    xs.iter()
        .map(|x| {
            let w = LabeledWorld::new(
                format!("R.x={}", String::from_utf8_lossy(x)),
                World::new(Nature::new(), r_x(x)),
            );
            match language(x) {
                Some(l) => w.with_language(l),
                None => w,
            }
        })
        .collect()
}

fn probe_case(
    label: &str,
    worlds: Vec<LabeledWorld>,
    exemplar: Machine,
    target: Machine,
    candidate_posts: Vec<Machine>,
    check: CheckKind,
    verdict: CheckVerdict,
    citation: &str,
) -> Result<Case, ScenarioError> {
    let mut c = Case::new(label, accept_all("V"), exemplar.clone(), target, message_post("P"));
    let e = Evidence::new(format!("E_{label}"), Vec::new(), worlds)?;
    if check == CheckKind::ProbeRandom {
        c.random_world = e.worlds.first().map(|w| w.label.clone());
    }
    c.family = vec![exemplar];
    c.candidate_posts = candidate_posts;
    c.evidence.insert(EvidenceKey::Weak, e);
    c.expectations = vec![Expectation::new(check, EvidenceKey::Weak, verdict, citation)];
    Ok(c)
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    use CheckKind::*;
    use CheckVerdict::*;
    let place = |p: &str| World::new(Nature::new(), respondent("R_whereabouts", "R", &[("x", Value::from(p))]));
    let whereabouts = vec![
        LabeledWorld::new("Boston", place("Boston")).with_language([Value::from("Boston")]),
        LabeledWorld::new("Paris", place("Paris")).with_language([Value::from("Paris")]),
    ];
    let overlap = vec![
        LabeledWorld::new("Boston", place("Boston")).with_language([Value::from("Boston"), Value::from("Paris")]),
        LabeledWorld::new("Paris", place("Paris")).with_language([Value::from("Paris")]),
    ];
    let guesses = || {
        candidates(vec![
            const_post("P_Boston", Value::from("Boston")),
            const_post("P_Paris", Value::from("Paris")),
        ])
    };
    let xs: &[&[u8]] = &[b"a", b"b"];
    let com_fixed = |scheme: CommitmentScheme| {
        let r = Some(R_FIXED.to_vec());
        let worlds = secret_worlds(xs, |x| {
            Some(vec![Value::Bytes(scheme.commit(x, R_FIXED).expect("toy input").0)])
        });
        let (verdict, why) = match scheme {
            CommitmentScheme::Constant => (HypothesisViolated, "every message shares the constant commitment"),
            _ => (Holds, "a derandomized commitment to an unknown secret is not entailable"),
        };
        probe_case(
            &format!("com-fixed/{}", scheme.name()),
            worlds,
            a_com(scheme, r.clone()),
            t_com(scheme, r),
            candidates(vec![const_post("P_zero", Value::bytes([0u8]))]),
            ProbeUnknownGoal,
            verdict,
            why,
        )
    };

    let cases = vec![
        probe_case(
            "whereabouts",
            whereabouts,
            a_tell(),
            t_x(),
            guesses(),
            ProbeUnknownGoal,
            Holds,
            "the verifier must accept any location",
        )?,
        probe_case(
            "overlap",
            overlap,
            a_tell(),
            t_x(),
            guesses(),
            ProbeUnknownGoal,
            HypothesisViolated,
            "languages with a common element",
        )?,
        probe_case(
            "coin",
            secret_worlds(xs, |_| None),
            a_coin(),
            t_coin(),
            candidates(vec![
                const_post("P_true", Value::Bool(true)),
                const_post("P_false", Value::Bool(false)),
            ]),
            ProbeRandom,
            Holds,
            "a fair coin from the target's own tape",
        )?,
        probe_case(
            "const",
            secret_worlds(xs, |_| None),
            a_coin(),
            t_const(),
            candidates(Vec::new()),
            ProbeRandom,
            HypothesisViolated,
            "a constant target has support of size one",
        )?,
        probe_case(
            "com-fresh",
            secret_worlds(xs, |_| None),
            a_com(CommitmentScheme::XorPad, None),
            t_com(CommitmentScheme::XorPad, None),
            candidates(Vec::new()),
            ProbeRandom,
            Holds,
            "no verifier entails a fresh commitment to an unknown secret",
        )?,
        com_fixed(CommitmentScheme::Transparent)?,
        com_fixed(CommitmentScheme::XorPad)?,
        com_fixed(CommitmentScheme::Constant)?,
    ];
    Ok(Scenario {
        name: "unknown-goal".into(),
        citation: CITATION.into(),
        cases,
    })
}
