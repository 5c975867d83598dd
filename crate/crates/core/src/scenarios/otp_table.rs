//! Compelled one-time-pad encryption of the respondent's secret, across
//! three ways of choosing the key and two states of government knowledge.

use super::common::{ask, const_post, receive_or_null, flipped_message_post, message_post, nat, null_post, peek, query,
    respondent, run_fn, xor_value};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::crypto::randomized_otp;
use crate::evidence::{Assertion, Evidence, LabeledWorld};
use crate::kernel::{Nature, World};
use crate::machine::{ExecError, Machine, Oracle};
use crate::value::{Location, Value};

pub const LOC_X: Location = 4;
/// The key a government fixes in its target.
pub const K_FIXED: &[u8] = &[0x5c];
/// The encryption randomness a government fixes in its target.
pub const RHO_FIXED: &[u8] = &[0x0f];
pub const CITATION: &str = "is OTP(k, R.x) entailable";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "otp-table",
    citation: CITATION,
    params: &[],
    build,
};

/// How the target picks its key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KeyChoice {
    Respondent,
    Fixed,
    Sampled,
}

impl KeyChoice {
    fn label(self) -> &'static str {
        match self {
            Self::Respondent => "R.k",
            Self::Fixed => "fixed",
            Self::Sampled => "sampled",
        }
    }

    fn key(self, o: &mut dyn Oracle) -> Result<Vec<u8>, ExecError> {
        Ok(match self {
            Self::Respondent => ask(o, "k")?.as_bytes().map(<[u8]>::to_vec).unwrap_or_default(),
            Self::Fixed => K_FIXED.to_vec(),
            Self::Sampled => o.tape().next_bytes(1),
        })
    }
}

fn encrypt(choice: KeyChoice, o: &mut dyn Oracle) -> Result<Value, ExecError> {
    let k = choice.key(o)?;
    Ok(xor_value(&ask(o, "x")?, &k))
}

pub fn target(choice: KeyChoice) -> Machine {
    run_fn("T_otp", "T", move |_, _, o| Ok(Some(encrypt(choice, o)?)))
}

/// Performs the target and sends its output.
pub fn exemplar(choice: KeyChoice) -> Machine {
    run_fn("A*_otp", "A*_otp", move |_, _, o| {
        let c = encrypt(choice, o)?;
        o.send(c)?;
        Ok(None)
    })
}

/// `OTP(k_fixed, N[ℓ_x].read())`, or with fixed randomness when `rho` is set.
fn expected_from_nature(o: &mut dyn Oracle, rho: Option<&[u8]>) -> Result<Value, ExecError> {
    let x = nat(o, LOC_X, "read", Value::Null)?;
    Ok(match rho {
        None => xor_value(&x, K_FIXED),
        Some(rho) => randomized(&x, rho),
    })
}

fn randomized(x: &Value, rho: &[u8]) -> Value {
    match x.as_bytes().map(|m| randomized_otp(K_FIXED, m, rho)) {
        Some(Ok((r, c))) => Value::pair(Value::Bytes(r), Value::Bytes(c)),
        _ => Value::Null,
    }
}

/// Accept iff the first message is the expected ciphertext of the plaintext
/// stored in nature.
pub fn v_known(rho: Option<Vec<u8>>) -> Machine {
    run_fn("V_otp_known", "V", move |_, _, o| {
        let want = expected_from_nature(o, rho.as_deref())?;
        Ok(Some(Value::Bool(!want.is_null() && receive_or_null(o)? == want)))
    })
}

fn p_nature() -> Machine {
    run_fn("P_nature", "P_nature", |_, _, o| Ok(Some(expected_from_nature(o, None)?)))
}

fn candidates() -> Vec<Machine> {
    vec![
        message_post("P_message"),
        null_post("P_null"),
        flipped_message_post("P_flip"),
        p_nature(),
        const_post("P_const", Value::bytes([0x3d])),
    ]
}

fn r(x: &[u8], k: &[u8]) -> Machine {
    respondent("R_otp", "R", &[("x", Value::bytes(x)), ("k", Value::bytes(k))])
}

const RESPONDENTS: [(&[u8], &[u8]); 3] = [(b"a", &[0x01]), (b"b", &[0x02]), (b"a", &[0x02])];

/// The value of `T` in a world whose respondent holds `(x, k)`, for the
/// deterministic key choices.
fn t_value(choice: KeyChoice, x: &[u8], k: &[u8]) -> Value {
    let key = if choice == KeyChoice::Fixed { K_FIXED } else { k };
    xor_value(&Value::bytes(x), key)
}

fn has_secret() -> Assertion {
    Assertion::predicate("secret", "R.x() and R.k() are one-byte strings", |w| {
        let one = |v: Value| v.as_bytes().is_some_and(|b| b.len() == 1);
        Ok(one(query(w, "x")?) && one(query(w, "k")?))
    })
}

pub fn e_secret(choice: KeyChoice) -> Result<Evidence, ScenarioError> {
    let worlds = RESPONDENTS
        .iter()
        .enumerate()
        .map(|(i, (x, k))| {
            let w = LabeledWorld::new(format!("R{i}"), World::new(Nature::new(), r(x, k)));
            if choice == KeyChoice::Sampled {
                w
            } else {
                w.with_language([t_value(choice, x, k)])
            }
        })
        .collect();
    Ok(Evidence::new("E_secret", vec![has_secret()], worlds)?)
}

pub fn e_known(choice: KeyChoice) -> Result<Evidence, ScenarioError> {
    let mut worlds = Vec::new();
    for x in [b"a", b"b"] {
        for k in [[0x01u8], [0x02]] {
            let nature = Nature::new().with_read_only(LOC_X, "x", Value::bytes(x));
            let w = LabeledWorld::new(
                format!("x={}/k={:02x}", x[0] as char, k[0]),
                World::new(nature, r(x, &k)),
            );
            worlds.push(if choice == KeyChoice::Sampled {
                w
            } else {
                w.with_language([t_value(choice, x, &k)])
            });
        }
    }
    let stored = Assertion::predicate("known", "N[ℓ_x].read() == R.x()", |w| Ok(peek(w, LOC_X)? == query(w, "x")?));
    Ok(Evidence::new("E_known", vec![has_secret(), stored], worlds)?)
}

fn accept_all() -> Machine {
    super::common::accept_all("V")
}

fn p_message() -> Machine {
    message_post("P")
}

fn impossible(label: &str, e: Evidence, choice: KeyChoice) -> Case {
    let mut c = Case::new(label, accept_all(), exemplar(choice), target(choice), p_message());
    c.family = vec![exemplar(choice)];
    c.candidate_posts = candidates();
    let (check, why) = if choice == KeyChoice::Sampled {
        c.random_world = e.worlds.first().map(|w| w.label.clone());
        (CheckKind::ProbeRandom, "a key sampled inside T cannot be entailed")
    } else {
        (CheckKind::ProbeUnknownGoal, "the ciphertext depends on what only R knows")
    };
    c.evidence.insert(EvidenceKey::Weak, e);
    c.expectations = vec![Expectation::new(check, EvidenceKey::Weak, CheckVerdict::Holds, why)];
    c
}

fn a_respondent_key() -> Machine {
    run_fn("A_own_key", "A_own_key", |_, _, o| {
        let c = encrypt(KeyChoice::Respondent, o)?;
        o.send(c)?;
        Ok(None)
    })
}

fn a_from_nature(rho: Option<Vec<u8>>) -> Machine {
    run_fn("A_from_nature", "A_from_nature", move |_, _, o| {
        let c = expected_from_nature(o, rho.as_deref())?;
        o.send(c)?;
        Ok(None)
    })
}

fn a_silent() -> Machine {
    run_fn("A_silent", "A_silent", |_, _, _| Ok(None))
}

/// Encrypt `R.x` under the fixed key with fixed randomness.
fn randomized_target(rho: Option<Vec<u8>>) -> Machine {
    run_fn("T_enc", "T", move |_, _, o| {
        let rho = match &rho {
            Some(r) => r.clone(),
            None => o.tape().next_bytes(1),
        };
        Ok(Some(randomized(&ask(o, "x")?, &rho)))
    })
}

fn randomized_exemplar(rho: Option<Vec<u8>>) -> Machine {
    run_fn("A*_enc", "A*_enc", move |_, _, o| {
        let rho = match &rho {
            Some(r) => r.clone(),
            None => o.tape().next_bytes(1),
        };
        let c = randomized(&ask(o, "x")?, &rho);
        o.send(c)?;
        Ok(None)
    })
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;
    let mut cases = Vec::new();
    for choice in [KeyChoice::Respondent, KeyChoice::Fixed, KeyChoice::Sampled] {
        cases.push(impossible(&format!("secret/{}", choice.label()), e_secret(choice)?, choice));
    }
    for choice in [KeyChoice::Respondent, KeyChoice::Fixed, KeyChoice::Sampled] {
        let label = format!("known/{}", choice.label());
        if choice != KeyChoice::Fixed {
            cases.push(impossible(&label, e_known(choice)?, choice));
            continue;
        }
        let mut c = Case::new(&label, v_known(None), exemplar(choice), target(choice), p_message());
        c.family = vec![exemplar(choice), a_respondent_key(), a_from_nature(None), a_silent()];
        c.evidence.insert(Weak, e_known(choice)?);
        c.expectations = vec![
            Expectation::new(Demonstrability, Weak, Holds, "V recomputes the ciphertext from nature"),
            Expectation::new(Entailment, Weak, Holds, "a fixed key with a known plaintext is entailable"),
        ];
        cases.push(c);
    }

    let rho = Some(RHO_FIXED.to_vec());
    let mut c = Case::new(
        "randomized-fixed-rho",
        v_known(rho.clone()),
        randomized_exemplar(rho.clone()),
        randomized_target(rho.clone()),
        p_message(),
    );
    c.family = vec![randomized_exemplar(rho.clone()), a_from_nature(rho), a_silent()];
    c.evidence.insert(Weak, e_known(KeyChoice::Sampled)?);
    c.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "V recomputes the ciphertext with the fixed randomness"),
        Expectation::new(Entailment, Weak, Holds, "fixing the encryption randomness makes it entailable"),
    ];
    cases.push(c);

    let mut c = Case::new(
        "randomized-sampled",
        accept_all(),
        randomized_exemplar(None),
        randomized_target(None),
        p_message(),
    );
    let e = e_known(KeyChoice::Sampled)?;
    c.random_world = e.worlds.first().map(|w| w.label.clone());
    c.evidence.insert(Weak, e);
    c.family = vec![randomized_exemplar(None)];
    c.candidate_posts = candidates();
    c.expectations = vec![Expectation::new(
        ProbeRandom,
        Weak,
        Holds,
        "randomness drawn inside T cannot be entailed",
    )];
    cases.push(c);

    Ok(Scenario {
        name: "otp-table".into(),
        citation: CITATION.into(),
        cases,
    })
}
