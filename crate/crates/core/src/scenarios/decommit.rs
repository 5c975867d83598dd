//! Compelled decommitment: open a commitment the government already holds.

use super::common::{ask, complement, first_message, receive_or_null, peek, query, respondent, run_fn};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::crypto::{BindingClass, CommitmentScheme};
use crate::evidence::{Assertion, Evidence, Extension, LabeledWorld};
use crate::kernel::{Nature, World};
use crate::machine::{ExecError, Machine, Oracle};
use crate::value::{Location, Value};

pub const LOC_SCHEME: Location = 2;
pub const LOC_COMM: Location = 3;
pub const CITATION: &str = "compelled decommitment of a held commitment";

/// The message the equivocating action opens to.
pub const EQUIVOCAL: &[u8] = b"Z";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "decommit",
    citation: CITATION,
    params: &[],
    build,
};

fn scheme_at(o: &mut dyn Oracle) -> Result<Option<CommitmentScheme>, ExecError> {
    let name = super::common::nat(o, LOC_SCHEME, "read", Value::Null)?;
    Ok(name
        .as_bytes()
        .and_then(|b| std::str::from_utf8(b).ok())
        .and_then(CommitmentScheme::by_name))
}

/// Accept iff the first message is a pair `(x′, d′)` opening the held
/// commitment.
pub fn v_decom() -> Machine {
    run_fn("V_decom", "V", |_, _, o| {
        let scheme = scheme_at(o)?;
        let c = super::common::nat(o, LOC_COMM, "read", Value::Null)?;
        let msg = receive_or_null(o)?;
        let ok = match (scheme, c.as_bytes(), msg.as_pair()) {
            (Some(s), Some(c), Some((x, d))) => match (x.as_bytes(), d.as_bytes()) {
                (Some(x), Some(d)) => s.check(c, d, x),
                _ => false,
            },
            _ => false,
        };
        Ok(Some(Value::Bool(ok)))
    })
}

pub fn a_star() -> Machine {
    run_fn("A*_decom", "A*_decom", |_, _, o| {
        let x = ask(o, "secret")?;
        let d = ask(o, "decom")?;
        o.send(Value::pair(x, d))?;
        Ok(None)
    })
}

/// Open the commitment to `x2` whenever the scheme allows it.
pub fn a_equivocate(x2: &[u8]) -> Machine {
    let x2 = x2.to_vec();
    run_fn("A_equivocate", "A_equivocate", move |_, _, o| {
        let scheme = scheme_at(o)?;
        let c = super::common::nat(o, LOC_COMM, "read", Value::Null)?;
        if let (Some(s), Some(c)) = (scheme, c.as_bytes()) {
            if let Some(d) = s.equivocate(c, &x2) {
                o.send(Value::pair(Value::bytes(&x2), Value::Bytes(d)))?;
            }
        }
        Ok(None)
    })
}

fn a_resend() -> Machine {
    run_fn("A_resend", "A_resend", |_, _, o| {
        let msg = Value::pair(ask(o, "secret")?, ask(o, "decom")?);
        o.send(msg.clone())?;
        o.send(msg)?;
        Ok(None)
    })
}

fn a_swap() -> Machine {
    run_fn("A_swap", "A_swap", |_, _, o| {
        let x = ask(o, "secret")?;
        let d = ask(o, "decom")?;
        o.send(Value::pair(d, x))?;
        Ok(None)
    })
}

pub fn t_decom() -> Machine {
    run_fn("T_decom", "T", |_, _, o| Ok(Some(ask(o, "secret")?)))
}

pub fn p_decom() -> Machine {
    run_fn("P_decom", "P", |_, _, o| {
        Ok(Some(first_message(o)?.as_pair().map(|(x, _)| x.clone()).unwrap_or(Value::Null)))
    })
}

/// `f(R.secret())` for f = bitwise complement.
pub fn t_f() -> Machine {
    run_fn("T_f", "T", |_, _, o| Ok(Some(complement(&ask(o, "secret")?))))
}

pub fn p_f() -> Machine {
    run_fn("P_f", "P", |_, _, o| {
        let x = first_message(o)?.as_pair().map(|(x, _)| x.clone()).unwrap_or(Value::Null);
        Ok(Some(complement(&x)))
    })
}

/// The world where `R` committed to `x` with randomness `r`.
pub fn world(scheme: CommitmentScheme, x: &[u8], r: &[u8]) -> World {
    let (c, d) = scheme.commit(x, r).expect("toy-sized inputs");
    World::new(
        Nature::new()
            .with_read_only(LOC_SCHEME, "scheme", Value::from(scheme.name()))
            .with_read_only(LOC_COMM, "c", Value::Bytes(c)),
        respondent(
            "R_decom",
            "R",
            &[("secret", Value::bytes(x)), ("decom", Value::Bytes(d))],
        ),
    )
}

fn scheme_of(w: &World) -> Result<Option<CommitmentScheme>, ExecError> {
    let v = peek(w, LOC_SCHEME)?;
    Ok(v.as_bytes()
        .and_then(|b| std::str::from_utf8(b).ok())
        .and_then(CommitmentScheme::by_name))
}

fn evidences() -> Result<(Evidence, Evidence), ScenarioError> {
    let opens = Assertion::predicate("opens", "Check(c, R.decom(), R.secret()) holds", |w| {
        let (Some(s), c, d, x) = (scheme_of(w)?, peek(w, LOC_COMM)?, query(w, "decom")?, query(w, "secret")?) else {
            return Ok(false);
        };
        Ok(match (c.as_bytes(), d.as_bytes(), x.as_bytes()) {
            (Some(c), Some(d), Some(x)) => s.check(c, d, x),
            _ => false,
        })
    });
    let equivocable = |label: &str, x: &[u8], r: &[u8]| Extension {
        parent: "*".into(),
        world: LabeledWorld::new(label, world(CommitmentScheme::XorPad, x, r)),
    };
    let binding = Assertion::predicate("star", "the commitment scheme is perfectly binding", |w| {
        Ok(scheme_of(w)?.is_some_and(|s| s.binding_class() == BindingClass::PerfectlyBinding))
    })
    .droppable(vec![
        equivocable("xor-pad/a", b"a", &[0x13]),
        equivocable("xor-pad/b", b"b", &[0x2c]),
    ]);
    let worlds = vec![
        LabeledWorld::new("transparent/ab", world(CommitmentScheme::Transparent, b"ab", b"r1")),
        LabeledWorld::new("transparent/cd", world(CommitmentScheme::Transparent, b"cd", b"r2")),
    ];
    let strong = Evidence::new("E_bind", vec![opens, binding], worlds)?;
    let weak = strong.drop_assertion("E_decom", "star")?;
    Ok((weak, strong))
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    let (weak, strong) = evidences()?;
    let family = vec![a_star(), a_equivocate(EQUIVOCAL), a_resend(), a_swap()];
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;

    let mut main = Case::new("main", v_decom(), a_star(), t_decom(), p_decom());
    main.family = family.clone();
    main.evidence.insert(Weak, weak.clone());
    main.evidence.insert(Strong, strong.clone());
    main.edges = vec![(Strong, Weak)];
    main.expectations = vec![
        Expectation::new(Demonstrability, Weak, Holds, "demonstrability does not need binding"),
        Expectation::new(Demonstrability, Strong, Holds, "V_decom is demonstrable under E_bind"),
        Expectation::new(Entailment, Strong, Holds, "V_decom entails T_decom under E_bind"),
        Expectation::new(Entailment, Weak, Fails, "an equivocable scheme opens to another message")
            .at_cell("xor-pad/a", "A_equivocate", 0),
        Expectation::new(Monotonicity, Weak, Holds, "demonstrability and conformity are monotone in evidence"),
    ];

    let mut composed = Case::new("t-f", v_decom(), a_star(), t_f(), p_f());
    composed.family = family;
    composed.evidence.insert(Strong, strong);
    composed.expectations = vec![Expectation::new(
        Entailment,
        Strong,
        Holds,
        "entailing T_decom entails any function of the secret",
    )];

    Ok(Scenario {
        name: "decommit".into(),
        citation: CITATION.into(),
        cases: vec![main, composed],
    })
}
