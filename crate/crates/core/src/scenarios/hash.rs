//! Producing a file whose hash the government already holds.

use super::common::{ask, first_message, receive_or_null, nat, peek, query, respondent, run_fn};
use super::{Case, CheckKind, EvidenceKey, Expectation, Params, Scenario, ScenarioDef, ScenarioError};
use crate::checkers::CheckVerdict;
use crate::crypto::HashSpec;
use crate::evidence::{Assertion, Evidence, LabeledWorld};
use crate::kernel::{Nature, World};
use crate::machine::Machine;
use crate::value::{Location, Value};

pub const CITATION: &str = "verify a produced file against a known hash";

/// The file the respondent is compelled to produce.
pub const FILE: &[u8] = b"ab";
/// A second preimage of `FILE` under the folding hash.
pub const COLLISION: &[u8] = b"ba";
pub const DECOY: &[u8] = b"zz";

pub const DEF: ScenarioDef = ScenarioDef {
    name: "hash",
    citation: CITATION,
    params: &[],
    build,
};

/// Accept iff the first message hashes to `y`.
pub fn v_hash(h: HashSpec, y: Vec<u8>) -> Machine {
    run_fn("V_hash", "V", move |_, _, o| {
        let got = receive_or_null(o)?;
        Ok(Some(Value::Bool(got.as_bytes().is_some_and(|x| h.evaluate(x) == y))))
    })
}

pub fn a_star() -> Machine {
    run_fn("A*_hash", "A*_hash", |_, _, o| {
        let loc = ask(o, "findFile")?.as_loc().unwrap_or(0);
        let x = nat(o, loc, "read", Value::Null)?;
        o.send(x)?;
        Ok(None)
    })
}

/// Send the respondent's known second preimage.
pub fn a_collide() -> Machine {
    run_fn("A_collide", "A_collide", |_, _, o| {
        let x = ask(o, "collide")?;
        o.send(x)?;
        Ok(None)
    })
}

fn a_guess() -> Machine {
    run_fn("A_guess", "A_guess", |_, _, o| {
        o.send(Value::bytes(DECOY))?;
        Ok(None)
    })
}

pub fn t_file() -> Machine {
    run_fn("T_file", "T", |_, _, o| {
        let loc = ask(o, "findFile")?.as_loc().unwrap_or(0);
        Ok(Some(nat(o, loc, "read", Value::Null)?))
    })
}

pub fn p_received() -> Machine {
    run_fn("P_received", "P", |_, _, o| Ok(Some(first_message(o)?)))
}

fn world(file_at: Location, decoy_at: Location, knows_collision: bool) -> World {
    let mut vars = vec![("findFile", Value::Loc(file_at))];
    if knows_collision {
        vars.push(("collide", Value::bytes(COLLISION)));
    }
    World::new(
        Nature::new()
            .with_read_only(file_at, "file", Value::bytes(FILE))
            .with_read_only(decoy_at, "decoy", Value::bytes(DECOY)),
        respondent(if knows_collision { "R_collide" } else { "R_hash" }, "R", &vars),
    )
}

fn case(label: &str, h: HashSpec) -> Result<Case, ScenarioError> {
    let y = h.evaluate(FILE);
    let (hp, y_check) = (h.clone(), y.clone());
    let locates = Assertion::predicate("file", "h(N[R.findFile()].read()) == y", move |w| {
        let loc = query(w, "findFile")?.as_loc().unwrap_or(0);
        Ok(peek(w, loc)?.as_bytes().is_some_and(|x| hp.evaluate(x) == y_check))
    });
    let worlds = vec![
        LabeledWorld::new("file@3", world(3, 5, false)),
        LabeledWorld::new("file@5", world(5, 3, false)),
        LabeledWorld::new("file@3/collide", world(3, 5, true)),
    ];
    let e = Evidence::new("E_hash", vec![locates], worlds)?;

    let injective = h.known_collision.is_none();
    let mut c = Case::new(label, v_hash(h, y), a_star(), t_file(), p_received());
    c.family = vec![a_star(), a_collide(), a_guess()];
    c.evidence.insert(EvidenceKey::Weak, e);
    use CheckKind::*;
    use CheckVerdict::*;
    use EvidenceKey::*;
    c.expectations = vec![Expectation::new(Demonstrability, Weak, Holds, "V_hash is demonstrable under E_hash")];
    c.expectations.push(if injective {
        Expectation::new(Entailment, Weak, Holds, "an injective hash pins the produced file")
    } else {
        Expectation::new(Entailment, Weak, Fails, "a hash collision lets a different file pass")
            .at_cell("file@3/collide", "A_collide", 0)
    });
    Ok(c)
}

fn build(_: &Params) -> Result<Scenario, ScenarioError> {
    Ok(Scenario {
        name: "hash".into(),
        citation: CITATION.into(),
        cases: vec![case("injective", HashSpec::injective())?, case("colliding", HashSpec::colliding())?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{execute, DEFAULT_BUDGET};

    #[test]
    fn wrong_preimage_is_rejected() {
        let h = HashSpec::injective();
        let y = h.evaluate(FILE);
        let r = execute(&v_hash(h, y), &a_guess(), world(3, 5, false), DEFAULT_BUDGET);
        assert!(!r.accepted());
    }

    #[test]
    fn collision_is_real() {
        let h = HashSpec::colliding();
        assert_eq!(h.evaluate(FILE), h.evaluate(COLLISION));
        assert_ne!(HashSpec::injective().evaluate(FILE), HashSpec::injective().evaluate(COLLISION));
    }
}
