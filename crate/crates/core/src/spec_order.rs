//! Bounded partial and full specification between machines.
//!
//! `spec ≺ candidate` holds when the candidate defines every method of the
//! spec and, for every sequence of calls to those methods, answers with the
//! same outputs whenever the spec answers at all. The relation is undecidable
//! in general; here it is decided up to a probe depth over a finite input
//! alphabet. Every probe starts both machines from their initial state with
//! identical tapes, and outgoing calls a method makes are part of what is
//! compared.

use crate::kernel::DEFAULT_BUDGET;
use crate::machine::{ExecError, Machine, OutgoingCall, Sandbox};
use crate::tape::RandomnessAssignment;
use crate::value::Value;

/// Tape id shared by both sides of a probe.
const PROBE_TAPE: &str = "probe";

/// A sequence of `(method, input)` calls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceProbe {
    pub calls: Vec<(String, Value)>,
}

/// What one call did, as seen from outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub output: Result<Option<Value>, String>,
    pub outgoing: Vec<OutgoingCall>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    MissingMethod(String),
    Divergence {
        probe: TraceProbe,
        step: usize,
        expected: Observation,
        got: Observation,
    },
}

#[derive(Clone, Debug)]
pub struct ProbeBounds {
    pub depth: usize,
    pub alphabet: Vec<Value>,
    pub budget: u64,
}

impl ProbeBounds {
    pub fn new(depth: usize, alphabet: impl IntoIterator<Item = Value>) -> Self {
        Self {
            depth,
            alphabet: alphabet.into_iter().collect(),
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Run `probe` against a fresh copy of `machine`.
pub fn observe(machine: &Machine, probe: &TraceProbe, budget: u64) -> Result<Vec<Observation>, ExecError> {
    let mut m = machine.clone();
    let tape = RandomnessAssignment::new(0).tape_for(PROBE_TAPE);
    let mut sandbox = Sandbox::new(tape, budget);
    let mut out = Vec::with_capacity(probe.calls.len());
    for (method, input) in &probe.calls {
        let before = sandbox.outgoing.len();
        let output = match m.invoke(method, input.clone(), &mut sandbox) {
            Err(e @ ExecError::BudgetExceeded(_)) => return Err(e),
            Err(e) => Err(e.to_string()),
            Ok(v) => Ok(v),
        };
        out.push(Observation {
            output,
            outgoing: sandbox.outgoing[before..].to_vec(),
        });
    }
    Ok(out)
}

/// First probe, shortest first, on which `candidate` fails to implement
/// `spec`. `None` means the bounded relation holds.
pub fn find_witness(
    spec: &Machine,
    candidate: &Machine,
    bounds: &ProbeBounds,
) -> Result<Option<Witness>, ExecError> {
    assert!(bounds.depth >= 1, "probe depth must be at least 1");
    assert!(!bounds.alphabet.is_empty(), "probe alphabet must be non-empty");

    let methods = spec.method_names();
    if let Some(missing) = methods.iter().find(|m| !candidate.has_method(m)) {
        return Ok(Some(Witness::MissingMethod(missing.clone())));
    }

    let letters: Vec<(String, Value)> = methods
        .iter()
        .flat_map(|m| bounds.alphabet.iter().map(move |v| (m.clone(), v.clone())))
        .collect();

    for len in 1..=bounds.depth {
        let mut idx = vec![0usize; len];
        loop {
            let probe = TraceProbe {
                calls: idx.iter().map(|&i| letters[i].clone()).collect(),
            };
            let expected = observe(spec, &probe, bounds.budget)?;
            let got = observe(candidate, &probe, bounds.budget)?;
            if let Some(step) = first_divergence(&expected, &got) {
                return Ok(Some(Witness::Divergence {
                    probe,
                    step,
                    expected: expected[step].clone(),
                    got: got[step].clone(),
                }));
            }
            if !advance(&mut idx, letters.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn first_divergence(expected: &[Observation], got: &[Observation]) -> Option<usize> {
    expected.iter().zip(got).position(|(e, g)| {
        let output_differs = match &e.output {
            Ok(Some(v)) => g.output.as_ref().ok() != Some(&Some(v.clone())),
            // The spec says nothing when it produces no output.
            _ => false,
        };
        output_differs || e.outgoing != g.outgoing
    })
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Bounded `spec ≺ candidate`.
pub fn bounded_implements(spec: &Machine, candidate: &Machine, bounds: &ProbeBounds) -> Result<bool, ExecError> {
    Ok(find_witness(spec, candidate, bounds)?.is_none())
}

/// Bounded `a ∼ b`: implementation in both directions.
pub fn bounded_equivalent(a: &Machine, b: &Machine, bounds: &ProbeBounds) -> Result<bool, ExecError> {
    Ok(bounded_implements(a, b, bounds)? && bounded_implements(b, a, bounds)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Program, State};

    fn register(extra: bool) -> Machine {
        let mut p = Program::new(if extra { "RegisterPlus" } else { "Register" })
            .method("get", |st, _, _| Ok(Some(st.get("v"))));
        if extra {
            p = p.method("put", |st, x, _| {
                st.set("v", x);
                Ok(None)
            });
        }
        p.build("M", State::new().with("v", "a"))
    }

    fn bounds() -> ProbeBounds {
        ProbeBounds::new(2, [Value::from("a"), Value::from("b")])
    }

    #[test]
    fn missing_method_witness() {
        let w = find_witness(&register(true), &register(false), &bounds()).unwrap();
        assert_eq!(w, Some(Witness::MissingMethod("put".into())));
    }

    #[test]
    fn extra_methods_are_allowed() {
        assert!(bounded_implements(&register(false), &register(true), &bounds()).unwrap());
        assert!(!bounded_equivalent(&register(false), &register(true), &bounds()).unwrap());
    }

    #[test]
    fn divergence_is_shortest_and_replayable() {
        let other = register(false).with_state(State::new().with("v", "b"));
        let w = find_witness(&register(false), &other, &bounds()).unwrap().unwrap();
        let Witness::Divergence { probe, step, expected, got } = w else {
            panic!("expected divergence");
        };
        assert_eq!(probe.calls.len(), 1);
        assert_eq!(observe(&register(false), &probe, 100).unwrap()[step], expected);
        assert_eq!(observe(&other, &probe, 100).unwrap()[step], got);
        assert_ne!(expected, got);
    }

    #[test]
    fn odometer_covers_all_sequences() {
        let mut idx = vec![0; 3];
        let mut n = 1;
        while advance(&mut idx, 4) {
            n += 1;
        }
        assert_eq!(n, 64);
    }
}
