//! Small machine builders shared by the scenarios.

use crate::kernel::{World, DEFAULT_BUDGET, RUN};
use crate::machine::{CallResult, ExecError, Machine, Oracle, Program, State};
use crate::value::{Location, Value};

/// A machine whose only method is `run`.
pub fn run_fn<F>(program: &str, id: &str, f: F) -> Machine
where
    F: Fn(&mut State, Value, &mut dyn Oracle) -> CallResult + Send + Sync + 'static,
{
    Program::new(program).method(RUN, f).build(id, State::new())
}

/// Call a nature method; no output reads as ⊥.
pub fn nat(o: &mut dyn Oracle, loc: Location, method: &str, input: Value) -> Result<Value, ExecError> {
    Ok(o.nature(loc, method, input)?.unwrap_or(Value::Null))
}

/// Call a respondent method with ⊥; no output reads as ⊥.
pub fn ask(o: &mut dyn Oracle, method: &str) -> Result<Value, ExecError> {
    Ok(o.respondent(method, Value::Null)?.unwrap_or(Value::Null))
}

/// Next message from the action, or ⊥.
pub fn receive_or_null(o: &mut dyn Oracle) -> Result<Value, ExecError> {
    Ok(o.receive()?.unwrap_or(Value::Null))
}

/// First message of the transcript, or ⊥.
pub fn first_message(o: &mut dyn Oracle) -> Result<Value, ExecError> {
    Ok(o.transcript()?.into_iter().next().unwrap_or(Value::Null))
}

pub fn accept_all(id: &str) -> Machine {
    run_fn("V_acceptAll", id, |_, _, _| Ok(Some(Value::Bool(true))))
}

pub fn do_nothing(id: &str) -> Machine {
    run_fn("A_nothing", id, |_, _, _| Ok(None))
}

/// A respondent whose methods return the like-named state variable.
pub fn respondent(program: &str, id: &str, vars: &[(&str, Value)]) -> Machine {
    let mut p = Program::new(program);
    let mut state = State::new();
    for (name, v) in vars {
        let key = name.to_string();
        p = p.method(name, move |st, _, _| Ok(Some(st.get(&key))));
        state.set(*name, v.clone());
    }
    p.build(id, state)
}

/// A respondent that defines the same methods but halts without output.
pub fn silent_respondent(id: &str, methods: &[&str]) -> Machine {
    let mut p = Program::new("R_bot");
    for m in methods {
        p = p.method(m, |_, _, _| Ok(None));
    }
    p.build(id, State::new())
}

/// Query a respondent method outside any execution.
pub fn query(world: &World, method: &str) -> Result<Value, ExecError> {
    let mut w = world.snapshot();
    Ok(w.invoke_respondent(method, Value::Null, DEFAULT_BUDGET)?
        .unwrap_or(Value::Null))
}

/// Read a read-only location outside any execution.
pub fn peek(world: &World, loc: Location) -> Result<Value, ExecError> {
    let mut w = world.snapshot();
    Ok(w.invoke_nature(loc, "read", Value::Null, DEFAULT_BUDGET)?
        .unwrap_or(Value::Null))
}

/// Device variable, ⊥ if the location is empty.
pub fn device_var(world: &World, loc: Location, var: &str) -> Value {
    world.nature.get(loc).map(|m| m.var(var)).unwrap_or(Value::Null)
}

/// Bytewise XOR of a byte value with `key`, ⊥ for anything else.
pub fn xor_value(v: &Value, key: &[u8]) -> Value {
    match v.as_bytes().map(|b| crate::crypto::otp(key, b)) {
        Some(Ok(out)) => Value::Bytes(out),
        _ => Value::Null,
    }
}

/// Bitwise complement of a byte value, ⊥ for anything else.
pub fn complement(v: &Value) -> Value {
    match v.as_bytes() {
        Some(b) => Value::Bytes(b.iter().map(|x| !x).collect()),
        None => Value::Null,
    }
}

/// Candidate post-processors shared by the impossibility cases.
pub fn message_post(id: &str) -> Machine {
    run_fn("P_message", id, |_, _, o| Ok(Some(first_message(o)?)))
}

pub fn null_post(id: &str) -> Machine {
    run_fn("P_null", id, |_, _, _| Ok(Some(Value::Null)))
}

pub fn flipped_message_post(id: &str) -> Machine {
    run_fn("P_flip", id, |_, _, o| Ok(Some(complement(&first_message(o)?))))
}

pub fn const_post(id: &str, v: Value) -> Machine {
    run_fn("P_const", id, move |_, _, _| Ok(Some(v.clone())))
}
