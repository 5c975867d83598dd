//! Stateful machines with a method table.
//!
//! A [`Machine`] pairs an immutable [`Program`] (its code, shared behind an
//! `Arc`) with a mutable variable map. Methods receive the machine state, an
//! input value, and an [`Oracle`] through which they reach everything else:
//! other machines, their own randomness tape, the message channel, and the
//! step counter. What an oracle permits depends on who is calling; the kernel
//! hands verifiers, actions, targets and post-processors differently scoped
//! oracles.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::tape::Tape;
use crate::value::{Location, Value};

pub type MachineId = String;

/// Variable name to value. Unset variables read as ⊥.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State(BTreeMap<String, Value>);

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Value {
        self.0.get(name).cloned().unwrap_or(Value::Null)
    }

    pub fn set(&mut self, name: impl Into<String>, v: Value) {
        self.0.insert(name.into(), v);
    }

    pub fn with(mut self, name: impl Into<String>, v: impl Into<Value>) -> Self {
        self.set(name, v.into());
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ExecError {
    #[error("{machine} has no method {method}")]
    NoSuchMethod { machine: MachineId, method: String },
    #[error("no machine at location {0}")]
    EmptyLocation(Location),
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("re-entrant call into {0}")]
    Reentrant(MachineId),
    #[error("{0} produced no output")]
    MissingOutput(MachineId),
    #[error("{0}")]
    Fault(String),
}

impl ExecError {
    /// Errors that mean "the world does not have what the caller assumed".
    pub fn is_missing_method(&self) -> bool {
        matches!(
            self,
            ExecError::NoSuchMethod { .. } | ExecError::EmptyLocation(_)
        )
    }
}

pub type CallResult = Result<Option<Value>, ExecError>;

/// Everything a running method may reach outside its own state.
pub trait Oracle {
    /// Invoke `method` on the machine at `loc` in nature.
    fn nature(&mut self, loc: Location, method: &str, input: Value) -> CallResult;
    /// Invoke `method` on the respondent.
    fn respondent(&mut self, method: &str, input: Value) -> CallResult;
    /// Emit a message toward the verifier.
    fn send(&mut self, msg: Value) -> Result<(), ExecError>;
    /// Next buffered message for the verifier, if any remain.
    fn receive(&mut self) -> Result<Option<Value>, ExecError>;
    /// All messages sent toward the verifier during the execution.
    fn transcript(&self) -> Result<Vec<Value>, ExecError>;
    /// This machine's randomness tape.
    fn tape(&mut self) -> &mut Tape;
    /// Charge `n` steps against the budget.
    fn step(&mut self, n: u64) -> Result<(), ExecError>;
}

pub type MethodFn =
    Arc<dyn Fn(&mut State, Value, &mut dyn Oracle) -> CallResult + Send + Sync + 'static>;

/// A named method table.
#[derive(Clone)]
pub struct Program {
    name: String,
    methods: BTreeMap<String, MethodFn>,
}

impl Program {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            methods: BTreeMap::new(),
        }
    }

    pub fn method<F>(mut self, name: &str, f: F) -> Self
    where
        F: Fn(&mut State, Value, &mut dyn Oracle) -> CallResult + Send + Sync + 'static,
    {
        self.methods.insert(name.to_string(), Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn method_names(&self) -> impl Iterator<Item = &str> {
        self.methods.keys().map(String::as_str)
    }

    pub fn has_method(&self, name: &str) -> bool {
        self.methods.contains_key(name)
    }

    pub fn build(self, id: impl Into<MachineId>, state: State) -> Machine {
        Machine {
            id: id.into(),
            program: Arc::new(self),
            state,
        }
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Program")
            .field("name", &self.name)
            .field("methods", &self.methods.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Name of the program backing [`Machine::read_only`].
pub const READ_ONLY_PROGRAM: &str = "ReadOnly";

#[derive(Clone)]
pub struct Machine {
    id: MachineId,
    program: Arc<Program>,
    state: State,
}

impl Machine {
    pub fn new(id: impl Into<MachineId>, program: Arc<Program>, state: State) -> Self {
        Self {
            id: id.into(),
            program,
            state,
        }
    }

    /// A storage machine whose only method is `read()` returning `value`.
    pub fn read_only(id: impl Into<MachineId>, value: Value) -> Self {
        Program::new(READ_ONLY_PROGRAM)
            .method("read", |st, _, _| Ok(Some(st.get("value"))))
            .build(id, State::new().with("value", value))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn program(&self) -> &Arc<Program> {
        &self.program
    }

    pub fn program_name(&self) -> &str {
        self.program.name()
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn var(&self, name: &str) -> Value {
        self.state.get(name)
    }

    pub fn has_method(&self, name: &str) -> bool {
        self.program.has_method(name)
    }

    pub fn method_names(&self) -> Vec<String> {
        self.program.method_names().map(str::to_string).collect()
    }

    pub fn is_read_only_storage(&self) -> bool {
        self.program.name() == READ_ONLY_PROGRAM
    }

    /// Same code and state under a different id.
    pub fn renamed(&self, id: impl Into<MachineId>) -> Self {
        Self {
            id: id.into(),
            program: self.program.clone(),
            state: self.state.clone(),
        }
    }

    /// Same code under a different initial state.
    pub fn with_state(&self, state: State) -> Self {
        Self {
            id: self.id.clone(),
            program: self.program.clone(),
            state,
        }
    }

    /// Run one method. State updates are committed only when the method
    /// returns `Ok`; an undefined method leaves the state untouched.
    pub fn invoke(&mut self, method: &str, input: Value, oracle: &mut dyn Oracle) -> CallResult {
        let f = self
            .program
            .methods
            .get(method)
            .cloned()
            .ok_or_else(|| ExecError::NoSuchMethod {
                machine: self.id.clone(),
                method: method.to_string(),
            })?;
        let mut next = self.state.clone();
        let out = f(&mut next, input, oracle)?;
        self.state = next;
        Ok(out)
    }

    /// An action that runs this machine's code but answers every respondent
    /// call from a private copy of `respondent` instead of the real one.
    pub fn emulating(&self, respondent: &Machine) -> Machine {
        let inner = self.clone();
        let emulated = respondent.clone();
        let mut program = Program::new(format!("{}[R:={}]", self.program_name(), respondent.id()));
        for name in self.program.method_names() {
            let inner = inner.clone();
            let emulated = emulated.clone();
            let method = name.to_string();
            program = program.method(name, move |st, input, oracle| {
                let mut r = emulated.clone();
                let mut me = inner.with_state(st.clone());
                let mut shim = EmulatingOracle {
                    outer: oracle,
                    respondent: &mut r,
                };
                let out = me.invoke(&method, input, &mut shim)?;
                *st = me.state;
                Ok(out)
            });
        }
        Machine {
            id: self.id.clone(),
            program: Arc::new(program),
            state: self.state.clone(),
        }
    }
}

/// Structural identity: same id, same program, same variables.
impl PartialEq for Machine {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.program.name() == other.program.name()
            && self.state == other.state
    }
}

impl Eq for Machine {}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Machine")
            .field("id", &self.id)
            .field("program", &self.program.name())
            .field("state", &self.state)
            .finish()
    }
}

struct EmulatingOracle<'a, 'b> {
    outer: &'a mut dyn Oracle,
    respondent: &'b mut Machine,
}

impl Oracle for EmulatingOracle<'_, '_> {
    fn nature(&mut self, loc: Location, method: &str, input: Value) -> CallResult {
        self.outer.nature(loc, method, input)
    }

    fn respondent(&mut self, method: &str, input: Value) -> CallResult {
        self.outer.step(1)?;
        let mut inner = RespondentShim {
            outer: &mut *self.outer,
        };
        self.respondent.invoke(method, input, &mut inner)
    }

    fn send(&mut self, msg: Value) -> Result<(), ExecError> {
        self.outer.send(msg)
    }

    fn receive(&mut self) -> Result<Option<Value>, ExecError> {
        self.outer.receive()
    }

    fn transcript(&self) -> Result<Vec<Value>, ExecError> {
        self.outer.transcript()
    }

    fn tape(&mut self) -> &mut Tape {
        self.outer.tape()
    }

    fn step(&mut self, n: u64) -> Result<(), ExecError> {
        self.outer.step(n)
    }
}

/// What an emulated respondent sees: the emulator's tape and budget, nothing
/// else.
struct RespondentShim<'a> {
    outer: &'a mut dyn Oracle,
}

fn denied(what: &str) -> ExecError {
    ExecError::Fault(format!("{what} is not reachable from here"))
}

impl Oracle for RespondentShim<'_> {
    fn nature(&mut self, loc: Location, _method: &str, _input: Value) -> CallResult {
        Err(ExecError::EmptyLocation(loc))
    }

    fn respondent(&mut self, method: &str, _input: Value) -> CallResult {
        Err(ExecError::NoSuchMethod {
            machine: "R".into(),
            method: method.into(),
        })
    }

    fn send(&mut self, _msg: Value) -> Result<(), ExecError> {
        Err(denied("the verifier channel"))
    }

    fn receive(&mut self) -> Result<Option<Value>, ExecError> {
        Err(denied("the verifier channel"))
    }

    fn transcript(&self) -> Result<Vec<Value>, ExecError> {
        Err(denied("the transcript"))
    }

    fn tape(&mut self) -> &mut Tape {
        self.outer.tape()
    }

    fn step(&mut self, n: u64) -> Result<(), ExecError> {
        self.outer.step(n)
    }
}

/// One outgoing call observed by a [`Sandbox`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutgoingCall {
    pub loc: Location,
    pub method: String,
    pub input: Value,
}

/// Oracle for running a machine in isolation: its own tape, a step budget,
/// and outgoing nature calls recorded and answered with no output.
pub struct Sandbox {
    tape: Tape,
    steps: u64,
    budget: u64,
    pub outgoing: Vec<OutgoingCall>,
}

impl Sandbox {
    pub fn new(tape: Tape, budget: u64) -> Self {
        Self {
            tape,
            steps: 0,
            budget,
            outgoing: Vec::new(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}

impl Oracle for Sandbox {
    fn nature(&mut self, loc: Location, method: &str, input: Value) -> CallResult {
        self.step(1)?;
        self.outgoing.push(OutgoingCall {
            loc,
            method: method.to_string(),
            input,
        });
        Ok(None)
    }

    fn respondent(&mut self, method: &str, _input: Value) -> CallResult {
        Err(ExecError::NoSuchMethod {
            machine: "R".into(),
            method: method.into(),
        })
    }

    fn send(&mut self, _msg: Value) -> Result<(), ExecError> {
        Err(denied("the verifier channel"))
    }

    fn receive(&mut self) -> Result<Option<Value>, ExecError> {
        Err(denied("the verifier channel"))
    }

    fn transcript(&self) -> Result<Vec<Value>, ExecError> {
        Err(denied("the transcript"))
    }

    fn tape(&mut self) -> &mut Tape {
        &mut self.tape
    }

    fn step(&mut self, n: u64) -> Result<(), ExecError> {
        self.steps += n;
        if self.steps > self.budget {
            Err(ExecError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tape::RandomnessAssignment;

    fn counter() -> Machine {
        Program::new("Counter")
            .method("inc", |st, _, _| {
                let n = st.get("n").as_int().unwrap_or(0) + 1;
                st.set("n", Value::Int(n));
                Ok(Some(Value::Int(n)))
            })
            .method("quiet", |_, _, _| Ok(None))
            .method("fail", |st, _, _| {
                st.set("n", Value::Int(-100));
                Err(ExecError::Fault("boom".into()))
            })
            .build("C", State::new())
    }

    fn sandbox() -> Sandbox {
        Sandbox::new(RandomnessAssignment::new(0).tape_for("C"), 100)
    }

    #[test]
    fn undefined_method_leaves_state() {
        let mut m = counter();
        let before = m.state().clone();
        let err = m.invoke("nope", Value::Null, &mut sandbox()).unwrap_err();
        assert!(matches!(err, ExecError::NoSuchMethod { .. }));
        assert_eq!(m.state(), &before);
    }

    #[test]
    fn failed_method_does_not_commit() {
        let mut m = counter();
        m.invoke("inc", Value::Null, &mut sandbox()).unwrap();
        assert!(m.invoke("fail", Value::Null, &mut sandbox()).is_err());
        assert_eq!(m.var("n"), Value::Int(1));
    }

    #[test]
    fn absent_is_not_null() {
        let mut m = counter();
        assert_eq!(m.invoke("quiet", Value::Null, &mut sandbox()).unwrap(), None);
        assert_ne!(
            m.invoke("quiet", Value::Null, &mut sandbox()).unwrap(),
            Some(Value::Null)
        );
    }

    #[test]
    fn read_only_storage() {
        let mut m = Machine::read_only("X", "secret".into());
        assert!(m.is_read_only_storage());
        assert_eq!(
            m.invoke("read", Value::Null, &mut sandbox()).unwrap(),
            Some("secret".into())
        );
        assert_eq!(m.method_names(), vec!["read".to_string()]);
    }

    #[test]
    fn sandbox_records_outgoing_calls() {
        let mut m = Program::new("Sender")
            .method("send", |_, x, o| o.nature(4, "receive", x))
            .build("S", State::new());
        let mut sb = sandbox();
        assert_eq!(m.invoke("send", Value::Int(9), &mut sb).unwrap(), None);
        assert_eq!(
            sb.outgoing,
            vec![OutgoingCall {
                loc: 4,
                method: "receive".into(),
                input: Value::Int(9)
            }]
        );
    }

    #[test]
    fn emulated_respondent_answers_locally() {
        let r = Program::new("Knows")
            .method("pwd", |_, _, _| Ok(Some("hunter2".into())))
            .build("R", State::new());
        let action = Program::new("Ask")
            .method("run", |_, _, o| o.respondent("pwd", Value::Null))
            .build("A", State::new());
        let mut emul = action.emulating(&r);
        // The sandbox refuses respondent calls, so any answer came from the copy.
        assert_eq!(
            emul.invoke("run", Value::Null, &mut sandbox()).unwrap(),
            Some("hunter2".into())
        );
    }
}
