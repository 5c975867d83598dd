//! Execution engine.
//!
//! An execution runs in two phases. The action runs first with access to
//! nature and the respondent; every value it sends toward the verifier is
//! buffered. The verifier then runs with access to nature only, consuming the
//! buffered messages in order. Its output decides the verdict: `true` is
//! Accept, anything else (including no output or an error) is Reject, and an
//! exhausted step budget is the separate non-accepting verdict `Budget`.
//! Messages the verifier never consumes stay in the transcript.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::machine::{CallResult, ExecError, Machine, MachineId, Oracle};
use crate::tape::{RandomnessAssignment, Tape};
use crate::value::{Location, Value};

pub const DEFAULT_BUDGET: u64 = 100_000;

/// Entry-point method of verifiers, actions, targets and post-processors.
pub const RUN: &str = "run";

/// Location-indexed machines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Nature {
    slots: BTreeMap<Location, Machine>,
    read_only: BTreeSet<Location>,
}

impl Nature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, loc: Location, machine: Machine) -> Self {
        self.insert(loc, machine);
        self
    }

    /// Store `value` at `loc` as read-only storage.
    pub fn with_read_only(mut self, loc: Location, id: &str, value: Value) -> Self {
        self.slots.insert(loc, Machine::read_only(id, value));
        self.read_only.insert(loc);
        self
    }

    pub fn insert(&mut self, loc: Location, machine: Machine) {
        self.read_only.remove(&loc);
        self.slots.insert(loc, machine);
    }

    pub fn get(&self, loc: Location) -> Option<&Machine> {
        self.slots.get(&loc)
    }

    pub fn is_read_only(&self, loc: Location) -> bool {
        self.read_only.contains(&loc)
    }

    pub fn locations(&self) -> impl Iterator<Item = Location> + '_ {
        self.slots.keys().copied()
    }

    pub fn machines(&self) -> impl Iterator<Item = (Location, &Machine)> {
        self.slots.iter().map(|(l, m)| (*l, m))
    }
}

/// A respondent together with the nature it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    pub nature: Nature,
    pub respondent: Machine,
    pub assignment: RandomnessAssignment,
}

impl World {
    pub fn new(nature: Nature, respondent: Machine) -> Self {
        Self {
            nature,
            respondent,
            assignment: RandomnessAssignment::default(),
        }
    }

    /// Deep copy. Machines carry their state by value and share only their
    /// immutable code, so the copy is independent of `self`.
    pub fn snapshot(&self) -> World {
        self.clone()
    }

    pub fn with_seed(&self, seed: u64) -> World {
        World {
            nature: self.nature.clone(),
            respondent: self.respondent.clone(),
            assignment: self.assignment.with_seed(seed),
        }
    }

    pub fn with_assignment(&self, assignment: RandomnessAssignment) -> World {
        World {
            nature: self.nature.clone(),
            respondent: self.respondent.clone(),
            assignment,
        }
    }

    /// Same nature and respondent, ignoring randomness.
    pub fn same_setting(&self, other: &World) -> bool {
        self.nature == other.nature && self.respondent == other.respondent
    }

    /// Invoke a nature method directly, as an outside driver.
    pub fn invoke_nature(
        &mut self,
        loc: Location,
        method: &str,
        input: Value,
        budget: u64,
    ) -> CallResult {
        self.drive(budget, |s| s.call_nature(loc, method, input))
    }

    /// Invoke a respondent method directly, as an outside driver.
    pub fn invoke_respondent(&mut self, method: &str, input: Value, budget: u64) -> CallResult {
        self.drive(budget, |s| s.call_respondent(method, input))
    }

    fn drive(&mut self, budget: u64, f: impl FnOnce(&mut Session<'_>) -> CallResult) -> CallResult {
        let placeholder = World::new(Nature::new(), self.respondent.clone());
        let world = std::mem::replace(self, placeholder);
        let mut shared = Shared::new(world, budget, Vec::new());
        let out = {
            let mut s = Session::new(&mut shared, Role::Driver, "driver".into());
            f(&mut s)
        };
        *self = shared.into_world();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Accept,
    Reject,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CallOutcome {
    Returned(Value),
    Absent,
    NoSuchMethod,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub caller: MachineId,
    pub callee: MachineId,
    pub method: String,
    pub input: Value,
    pub outcome: CallOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub events: Vec<Event>,
    pub messages: Vec<Value>,
    /// How many of `messages` the verifier read.
    pub consumed: usize,
    pub verdict: Verdict,
    pub steps: u64,
}

impl Transcript {
    /// Calls the respondent received, in order.
    pub fn respondent_calls<'a>(&'a self, respondent: &'a str) -> impl Iterator<Item = &'a Event> {
        self.events.iter().filter(move |e| e.callee == respondent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionResult {
    pub transcript: Transcript,
    pub post_world: World,
}

impl ExecutionResult {
    pub fn accepted(&self) -> bool {
        self.transcript.verdict == Verdict::Accept
    }
}

/// Run the action, then the verifier, against `world`.
pub fn execute(verifier: &Machine, action: &Machine, world: World, budget: u64) -> ExecutionResult {
    let mut shared = Shared::new(world, budget, Vec::new());

    let phase1 = {
        let mut me = action.clone();
        let mut s = Session::new(&mut shared, Role::Action, action.id().into());
        s.step(1).and_then(|_| me.invoke(RUN, Value::Null, &mut s))
    };
    let verdict = match phase1 {
        Err(ExecError::BudgetExceeded(_)) => Verdict::Budget,
        Err(_) => Verdict::Reject,
        Ok(_) => {
            let mut me = verifier.clone();
            let mut s = Session::new(&mut shared, Role::Verifier, verifier.id().into());
            match s.step(1).and_then(|_| me.invoke(RUN, Value::Null, &mut s)) {
                Ok(Some(Value::Bool(true))) => Verdict::Accept,
                Err(ExecError::BudgetExceeded(_)) => Verdict::Budget,
                _ => Verdict::Reject,
            }
        }
    };

    let transcript = Transcript {
        events: std::mem::take(&mut shared.events),
        messages: std::mem::take(&mut shared.outbox),
        consumed: shared.cursor,
        verdict,
        steps: shared.steps,
    };
    ExecutionResult {
        transcript,
        post_world: shared.into_world(),
    }
}

/// Run a target against a world. Targets must produce a value.
pub fn run_target(target: &Machine, world: World, budget: u64) -> Result<Value, ExecError> {
    let mut shared = Shared::new(world, budget, Vec::new());
    let mut me = target.clone();
    let mut s = Session::new(&mut shared, Role::Target, target.id().into());
    s.step(1)?;
    me.invoke(RUN, Value::Null, &mut s)?
        .ok_or_else(|| ExecError::MissingOutput(target.id().into()))
}

/// Run a post-processor on the world left behind by an execution and the
/// messages of its transcript.
pub fn run_post(
    post: &Machine,
    post_world: World,
    transcript: &Transcript,
    budget: u64,
) -> Result<Value, ExecError> {
    let mut shared = Shared::new(post_world, budget, transcript.messages.clone());
    let mut me = post.clone();
    let mut s = Session::new(&mut shared, Role::Post, post.id().into());
    s.step(1)?;
    me.invoke(RUN, Value::Null, &mut s)?
        .ok_or_else(|| ExecError::MissingOutput(post.id().into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Action,
    Verifier,
    Target,
    Post,
    Nature,
    Respondent,
    Driver,
}

struct Shared {
    nature: Nature,
    respondent: Option<Machine>,
    respondent_id: MachineId,
    assignment: RandomnessAssignment,
    busy: BTreeSet<Location>,
    tapes: BTreeMap<MachineId, Tape>,
    steps: u64,
    budget: u64,
    events: Vec<Event>,
    outbox: Vec<Value>,
    cursor: usize,
}

impl Shared {
    fn new(world: World, budget: u64, outbox: Vec<Value>) -> Self {
        Self {
            respondent_id: world.respondent.id().to_string(),
            nature: world.nature,
            respondent: Some(world.respondent),
            assignment: world.assignment,
            busy: BTreeSet::new(),
            tapes: BTreeMap::new(),
            steps: 0,
            budget,
            events: Vec::new(),
            outbox,
            cursor: 0,
        }
    }

    fn into_world(self) -> World {
        World {
            nature: self.nature,
            respondent: self
                .respondent
                .expect("respondent is restored after every call"),
            assignment: self.assignment,
        }
    }

    fn record(&mut self, caller: &str, callee: &str, method: &str, input: Value, out: &CallResult) {
        let outcome = match out {
            Ok(Some(v)) => CallOutcome::Returned(v.clone()),
            Ok(None) => CallOutcome::Absent,
            Err(e) if e.is_missing_method() => CallOutcome::NoSuchMethod,
            Err(e) => CallOutcome::Failed(e.to_string()),
        };
        self.events.push(Event {
            caller: caller.to_string(),
            callee: callee.to_string(),
            method: method.to_string(),
            input,
            outcome,
        });
    }
}

struct Session<'s> {
    shared: &'s mut Shared,
    role: Role,
    me: MachineId,
}

impl<'s> Session<'s> {
    fn new(shared: &'s mut Shared, role: Role, me: MachineId) -> Self {
        Self { shared, role, me }
    }

    fn call_nature(&mut self, loc: Location, method: &str, input: Value) -> CallResult {
        if matches!(self.role, Role::Respondent) {
            return Err(ExecError::EmptyLocation(loc));
        }
        self.step(1)?;
        let Some(machine) = self.shared.nature.slots.get(&loc) else {
            let out = Err(ExecError::EmptyLocation(loc));
            let callee = format!("N[{loc}]");
            self.shared.record(&self.me, &callee, method, input, &out);
            return out;
        };
        let callee = machine.id().to_string();
        if !self.shared.busy.insert(loc) {
            return Err(ExecError::Reentrant(callee));
        }
        let mut machine = machine.clone();
        let out = {
            let mut sub = Session::new(&mut *self.shared, Role::Nature, callee.clone());
            machine.invoke(method, input.clone(), &mut sub)
        };
        self.shared.busy.remove(&loc);
        if !self.shared.nature.read_only.contains(&loc) {
            self.shared.nature.slots.insert(loc, machine);
        }
        self.shared.record(&self.me, &callee, method, input, &out);
        out
    }

    fn call_respondent(&mut self, method: &str, input: Value) -> CallResult {
        let callee = self.shared.respondent_id.clone();
        if !matches!(self.role, Role::Action | Role::Target | Role::Driver) {
            let out = Err(ExecError::NoSuchMethod {
                machine: callee.clone(),
                method: method.to_string(),
            });
            self.shared.record(&self.me, &callee, method, input, &out);
            return out;
        }
        self.step(1)?;
        let Some(mut r) = self.shared.respondent.take() else {
            return Err(ExecError::Reentrant(callee));
        };
        let out = {
            let mut sub = Session::new(&mut *self.shared, Role::Respondent, callee.clone());
            r.invoke(method, input.clone(), &mut sub)
        };
        self.shared.respondent = Some(r);
        self.shared.record(&self.me, &callee, method, input, &out);
        out
    }
}

fn refused(what: &str, role: Role) -> ExecError {
    ExecError::Fault(format!("{what} is not available to {role:?}"))
}

impl Oracle for Session<'_> {
    fn nature(&mut self, loc: Location, method: &str, input: Value) -> CallResult {
        self.call_nature(loc, method, input)
    }

    fn respondent(&mut self, method: &str, input: Value) -> CallResult {
        self.call_respondent(method, input)
    }

    fn send(&mut self, msg: Value) -> Result<(), ExecError> {
        if self.role != Role::Action {
            return Err(refused("send", self.role));
        }
        self.shared.outbox.push(msg);
        Ok(())
    }

    fn receive(&mut self) -> Result<Option<Value>, ExecError> {
        if self.role != Role::Verifier {
            return Err(refused("receive", self.role));
        }
        let msg = self.shared.outbox.get(self.shared.cursor).cloned();
        if msg.is_some() {
            self.shared.cursor += 1;
        }
        Ok(msg)
    }

    fn transcript(&self) -> Result<Vec<Value>, ExecError> {
        if self.role != Role::Post {
            return Err(refused("the transcript", self.role));
        }
        Ok(self.shared.outbox.clone())
    }

    fn tape(&mut self) -> &mut Tape {
        let assignment = &self.shared.assignment;
        self.shared
            .tapes
            .entry(self.me.clone())
            .or_insert_with(|| assignment.tape_for(&self.me))
    }

    fn step(&mut self, n: u64) -> Result<(), ExecError> {
        self.shared.steps += n;
        if self.shared.steps > self.shared.budget {
            Err(ExecError::BudgetExceeded(self.shared.budget))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Program, State};

    fn lockbox(pwd: &str, m: &str) -> Machine {
        Program::new("Lockbox")
            .method("prompt", |st, x, _| {
                if x == st.get("pwd") {
                    st.set("open", Value::Bool(true));
                }
                Ok(None)
            })
            .method("read", |st, _, _| {
                Ok(Some(if st.get("open") == Value::Bool(true) {
                    st.get("m")
                } else {
                    Value::Null
                }))
            })
            .build("D", State::new().with("pwd", pwd).with("m", m))
    }

    fn knows(pwd: &str) -> Machine {
        Program::new("Knows")
            .method("pwd", |st, _, _| Ok(Some(st.get("pwd"))))
            .build("R", State::new().with("pwd", pwd))
    }

    fn world() -> World {
        World::new(Nature::new().with(0, lockbox("pw", "msg")), knows("pw"))
    }

    fn enter_password() -> Machine {
        Program::new("Enter")
            .method(RUN, |_, _, o| {
                let x = o.respondent("pwd", Value::Null)?.unwrap_or(Value::Null);
                o.nature(0, "prompt", x)?;
                Ok(None)
            })
            .build("A", State::new())
    }

    fn read_not_null() -> Machine {
        Program::new("ReadNotNull")
            .method(RUN, |_, _, o| {
                let m = o.nature(0, "read", Value::Null)?.unwrap_or(Value::Null);
                Ok(Some(Value::Bool(!m.is_null())))
            })
            .build("V", State::new())
    }

    #[test]
    fn accept_after_password() {
        let r = execute(&read_not_null(), &enter_password(), world(), DEFAULT_BUDGET);
        assert_eq!(r.transcript.verdict, Verdict::Accept);
        assert_eq!(
            r.post_world.nature.get(0).unwrap().var("open"),
            Value::Bool(true)
        );
    }

    #[test]
    fn verifier_cannot_reach_respondent() {
        let v = Program::new("Snoop")
            .method(RUN, |_, _, o| {
                o.respondent("pwd", Value::Null)?;
                Ok(Some(Value::Bool(true)))
            })
            .build("V", State::new());
        let noop = Program::new("Noop")
            .method(RUN, |_, _, _| Ok(None))
            .build("A", State::new());
        let r = execute(&v, &noop, world(), DEFAULT_BUDGET);
        assert_eq!(r.transcript.verdict, Verdict::Reject);
        let ev = r.transcript.respondent_calls("R").next().unwrap();
        assert_eq!(ev.caller, "V");
        assert_eq!(ev.outcome, CallOutcome::NoSuchMethod);
    }

    #[test]
    fn messages_are_buffered_in_order_and_extras_kept() {
        let a = Program::new("Chatty")
            .method(RUN, |_, _, o| {
                for i in 0..3 {
                    o.send(Value::Int(i))?;
                }
                Ok(None)
            })
            .build("A", State::new());
        let v = Program::new("TakeOne")
            .method(RUN, |_, _, o| Ok(Some(Value::Bool(o.receive()? == Some(Value::Int(0))))))
            .build("V", State::new());
        let r = execute(&v, &a, world(), DEFAULT_BUDGET);
        assert!(r.accepted());
        assert_eq!(r.transcript.messages.len(), 3);
        assert_eq!(r.transcript.consumed, 1);
    }

    #[test]
    fn budget_maps_to_budget_verdict() {
        let spin = Program::new("Spin")
            .method(RUN, |_, _, o| loop {
                o.step(1)?;
            })
            .build("A", State::new());
        let r = execute(&read_not_null(), &spin, world(), 50);
        assert_eq!(r.transcript.verdict, Verdict::Budget);
    }

    #[test]
    fn missing_method_in_action_rejects_and_is_recorded() {
        let a = Program::new("Writer")
            .method(RUN, |_, _, o| o.nature(0, "write", "cats".into()))
            .build("A", State::new());
        let r = execute(&read_not_null(), &a, world(), DEFAULT_BUDGET);
        assert_eq!(r.transcript.verdict, Verdict::Reject);
        assert_eq!(r.transcript.events[0].outcome, CallOutcome::NoSuchMethod);
    }

    #[test]
    fn read_only_locations_are_not_mutated() {
        let nature = Nature::new().with_read_only(3, "X", "fixed".into());
        let mut w = World::new(nature, knows("pw"));
        let before = w.nature.clone();
        assert_eq!(
            w.invoke_nature(3, "read", Value::Null, DEFAULT_BUDGET).unwrap(),
            Some("fixed".into())
        );
        assert_eq!(w.nature, before);
    }

    #[test]
    fn nature_machines_can_call_each_other() {
        let relay = Program::new("Relay")
            .method("push", |_, x, o| o.nature(2, "store", x))
            .build("Relay", State::new());
        let sink = Program::new("Sink")
            .method("store", |st, x, _| {
                st.set("v", x);
                Ok(None)
            })
            .build("Sink", State::new());
        let mut w = World::new(Nature::new().with(1, relay).with(2, sink), knows("pw"));
        w.invoke_nature(1, "push", Value::Int(5), DEFAULT_BUDGET).unwrap();
        assert_eq!(w.nature.get(2).unwrap().var("v"), Value::Int(5));
    }

    #[test]
    fn reentrant_call_is_an_error() {
        let loopy = Program::new("Loopy")
            .method("go", |_, _, o| o.nature(1, "go", Value::Null))
            .build("L", State::new());
        let mut w = World::new(Nature::new().with(1, loopy), knows("pw"));
        assert!(matches!(
            w.invoke_nature(1, "go", Value::Null, DEFAULT_BUDGET),
            Err(ExecError::Reentrant(_))
        ));
    }

    #[test]
    fn target_must_output() {
        let t = Program::new("Silent")
            .method(RUN, |_, _, _| Ok(None))
            .build("T", State::new());
        assert_eq!(
            run_target(&t, world(), DEFAULT_BUDGET),
            Err(ExecError::MissingOutput("T".into()))
        );
    }

    #[test]
    fn post_reads_transcript_but_not_respondent() {
        let p = Program::new("Echo")
            .method(RUN, |_, _, o| Ok(o.transcript()?.first().cloned()))
            .build("P", State::new());
        let t = Transcript {
            events: vec![],
            messages: vec!["hello".into()],
            consumed: 1,
            verdict: Verdict::Accept,
            steps: 0,
        };
        assert_eq!(run_post(&p, world(), &t, DEFAULT_BUDGET).unwrap(), "hello".into());

        let nosy = Program::new("Nosy")
            .method(RUN, |_, _, o| o.respondent("pwd", Value::Null))
            .build("P", State::new());
        assert!(run_post(&nosy, world(), &t, DEFAULT_BUDGET).is_err());
    }
}
