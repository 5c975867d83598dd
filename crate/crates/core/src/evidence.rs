//! Evidence as an enumerated family of consistent worlds.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{World, DEFAULT_BUDGET};
use crate::machine::{ExecError, Machine};
use crate::spec_order::{bounded_equivalent, bounded_implements, ProbeBounds};
use crate::value::{Location, Value};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvidenceError {
    #[error("evidence {0} has no consistent world")]
    EmptyFamily(String),
    #[error("unknown assertion {0}")]
    UnknownAssertion(String),
    #[error("assertion {0} is not droppable")]
    NotDroppable(String),
    #[error("world {world} violates assertion {assertion}: {reason}")]
    Inconsistent {
        world: String,
        assertion: String,
        reason: String,
    },
    #[error(transparent)]
    Exec(#[from] ExecError),
}

/// Where an asserted device lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocationRef {
    Fixed(Location),
    /// Wherever the respondent's method (called with ⊥) says it is.
    ViaRespondent(String),
}

impl LocationRef {
    pub fn resolve(&self, world: &World) -> Result<Location, ExecError> {
        match self {
            LocationRef::Fixed(l) => Ok(*l),
            LocationRef::ViaRespondent(method) => {
                let mut w = world.snapshot();
                match w.invoke_respondent(method, Value::Null, DEFAULT_BUDGET)? {
                    Some(Value::Loc(l)) => Ok(l),
                    other => Err(ExecError::Fault(format!(
                        "{method} returned {other:?}, not a location"
                    ))),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecKind {
    /// `spec ≺ N[ℓ]`.
    Partial,
    /// `spec ∼ N[ℓ]`.
    Full,
}

pub type WorldPredicate = Arc<dyn Fn(&World) -> Result<bool, ExecError> + Send + Sync>;

/// "The device at `target` behaves like `spec`". Variables named in
/// `copy_vars` are hardcoded per world: the spec takes the device's values
/// for them before the comparison.
#[derive(Clone, Debug)]
pub struct SpecClaim {
    pub target: LocationRef,
    pub spec: Machine,
    pub copy_vars: Vec<String>,
    pub bounds: ProbeBounds,
}

impl SpecClaim {
    pub fn new(target: LocationRef, spec: Machine, copy_vars: &[&str], bounds: ProbeBounds) -> Self {
        Self {
            target,
            spec,
            copy_vars: copy_vars.iter().map(|v| v.to_string()).collect(),
            bounds,
        }
    }

    /// The spec with `device`'s hardcoded values filled in.
    pub fn instantiate(&self, device: &Machine) -> Machine {
        let mut state = self.spec.state().clone();
        for v in &self.copy_vars {
            state.set(v.clone(), device.var(v));
        }
        self.spec.with_state(state)
    }

    fn same_claim(&self, other: &SpecClaim) -> bool {
        self.target == other.target && self.spec.program_name() == other.spec.program_name()
    }
}

#[derive(Clone)]
pub enum AssertionCheck {
    Spec(SpecClaim, SpecKind),
    Predicate(WorldPredicate),
}

impl fmt::Debug for AssertionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssertionCheck::Spec(c, kind) => f
                .debug_struct("Spec")
                .field("target", &c.target)
                .field("spec", &c.spec.program_name())
                .field("kind", kind)
                .finish(),
            AssertionCheck::Predicate(_) => f.write_str("Predicate"),
        }
    }
}

/// A world added to the family when its assertion is dropped, placed right
/// after the world labelled `parent`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub parent: String,
    pub world: LabeledWorld,
}

#[derive(Clone, Debug)]
pub struct Assertion {
    pub id: String,
    pub text: String,
    pub check: AssertionCheck,
    pub droppable: bool,
    pub extensions: Vec<Extension>,
}

impl Assertion {
    pub fn spec(id: &str, text: &str, claim: SpecClaim, kind: SpecKind) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            check: AssertionCheck::Spec(claim, kind),
            droppable: false,
            extensions: Vec::new(),
        }
    }

    pub fn predicate(
        id: &str,
        text: &str,
        f: impl Fn(&World) -> Result<bool, ExecError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            check: AssertionCheck::Predicate(Arc::new(f)),
            droppable: false,
            extensions: Vec::new(),
        }
    }

    pub fn droppable(mut self, extensions: Vec<Extension>) -> Self {
        self.droppable = true;
        self.extensions = extensions;
        self
    }

    /// `Ok(None)` if `world` satisfies the assertion, otherwise the reason.
    pub fn violation(&self, world: &World) -> Result<Option<String>, ExecError> {
        match &self.check {
            AssertionCheck::Predicate(f) => {
                Ok((!f(world)?).then(|| "predicate is false".to_string()))
            }
            AssertionCheck::Spec(claim, kind) => {
                let loc = match claim.target.resolve(world) {
                    Ok(l) => l,
                    Err(e) => return Ok(Some(e.to_string())),
                };
                let Some(device) = world.nature.get(loc) else {
                    return Ok(Some(format!("no machine at location {loc}")));
                };
                let spec = claim.instantiate(device);
                let ok = match kind {
                    SpecKind::Partial => bounded_implements(&spec, device, &claim.bounds)?,
                    SpecKind::Full => bounded_equivalent(&spec, device, &claim.bounds)?,
                };
                Ok((!ok).then(|| {
                    format!("{} does not match {} at {loc}", device.program_name(), spec.program_name())
                }))
            }
        }
    }
}

/// A world with a display label and, for unknown-goal probes, the
/// respondent's language.
#[derive(Clone, Debug)]
pub struct LabeledWorld {
    pub label: String,
    pub world: World,
    pub language: Option<BTreeSet<Value>>,
}

impl LabeledWorld {
    pub fn new(label: impl Into<String>, world: World) -> Self {
        Self {
            label: label.into(),
            world,
            language: None,
        }
    }

    pub fn with_language(mut self, language: impl IntoIterator<Item = Value>) -> Self {
        self.language = Some(language.into_iter().collect());
        self
    }
}

#[derive(Clone, Debug)]
pub struct Evidence {
    pub name: String,
    pub assertions: Vec<Assertion>,
    pub worlds: Vec<LabeledWorld>,
}

impl Evidence {
    pub fn new(
        name: impl Into<String>,
        assertions: Vec<Assertion>,
        worlds: Vec<LabeledWorld>,
    ) -> Result<Self, EvidenceError> {
        let name = name.into();
        if worlds.is_empty() {
            return Err(EvidenceError::EmptyFamily(name));
        }
        Ok(Self {
            name,
            assertions,
            worlds,
        })
    }

    pub fn is_consistent(&self, world: &World) -> bool {
        self.worlds.iter().any(|w| w.world.same_setting(world))
    }

    /// `self ⪰ other`: every world consistent with `self` is consistent
    /// with `other`.
    pub fn at_least_as_strong(&self, other: &Evidence) -> bool {
        self.worlds.iter().all(|w| other.is_consistent(&w.world))
    }

    pub fn world(&self, label: &str) -> Option<&LabeledWorld> {
        self.worlds.iter().find(|w| w.label == label)
    }

    /// Replace `spec ≺ N[target]` with `spec ∼ N[target]`, keeping only the
    /// worlds where the stronger assertion holds.
    pub fn strengthen_to_full_spec(&self, name: impl Into<String>, claim: &SpecClaim) -> Result<Evidence, EvidenceError> {
        let program = claim.spec.program_name();
        let full = Assertion::spec(
            &format!("full:{program}"),
            &format!("{program} fully specifies the device"),
            claim.clone(),
            SpecKind::Full,
        );
        let mut worlds = Vec::new();
        for w in &self.worlds {
            if full.violation(&w.world)?.is_none() {
                worlds.push(w.clone());
            }
        }
        let mut assertions: Vec<Assertion> = self
            .assertions
            .iter()
            .filter(|a| !matches!(&a.check, AssertionCheck::Spec(c, _) if c.same_claim(claim)))
            .cloned()
            .collect();
        assertions.push(full);
        Evidence::new(name, assertions, worlds)
    }

    /// Weaker evidence without assertion `id`; its declared extension
    /// worlds join the family right after their parents.
    pub fn drop_assertion(&self, name: impl Into<String>, id: &str) -> Result<Evidence, EvidenceError> {
        let Some(dropped) = self.assertions.iter().find(|a| a.id == id) else {
            return Err(EvidenceError::UnknownAssertion(id.into()));
        };
        if !dropped.droppable {
            return Err(EvidenceError::NotDroppable(id.into()));
        }
        let mut worlds = Vec::new();
        for w in &self.worlds {
            worlds.push(w.clone());
            worlds.extend(
                dropped
                    .extensions
                    .iter()
                    .filter(|e| e.parent == w.label)
                    .map(|e| e.world.clone()),
            );
        }
        for e in &dropped.extensions {
            if self.world(&e.parent).is_none() {
                worlds.push(e.world.clone());
            }
        }
        let assertions = self.assertions.iter().filter(|a| a.id != id).cloned().collect();
        Evidence::new(name, assertions, worlds)
    }

    /// The subfamily at `indices`, keeping assertions.
    pub fn subfamily(&self, name: impl Into<String>, indices: &[usize]) -> Result<Evidence, EvidenceError> {
        let worlds = indices.iter().filter_map(|&i| self.worlds.get(i).cloned()).collect();
        Evidence::new(name, self.assertions.clone(), worlds)
    }

    /// Every world passes every assertion.
    pub fn audit(&self) -> Result<(), EvidenceError> {
        for w in &self.worlds {
            for a in &self.assertions {
                if let Some(reason) = a.violation(&w.world)? {
                    return Err(EvidenceError::Inconsistent {
                        world: w.label.clone(),
                        assertion: a.id.clone(),
                        reason,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Nature;
    use crate::machine::{Program, State};

    fn reader(m: &str, writable: bool) -> Machine {
        let mut p = Program::new(if writable { "ReadWrite" } else { "Read" })
            .method("read", |st, _, _| Ok(Some(st.get("m"))));
        if writable {
            p = p.method("write", |st, x, _| {
                st.set("m", x);
                Ok(None)
            });
        }
        p.build("D", State::new().with("m", m))
    }

    fn respondent(id: &str) -> Machine {
        Program::new("R")
            .method("where", |_, _, _| Ok(Some(Value::Loc(1))))
            .build(id, State::new())
    }

    fn family() -> Evidence {
        let bounds = ProbeBounds::new(2, [Value::from("cats"), Value::Null]);
        let partial = Assertion::spec(
            "dev",
            "device implements read",
            SpecClaim::new(LocationRef::ViaRespondent("where".into()), reader("?", false), &["m"], bounds),
            SpecKind::Partial,
        );
        let star = Assertion::predicate("star", "respondent is R", |w| Ok(w.respondent.id() == "R"))
            .droppable(vec![Extension {
                parent: "ro".into(),
                world: LabeledWorld::new(
                    "ro/other",
                    World::new(Nature::new().with(1, reader("dogs", false)), respondent("R2")),
                ),
            }]);
        Evidence::new(
            "E",
            vec![partial, star],
            vec![
                LabeledWorld::new(
                    "ro",
                    World::new(Nature::new().with(1, reader("dogs", false)), respondent("R")),
                ),
                LabeledWorld::new(
                    "rw",
                    World::new(Nature::new().with(1, reader("dogs", true)), respondent("R")),
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn audit_and_membership() {
        let e = family();
        e.audit().unwrap();
        assert!(e.is_consistent(&e.worlds[1].world.with_seed(9)));
        assert!(e.at_least_as_strong(&e));
    }

    #[test]
    fn strengthen_drops_the_writable_world() {
        let e = family();
        let bounds = ProbeBounds::new(2, [Value::from("cats"), Value::Null]);
        let claim = SpecClaim::new(LocationRef::Fixed(1), reader("?", false), &["m"], bounds);
        let s = e.strengthen_to_full_spec("E_D", &claim).unwrap();
        assert_eq!(s.worlds.len(), 1);
        assert_eq!(s.worlds[0].label, "ro");
        assert!(s.at_least_as_strong(&e));
        assert!(!e.at_least_as_strong(&s));
        s.audit().unwrap();
        let again = s.strengthen_to_full_spec("E_D", &claim).unwrap();
        assert_eq!(again.worlds.len(), 1);
        assert_eq!(again.assertions.len(), s.assertions.len());
    }

    #[test]
    fn strengthen_to_nothing_is_an_error() {
        let e = family();
        let bounds = ProbeBounds::new(1, [Value::Null]);
        let claim = SpecClaim::new(LocationRef::Fixed(1), reader("fish", false), &[], bounds);
        let err = e.strengthen_to_full_spec("E_x", &claim).unwrap_err();
        assert_eq!(err, EvidenceError::EmptyFamily("E_x".into()));
    }

    #[test]
    fn drop_inserts_extensions_after_parent() {
        let e = family();
        let weak = e.drop_assertion("E*", "star").unwrap();
        let labels: Vec<_> = weak.worlds.iter().map(|w| w.label.as_str()).collect();
        assert_eq!(labels, ["ro", "ro/other", "rw"]);
        assert!(e.at_least_as_strong(&weak));
        weak.audit().unwrap();
        assert_eq!(
            e.drop_assertion("x", "nope").unwrap_err(),
            EvidenceError::UnknownAssertion("nope".into())
        );
        assert_eq!(
            e.drop_assertion("x", "dev").unwrap_err(),
            EvidenceError::NotDroppable("dev".into())
        );
    }

    #[test]
    fn audit_reports_violations() {
        let mut e = family();
        e.worlds[0].world.respondent = respondent("R9");
        assert!(matches!(e.audit(), Err(EvidenceError::Inconsistent { .. })));
    }
}
