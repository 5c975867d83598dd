//! Registry-wide audit: every declared expectation, every evidence
//! self-consistency check, and the toy crypto sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{registry, Case, EvidenceKey, Expectation, Overrides, Scenario, ScenarioError};
use crate::checkers::{check_monotonicity, CheckReport, Settings};
use crate::crypto::{binding_domain, byte_domain, strings_up_to, BindingClass, CommitmentScheme, HashSpec};

#[derive(Clone, Debug)]
pub struct AuditEntry {
    /// `scenario` or `scenario/case`.
    pub scenario: String,
    pub expectation: Expectation,
    /// The report, or why the check could not run.
    pub outcome: Result<CheckReport, String>,
}

impl AuditEntry {
    pub fn passed(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|r| self.expectation.matches(r))
    }

    pub fn name(&self) -> String {
        format!("{} {} {}", self.scenario, self.expectation.check, self.expectation.evidence)
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditSummary {
    pub entries: Vec<AuditEntry>,
    /// Evidence audits and crypto sweeps that failed.
    pub problems: Vec<String>,
}

impl AuditSummary {
    pub fn passed(&self) -> bool {
        self.problems.is_empty() && self.entries.iter().all(AuditEntry::passed)
    }

    /// The first failure, named.
    pub fn first_failure(&self) -> Option<String> {
        self.problems
            .first()
            .cloned()
            .or_else(|| self.entries.iter().find(|e| !e.passed()).map(AuditEntry::name))
    }
}

/// Run every expectation of every case of `s`.
pub fn audit_scenario(s: &Scenario, settings: &Settings) -> Vec<AuditEntry> {
    let mut out = Vec::new();
    for case in &s.cases {
        for exp in &case.expectations {
            out.push(AuditEntry {
                scenario: s.qualified(case),
                expectation: exp.clone(),
                outcome: case.run(exp.check, exp.evidence, settings).map_err(|e| e.to_string()),
            });
        }
    }
    out
}

/// Build every registered scenario with `overrides` and audit it.
pub fn audit_registry(overrides: &Overrides, settings: &Settings) -> Result<AuditSummary, ScenarioError> {
    let mut summary = AuditSummary::default();
    if let Err(e) = crypto_sweeps() {
        summary.problems.push(format!("crypto sweep: {e}"));
    }
    for def in registry() {
        let s = match def.load(&overrides.for_scenario(def.name)) {
            Ok(s) => s,
            Err(ScenarioError::Evidence(e)) => {
                summary.problems.push(format!("{}: {e}", def.name));
                continue;
            }
            Err(e) => return Err(e),
        };
        summary.entries.extend(audit_scenario(&s, settings));
    }
    Ok(summary)
}

/// Exhaustive checks of the toy primitives the scenarios rely on.
pub fn crypto_sweeps() -> Result<(), String> {
    let pairs = [
        (CommitmentScheme::Transparent, binding_domain()),
        (CommitmentScheme::XorPad, byte_domain()),
        (CommitmentScheme::Constant, strings_up_to(1)),
    ];
    for (scheme, domain) in &pairs {
        if !scheme.sweep_correctness(domain, domain) {
            return Err(format!("{} fails correctness", scheme.name()));
        }
        let witness = scheme.verify_binding_class(domain, domain)?;
        if scheme.binding_class() == BindingClass::Equivocable && witness.is_none() {
            return Err(format!("{} has no double opening", scheme.name()));
        }
    }
    let domain = strings_up_to(2);
    if let Some((a, b)) = HashSpec::injective().find_collision(&domain) {
        return Err(format!("injective hash collides on {a:?} and {b:?}"));
    }
    let folding = HashSpec::colliding();
    if folding.find_collision(&domain).is_none() {
        return Err("colliding hash has no collision".into());
    }
    if let Some((a, b)) = &folding.known_collision {
        if a == b || folding.evaluate(a) != folding.evaluate(b) {
            return Err("documented collision does not collide".into());
        }
    }
    Ok(())
}

/// Monotonicity over `n` random pairs `(e1, e2)` of subfamilies of the
/// `key` evidence with `e2 ⊆ e1`. Returns the first failing report, or the
/// number of pairs checked.
pub fn sample_monotonicity(
    case: &Case,
    key: EvidenceKey,
    n: usize,
    rng_seed: u64,
    settings: &Settings,
) -> Result<usize, CheckReport> {
    let Ok(e) = case.evidence(key) else { return Ok(0) };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let size = e.worlds.len();
    for i in 0..n {
        let weak_idx: Vec<usize> = (0..size).filter(|_| rng.random_bool(0.7)).collect();
        let strong_idx: Vec<usize> = weak_idx.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
        let (Ok(weak), Ok(strong)) = (
            e.subfamily(format!("{}#{i}w", e.name), &weak_idx),
            e.subfamily(format!("{}#{i}s", e.name), &strong_idx),
        ) else {
            continue;
        };
        let r = check_monotonicity(&case.verifier, &case.exemplar, &case.family, &weak, &strong, settings)
            .expect("a subfamily of a subfamily is stronger");
        if !r.holds() {
            return Err(r);
        }
    }
    Ok(n)
}
