use foregone::checkers::{replay_cell, CheckVerdict, Settings};
use foregone::kernel::{execute, Nature, Verdict, World, DEFAULT_BUDGET};
use foregone::machine::Machine;
use foregone::scenarios::common::respondent;
use foregone::scenarios::{hybrid, password, registry, sample_monotonicity, Case, CheckKind, EvidenceKey, Params, Scenario};
use foregone::spec_order::{bounded_implements, ProbeBounds};
use foregone::value::Value;
use proptest::prelude::*;

fn all_scenarios() -> Vec<Scenario> {
    registry().iter().map(|d| d.load(&Params::new()).expect("builds")).collect()
}

fn cases() -> Vec<(String, Case)> {
    all_scenarios()
        .into_iter()
        .flat_map(|s| s.cases.clone().into_iter().map(move |c| (s.qualified(&c), c)))
        .collect()
}

fn quick() -> Settings {
    Settings::new(vec![0, 1, 2, 3], DEFAULT_BUDGET)
}

fn pwd_world() -> World {
    World::new(
        Nature::new().with(password::LOC_D, password::d_pwd(b"hunter2", b"tax-records")),
        password::r_pwd(b"hunter2"),
    )
}

fn devices() -> Vec<Machine> {
    vec![
        hybrid::d_read("x"),
        hybrid::d_read_write("x"),
        hybrid::d_read("y"),
        password::d_pwd(b"x", b"x"),
        password::d_deny(b"x", password::DURESS_PWD, b"x", true),
        respondent("R", "D", &[("read", Value::from("x"))]),
    ]
}

fn alphabet() -> Vec<Value> {
    vec![
        Value::from("x"),
        Value::Null,
        Value::pair(Value::bytes(password::DURESS_PWD), Value::from("y")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn execution_is_deterministic(seed in any::<u64>(), which in 0usize..6) {
        let s = password_case();
        let a = &s.family[which % s.family.len()];
        let w = pwd_world().with_seed(seed);
        let x = execute(&s.verifier, a, w.snapshot(), DEFAULT_BUDGET);
        let y = execute(&s.verifier, a, w, DEFAULT_BUDGET);
        prop_assert_eq!(x, y);
    }

    #[test]
    fn two_factor_is_deterministic_per_seed(seed in any::<u64>()) {
        let s = two_factor_case();
        let w = &s.evidence(EvidenceKey::Weak).unwrap().worlds[0].world;
        let x = execute(&s.verifier, &s.exemplar, w.with_seed(seed), DEFAULT_BUDGET);
        let y = execute(&s.verifier, &s.exemplar, w.with_seed(seed), DEFAULT_BUDGET);
        prop_assert!(x.accepted());
        prop_assert_eq!(x, y);
    }

    #[test]
    fn more_budget_never_changes_a_finished_verdict(b in 0u64..40, extra in 0u64..1000) {
        let s = two_factor_case();
        let w = &s.evidence(EvidenceKey::Weak).unwrap().worlds[0].world;
        let full = execute(&s.verifier, &s.exemplar, w.snapshot(), DEFAULT_BUDGET).transcript.verdict;
        let small = execute(&s.verifier, &s.exemplar, w.snapshot(), b).transcript.verdict;
        let large = execute(&s.verifier, &s.exemplar, w.snapshot(), b + extra).transcript.verdict;
        prop_assert!(small == Verdict::Budget || small == full);
        if small != Verdict::Budget {
            prop_assert_eq!(large, small);
        }
    }

    #[test]
    fn implements_is_reflexive(i in 0usize..6, depth in 1usize..4) {
        let d = &devices()[i];
        prop_assert!(bounded_implements(d, d, &ProbeBounds::new(depth, alphabet())).unwrap());
    }

    #[test]
    fn implements_is_transitive(i in 0usize..6, j in 0usize..6, k in 0usize..6) {
        let ds = devices();
        let b = ProbeBounds::new(2, alphabet());
        if bounded_implements(&ds[i], &ds[j], &b).unwrap() && bounded_implements(&ds[j], &ds[k], &b).unwrap() {
            prop_assert!(bounded_implements(&ds[i], &ds[k], &b).unwrap());
        }
    }

    #[test]
    fn implements_is_monotone_in_depth(i in 0usize..6, j in 0usize..6, depth in 1usize..3) {
        let ds = devices();
        if bounded_implements(&ds[i], &ds[j], &ProbeBounds::new(depth + 1, alphabet())).unwrap() {
            prop_assert!(bounded_implements(&ds[i], &ds[j], &ProbeBounds::new(depth, alphabet())).unwrap());
        }
    }

    #[test]
    fn sampled_subfamilies_never_degrade(rng_seed in any::<u64>()) {
        for (name, c) in cases() {
            if c.evidence.is_empty() || c.family.is_empty() {
                continue;
            }
            let key = *c.evidence.keys().next().unwrap();
            let r = sample_monotonicity(&c, key, 3, rng_seed, &quick());
            prop_assert!(r.is_ok(), "{} degrades: {:?}", name, r.err().map(|r| r.counterexample));
        }
    }
}

fn password_case() -> Case {
    all_scenarios().remove(0).cases.remove(0)
}

fn two_factor_case() -> Case {
    let s = foregone::scenarios::find("two-factor").unwrap().load(&Params::new()).unwrap();
    s.cases[0].clone()
}

#[test]
fn every_failing_entailment_replays() {
    for (name, c) in cases() {
        for &key in c.evidence.keys() {
            let r = c.run(CheckKind::Entailment, key, &Settings::default()).unwrap();
            if r.verdict != CheckVerdict::Fails {
                continue;
            }
            let cell = r.counterexample.expect("failing report has a cell");
            let setup = c.entailment_setup(key).unwrap();
            let (expected, got) = replay_cell(&setup, &cell, DEFAULT_BUDGET).expect("replayable");
            assert_eq!((expected, got), (cell.expected.clone(), cell.got.clone()), "{name} {key}");
        }
    }
}

#[test]
fn holding_entailment_only_evaluates_conforming_actions() {
    let settings = quick();
    for (name, c) in cases() {
        for &key in c.evidence.keys() {
            let r = c.run(CheckKind::Entailment, key, &settings).unwrap();
            if r.verdict != CheckVerdict::Holds {
                continue;
            }
            let e = c.evidence(key).unwrap();
            for w in &e.worlds {
                for a in &c.family {
                    let skipped = r.skipped.contains(&format!("{}/{}", w.label, a.id()));
                    let conforms = settings
                        .seeds
                        .iter()
                        .all(|&s| execute(&c.verifier, a, w.world.with_seed(s), settings.budget).accepted());
                    assert_eq!(skipped, !conforms, "{name} {key} {} {}", w.label, a.id());
                }
            }
        }
    }
}

#[test]
fn entailment_with_the_exemplar_implies_demonstrability() {
    for (name, c) in cases() {
        if !c.family.iter().any(|a| a.id() == c.exemplar.id()) {
            continue;
        }
        for &key in c.evidence.keys() {
            let e = c.run(CheckKind::Entailment, key, &quick()).unwrap();
            if e.verdict == CheckVerdict::Holds {
                let d = c.run(CheckKind::Demonstrability, key, &quick()).unwrap();
                assert_eq!(d.verdict, CheckVerdict::Holds, "{name} {key}");
            }
        }
    }
}

#[test]
fn weak_families_strictly_contain_strong_ones() {
    for (name, c) in cases() {
        let (Ok(weak), Ok(strong)) = (c.evidence(EvidenceKey::Weak), c.evidence(EvidenceKey::Strong)) else {
            continue;
        };
        assert!(strong.at_least_as_strong(weak), "{name}");
        assert!(weak.worlds.len() > strong.worlds.len(), "{name}: not strict");
    }
}
