//! Strategies and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

pub mod golden;

use std::path::{Path, PathBuf};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

use ota_learn::alphabet::Action;
use ota_learn::generator::{generate, random_delay_word, GenSpec};
use ota_learn::hypothesis::partition;
use ota_learn::learner::{learn_smart_observed, TraceEvent};
use ota_learn::table::cell_word;
use ota_learn::word::{LogicalWord, ResetAction, ResetDelayWord, TimedAction};
use ota_learn::{equivalent, learn_smart, Guard, Oracle, Ota, SmartConfig, TimeValue, Verdict};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load(name: &str) -> Ota {
    ota_learn::io::read_automaton(&fixture(name)).unwrap()
}

/// Small generated targets.
pub fn small_spec() -> impl Strategy<Value = GenSpec> {
    (1usize..=4, 1usize..=3, 0u64..=6, any::<u64>(), 5u32..=20)
        .prop_map(|(n, m, k, seed, d)| GenSpec { density: d as f64 / 10.0, ..GenSpec::new(n, m, k, seed) })
}

pub fn time_value(max_whole: u64) -> impl Strategy<Value = TimeValue> {
    (1i64..=5).prop_flat_map(move |d| (0..d * (max_whole as i64 + 1)).prop_map(move |n| TimeValue::new(n, d).unwrap()))
}

pub fn delay_items(m: usize, max_whole: u64, max_len: usize) -> impl Strategy<Value = Vec<TimedAction>> {
    prop::collection::vec((0..m, time_value(max_whole)).prop_map(|(a, t)| TimedAction::new(Action(a), t)), 0..=max_len)
}

/// A target together with a delay word over its alphabet.
pub fn target_and_word() -> impl Strategy<Value = (GenSpec, Vec<TimedAction>)> {
    small_spec().prop_flat_map(|s| {
        let items = delay_items(s.alphabet, s.kappa + 2, 6);
        (Just(s), items)
    })
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// Increasing values starting at 0 with at most one fractional value per unit.
pub fn partition_values() -> impl Strategy<Value = Vec<TimeValue>> {
    prop::collection::btree_map(0u64..15, (any::<bool>(), any::<bool>(), 1i64..=9), 0..8).prop_map(|cells| {
        let mut out = vec![TimeValue::ZERO];
        for (floor, (point, open, tenth)) in cells {
            if point && floor > 0 {
                out.push(TimeValue::from_int(floor));
            }
            if open {
                out.push(TimeValue::from_int(floor) + TimeValue::new(tenth, 10).unwrap());
            }
        }
        out
    })
}

pub fn check_partition(values: &[TimeValue]) -> Result<(), TestCaseError> {
    let guards = partition(values).map_err(|e| fail(format!("{e}")))?;
    prop_assert_eq!(guards.len(), values.len());
    for (mu, g) in values.iter().zip(&guards) {
        prop_assert!(g.contains(*mu), "{} not in {}", mu, g);
    }
    prop_assert!(Guard::is_partition(&guards));
    // Every sampled point lies in exactly one guard.
    for quarter in 0..(4 * 17) {
        let t = TimeValue::new(quarter, 4).unwrap();
        let hits = guards.iter().filter(|g| g.contains(t)).count();
        prop_assert_eq!(hits, 1, "{} covered {} times", t, hits);
    }
    Ok(())
}

/// Running the normalized logical form fires the same transitions as the delay word.
pub fn check_normalize((spec, items): &(GenSpec, Vec<TimedAction>)) -> Result<(), TestCaseError> {
    let a = generate(spec).complete().unwrap();
    let word = items.iter().copied().collect();
    let run = a.run_delay_detailed(&word, false);
    let logical = word.with_resets(&run.resets).to_logical().normalize();
    let again = a.run_logical_detailed(&logical.logical_word(), false);
    prop_assert_eq!(&run.fired, &again.fired);
    prop_assert_eq!(run.verdict, again.verdict);
    prop_assert_eq!(logical.resets(), again.resets);
    Ok(())
}

/// Every hypothesis met while learning is complete, deterministic and agrees with the table it came from.
pub fn check_hypotheses(spec: &GenSpec) -> Result<(), TestCaseError> {
    let target = generate(spec);
    let mut oracle = Oracle::new(&target, true).unwrap();
    let mut problems = Vec::new();
    let mut seen = 0;
    let result = learn_smart_observed(&mut oracle, target.alphabet(), &SmartConfig::default(), &mut |ev| {
        if let TraceEvent::Hypothesis { table, hypothesis } = ev {
            seen += 1;
            let report = hypothesis.validate();
            if !report.complete || !report.deterministic {
                problems.push("hypothesis not complete and deterministic".to_string());
            }
            for entry in table.entries() {
                for (suffix, cell) in table.e().iter().zip(&entry.cells) {
                    let word = cell_word(&entry.word, suffix);
                    let (run, verdict) = hypothesis.run_logical(&word, false);
                    if verdict.is_accept() != cell.verdict.is_accept() {
                        problems.push(format!("verdict differs on {word:?}"));
                    }
                    if entry.word.is_valid() && run.resets()[..entry.word.len()] != entry.word.resets()[..] {
                        problems.push(format!("resets differ on {:?}", entry.word));
                    }
                }
            }
        }
    });
    let result = result.map_err(|e| fail(format!("{e}")))?;
    prop_assert!(problems.is_empty(), "{:?}", problems);
    prop_assert!(seen >= 1);
    prop_assert!(equivalent(&result.hypothesis, &target).unwrap().is_none());
    Ok(())
}

/// Moving the clock values inside their regions, keeping the order of
/// fractional parts, keeps resets and verdict.
pub fn region_case() -> impl Strategy<Value = (GenSpec, Vec<TimedAction>, (i64, i64))> {
    (target_and_word(), (1i64..=9, 1i64..=9)).prop_map(|((s, w), l)| (s, w, l))
}

/// t ↦ λt / (1 + (λ−1)t): an increasing bijection of (0,1).
fn warp(t: TimeValue, (n, d): (i64, i64)) -> TimeValue {
    let (p, q) = (t.numer(), t.denom());
    TimeValue::new(n * p, d * (q - p) + n * p).unwrap()
}

pub fn check_region((spec, items, lambda): &(GenSpec, Vec<TimedAction>, (i64, i64))) -> Result<(), TestCaseError> {
    let a = generate(spec);
    let word: ota_learn::word::DelayWord = items.iter().copied().collect();
    let (rw, verdict) = a.run_delay(&word, true);
    let logical = rw.to_logical();
    let moved: LogicalWord = logical
        .iter()
        .map(|x| {
            let t = if x.time.is_integer() { x.time } else { TimeValue::from_int(x.time.floor()) + warp(x.time.fract(), *lambda) };
            prop_assert_eq!(ota_learn::region::Region::of(t), ota_learn::region::Region::of(x.time));
            Ok(TimedAction::new(x.action, t))
        })
        .collect::<Result<_, TestCaseError>>()?;
    let (r1, v1) = a.run_logical(&logical.logical_word(), true);
    let (r2, v2) = a.run_logical(&moved, true);
    prop_assert_eq!(v1, verdict);
    prop_assert_eq!(v1, v2);
    prop_assert_eq!(r1.resets(), r2.resets());
    Ok(())
}

/// Γ followed by Γ⁻¹ gives back the reset-delay word.
pub fn gamma_case() -> impl Strategy<Value = Vec<ResetAction>> {
    prop::collection::vec((0usize..3, time_value(8), any::<bool>()).prop_map(|(a, t, r)| ResetAction::new(Action(a), t, r)), 0..8)
}

pub fn check_gamma(items: &[ResetAction]) -> Result<(), TestCaseError> {
    let w = ResetDelayWord::new(items.to_vec());
    let logical = w.to_logical();
    prop_assert!(logical.is_valid());
    let back = logical.to_delay().map_err(|e| fail(format!("{e}")))?;
    prop_assert_eq!(&back, &w);
    prop_assert_eq!(back.to_logical(), logical);
    Ok(())
}

/// Two random automata over one alphabet.
pub fn pair_case() -> impl Strategy<Value = (GenSpec, GenSpec)> {
    small_spec().prop_flat_map(|s| {
        let m = s.alphabet;
        let other = (1usize..=4, 0u64..=6, any::<u64>()).prop_map(move |(n, k, seed)| GenSpec::new(n, m, k, seed));
        (Just(s), other)
    })
}

pub fn check_counterexample((a, b): &(GenSpec, GenSpec)) -> Result<(), TestCaseError> {
    let (a, b) = (generate(a), generate(b));
    let (ca, cb) = (a.complete().unwrap(), b.complete().unwrap());
    if let Some(w) = equivalent(&a, &b).map_err(|e| fail(format!("{e}")))? {
        let va = ca.run_delay(&w, false).1 == Verdict::Accept;
        let vb = cb.run_delay(&w, false).1 == Verdict::Accept;
        prop_assert!(va != vb, "witness {:?} does not separate", w);
    }
    Ok(())
}

/// A target and its learned hypothesis are certified equivalent; sampling must agree.
pub fn check_sampling(spec: &GenSpec, words: usize) -> Result<(), TestCaseError> {
    let target = generate(spec);
    let mut oracle = Oracle::new(&target, true).unwrap();
    let h = learn_smart(&mut oracle, target.alphabet(), &SmartConfig::default()).map_err(|e| fail(format!("{e}")))?.hypothesis;
    // A second, structurally different automaton with the same language.
    let completed = target.complete().unwrap();
    let pairs = [(&h, &target), (&completed, &target), (&h, &completed)];
    let mut rng = Xoshiro256StarStar::seed_from_u64(spec.seed);
    for (x, y) in pairs {
        prop_assert!(equivalent(x, y).unwrap().is_none());
        let (cx, cy) = (x.complete().unwrap(), y.complete().unwrap());
        for _ in 0..words {
            let w = random_delay_word(&mut rng, target.alphabet(), 6, spec.kappa);
            prop_assert_eq!(cx.run_delay(&w, false).1.is_accept(), cy.run_delay(&w, false).1.is_accept(), "{:?}", w);
        }
    }
    Ok(())
}
