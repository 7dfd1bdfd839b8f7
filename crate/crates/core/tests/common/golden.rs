//! Scripted replay of the running example's five counterexamples.

use std::collections::VecDeque;
use std::path::Path;

use ota_learn::io::read_automaton;
use ota_learn::learner::{learn_smart_observed, SmartConfig, TableStep, TraceEvent};

use ota_learn::table::show_reset_logical;
use ota_learn::teacher::{equivalent, EquivResult, Sign, SmartTeacher, TeacherError};
use ota_learn::word::{parse_word, AnyWord, WordKind};
use ota_learn::{LogicalWord, Ota, ResetDelayWord, ResetLogicalWord, Verdict};

pub struct Scripted {
    target: Ota,
    script: VecDeque<(ResetDelayWord, Sign)>,
    hypotheses: Vec<Ota>,
}

impl SmartTeacher for Scripted {
    fn membership(&mut self, word: &LogicalWord) -> (ResetLogicalWord, Verdict) {
        self.target.run_logical(word, false)
    }

    fn equivalence(&mut self, h: &Ota) -> Result<EquivResult<ResetDelayWord>, TeacherError> {
        self.hypotheses.push(h.clone());
        Ok(match self.script.pop_front() {
            Some((word, sign)) => EquivResult::Counterexample { word, sign },
            None => EquivResult::Equivalent,
        })
    }
}

pub fn running_example() -> Ota {
    read_automaton(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/running_example.json")).unwrap()
}

fn ctx(text: &str, target: &Ota) -> ResetDelayWord {
    match parse_word(text, WordKind::ResetDelay, target.alphabet()).unwrap() {
        AnyWord::ResetDelay(w) => w,
        _ => unreachable!(),
    }
}

// (prefix, verdicts) for S, then for R.
pub type Expected = (&'static [(&'static str, &'static str)], &'static [(&'static str, &'static str)]);

pub const T1: Expected = (&[("ε", "-")], &[("(a,0,⊤)", "-"), ("(b,0,⊤)", "-")]);
pub const T2: Expected = (&[("ε", "-")], &[("(a,0,⊤)", "-"), ("(b,0,⊤)", "-"), ("(a,1.1,⊥)", "+")]);
pub const T3: Expected = (&[("ε", "-"), ("(a,1.1,⊥)", "+")], &[("(a,0,⊤)", "-"), ("(b,0,⊤)", "-"), ("(a,1.1,⊥)(a,0,⊤)", "-"), ("(a,1.1,⊥)(b,0,⊤)", "-")]);
pub const T4: Expected =
    (&[("ε", "-"), ("(a,1.1,⊥)", "+")], &[("(a,0,⊤)", "-"), ("(b,0,⊤)", "-"), ("(a,1.1,⊥)(a,0,⊤)", "-"), ("(a,1.1,⊥)(b,0,⊤)", "-"), ("(a,1.1,⊥)(b,2,⊤)", "+")]);
pub const T5: Expected = (
    &[("ε", "-"), ("(a,1.1,⊥)", "+")],
    &[("(a,0,⊤)", "-"), ("(b,0,⊤)", "-"), ("(a,1.1,⊥)(a,0,⊤)", "-"), ("(a,1.1,⊥)(b,0,⊤)", "-"), ("(a,1.1,⊥)(b,2,⊤)", "+"), ("(a,3,⊤)", "-")],
);
pub const T6: Expected = (
    &[("ε", "-"), ("(a,1.1,⊥)", "+")],
    &[
        ("(a,0,⊤)", "-"),
        ("(b,0,⊤)", "-"),
        ("(a,1.1,⊥)(a,0,⊤)", "-"),
        ("(a,1.1,⊥)(b,0,⊤)", "-"),
        ("(a,1.1,⊥)(b,2,⊤)", "+"),
        ("(a,3,⊤)", "-"),
        ("(a,0,⊤)(a,1.1,⊤)", "-"),
    ],
);
pub const T7: Expected = (
    &[("ε", "-+"), ("(a,1.1,⊥)", "+-")],
    &[
        ("(a,0,⊤)", "--"),
        ("(b,0,⊤)", "-+"),
        ("(a,1.1,⊥)(a,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,2,⊤)", "+-"),
        ("(a,3,⊤)", "--"),
        ("(a,0,⊤)(a,1.1,⊤)", "--"),
    ],
);
pub const T8: Expected = (
    &[("ε", "-+"), ("(a,1.1,⊥)", "+-")],
    &[
        ("(a,0,⊤)", "--"),
        ("(b,0,⊤)", "-+"),
        ("(a,1.1,⊥)(a,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,2,⊤)", "+-"),
        ("(a,3,⊤)", "--"),
        ("(a,0,⊤)(a,1.1,⊤)", "--"),
        ("(a,1.1,⊥)(a,1.1,⊤)", "--"),
    ],
);
pub const T9: Expected = (
    &[("ε", "-+"), ("(a,1.1,⊥)", "+-"), ("(a,0,⊤)", "--")],
    &[
        ("(b,0,⊤)", "-+"),
        ("(a,1.1,⊥)(a,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,2,⊤)", "+-"),
        ("(a,3,⊤)", "--"),
        ("(a,0,⊤)(a,1.1,⊤)", "--"),
        ("(a,1.1,⊥)(a,1.1,⊤)", "--"),
        ("(a,0,⊤)(a,0,⊤)", "--"),
        ("(a,0,⊤)(b,0,⊤)", "--"),
    ],
);
pub const T10: Expected = (
    &[("ε", "-+"), ("(a,1.1,⊥)", "+-"), ("(a,0,⊤)", "--")],
    &[
        ("(b,0,⊤)", "-+"),
        ("(a,1.1,⊥)(a,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,2,⊤)", "+-"),
        ("(a,3,⊤)", "--"),
        ("(a,0,⊤)(a,1.1,⊤)", "--"),
        ("(a,1.1,⊥)(a,1.1,⊤)", "--"),
        ("(a,0,⊤)(a,0,⊤)", "--"),
        ("(a,0,⊤)(b,0,⊤)", "--"),
        ("(a,1.1,⊥)(b,4,⊤)", "--"),
    ],
);

type Snapshot = (TableStep, Vec<(String, String)>, Vec<(String, String)>);

pub fn run_trace() -> (Vec<Snapshot>, Ota, Vec<Ota>) {
    let target = running_example().complete().unwrap();
    let script = [
        ("(a,1.1,N)", Sign::Positive),
        ("(a,1.1,N)(b,0.9,R)", Sign::Positive),
        ("(a,3,R)", Sign::Negative),
        ("(a,0,R)(a,1.3,R)", Sign::Negative),
        ("(a,1.1,N)(b,2.9,R)", Sign::Negative),
    ]
    .iter()
    .map(|(w, s)| (ctx(w, &target), *s))
    .collect();
    let alphabet = target.alphabet().clone();
    let mut teacher = Scripted { target, script, hypotheses: Vec::new() };
    let mut snaps = Vec::new();
    let result = learn_smart_observed(&mut teacher, &alphabet, &SmartConfig::default(), &mut |ev| {
        if let TraceEvent::Table { step, table } = ev {
            let rows = |entries: &[ota_learn::table::Entry]| {
                entries.iter().map(|e| (show_reset_logical(&e.word, &alphabet), e.cells.iter().map(|c| c.verdict.symbol()).collect())).collect::<Vec<_>>()
            };
            snaps.push((step, rows(table.s()), rows(table.r())));
        }
    })
    .unwrap();
    (snaps, result.hypothesis, teacher.hypotheses)
}

pub fn owned(rows: &[(&str, &str)]) -> Vec<(String, String)> {
    rows.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub const EXPECTED: [Expected; 10] = [T1, T2, T3, T4, T5, T6, T7, T8, T9, T10];

pub const STEPS: [TableStep; 10] = {
    use TableStep::*;
    [Initial, Counterexample, Closed, Counterexample, Counterexample, Counterexample, Consistent, EvidenceClosed, Closed, Counterexample]
};

/// All golden checks at once; the first mismatch is returned.
pub fn check() -> Result<(), String> {
    let (snaps, h, asked) = run_trace();
    if snaps.len() != EXPECTED.len() {
        return Err(format!("{} tables instead of {}", snaps.len(), EXPECTED.len()));
    }
    for (i, ((step, s, r), (es, er))) in snaps.iter().zip(EXPECTED.iter()).enumerate() {
        if s != &owned(es) || r != &owned(er) {
            return Err(format!("T{} differs", i + 1));
        }
        if *step != STEPS[i] {
            return Err(format!("T{} came from {:?}", i + 1, step));
        }
    }
    if asked.len() != 6 || h.locations().len() != 3 {
        return Err(format!("{} hypotheses, final one has {} locations", asked.len(), h.locations().len()));
    }
    let acc = h.accepting();
    let b = h.alphabet().lookup("b").unwrap();
    let looped = acc.iter().any(|&q| h.outgoing(q, b).any(|t| t.guard.to_string() == "[2,4)" && t.target == q && t.reset));
    if !looped {
        return Err("no b-loop with guard [2,4)".into());
    }
    if equivalent(&h, &running_example()).unwrap().is_some() {
        return Err("final hypothesis differs from the target".into());
    }
    Ok(())
}
