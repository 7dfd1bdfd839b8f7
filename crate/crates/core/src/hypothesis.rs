//! From a prepared table to a DFA over reset-logical actions, and from there
//! to a complete one-clock hypothesis.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::alphabet::{Action, Alphabet};
use crate::automaton::{LocationId, Ota, Transition, Verdict};
use crate::guard::Guard;
use crate::table::{ObservationTable, RowKey};
use crate::time::TimeValue;
use crate::word::ResetAction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("partition input must start at 0")]
    MissingZero,
    #[error("partition input is not strictly increasing")]
    Unsorted,
    #[error("two fractional partition values share the floor {0}")]
    DuplicateFloor(u64),
    #[error("table is not prepared: {0}")]
    TableNotPrepared(&'static str),
    #[error("location {location} has conflicting transitions on {action} at {time}")]
    NonDeterministic { location: usize, action: String, time: TimeValue },
    #[error("hypothesis is not a complete deterministic automaton")]
    NotComplete,
}

/// P^c: turn `0 = μ_0 < μ_1 < … < μ_n` into guards `I_0 … I_n` that
/// partition `[0,∞)` with `μ_i ∈ I_i`.
pub fn partition(values: &[TimeValue]) -> Result<Vec<Guard>, HypothesisError> {
    if values.first() != Some(&TimeValue::ZERO) {
        return Err(HypothesisError::MissingZero);
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HypothesisError::Unsorted);
    }
    let mut floors = std::collections::HashSet::new();
    for v in values.iter().filter(|v| !v.is_integer()) {
        if !floors.insert(v.floor()) {
            return Err(HypothesisError::DuplicateFloor(v.floor()));
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for (i, mu) in values.iter().enumerate() {
        let next = values.get(i + 1);
        let (lower, lower_closed) = if mu.is_integer() { (mu.floor(), true) } else { (mu.floor(), false) };
        let (upper, upper_closed) = match next {
            None => (None, false),
            Some(n) if n.is_integer() => (Some(n.floor()), false),
            Some(n) => (Some(n.floor()), true),
        };
        let g = Guard::new(lower, lower_closed, upper, upper_closed).expect("partition cell is non-empty");
        out.push(g);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DfaTransition {
    pub source: usize,
    pub label: ResetAction,
    pub target: usize,
}

/// The intermediate DFA M whose letters are reset-logical actions.
#[derive(Clone, Debug)]
pub struct IntermediateDfa {
    pub alphabet: Alphabet,
    /// One per distinct S row, in order of first appearance in S.
    pub rows: Vec<RowKey>,
    pub accepting: Vec<bool>,
    /// Locations whose ε verdict is ×.
    pub invalid: Vec<bool>,
    pub initial: usize,
    pub transitions: Vec<DfaTransition>,
}

impl IntermediateDfa {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn run(&self, word: &[ResetAction]) -> Option<usize> {
        let mut q = self.initial;
        for x in word {
            q = self.transitions.iter().find(|t| t.source == q && t.label == *x)?.target;
        }
        Some(q)
    }
}

/// Build M from a closed, consistent table.
pub fn build_dfa(table: &ObservationTable) -> Result<IntermediateDfa, HypothesisError> {
    if !table.is_closed() {
        return Err(HypothesisError::TableNotPrepared("not closed"));
    }
    if !table.is_consistent() {
        return Err(HypothesisError::TableNotPrepared("not consistent"));
    }
    let mut loc_of: HashMap<RowKey, usize> = HashMap::new();
    let mut rows = Vec::new();
    let mut accepting = Vec::new();
    let mut invalid = Vec::new();
    for entry in table.s() {
        let key = table.row_key(entry);
        if !loc_of.contains_key(&key) {
            loc_of.insert(key.clone(), rows.len());
            rows.push(key);
            accepting.push(entry.cells[0].verdict == Verdict::Accept);
            invalid.push(entry.cells[0].verdict == Verdict::Invalid);
        }
    }
    let mut edges: BTreeMap<(usize, Action, TimeValue), (bool, usize)> = BTreeMap::new();
    for entry in table.entries() {
        let Some(last) = entry.word.last() else { continue };
        let parent = table.entry(&entry.word.prefix(entry.word.len() - 1)).ok_or(HypothesisError::TableNotPrepared("not prefix-closed"))?;
        let source = loc_of[&table.row_key(parent)];
        let target = loc_of[&table.row_key(entry)];
        match edges.insert((source, last.action, last.time), (last.reset, target)) {
            Some(prev) if prev != (last.reset, target) => {
                return Err(HypothesisError::NonDeterministic { location: source, action: table.alphabet().name(last.action).to_string(), time: last.time })
            }
            _ => {}
        }
    }
    let transitions = edges
        .into_iter()
        .map(|((source, action, time), (reset, target))| DfaTransition { source, label: ResetAction::new(action, time, reset), target })
        .collect();
    Ok(IntermediateDfa { alphabet: table.alphabet().clone(), rows, accepting, invalid, initial: 0, transitions })
}

/// Turn M into a COTA by partitioning each Ψ_{q,σ}.
pub fn build_hypothesis(dfa: &IntermediateDfa) -> Result<Ota, HypothesisError> {
    let mut transitions = Vec::new();
    for q in 0..dfa.len() {
        for a in dfa.alphabet.actions() {
            // Transitions are sorted by (source, action, time) already.
            let out: Vec<&DfaTransition> = dfa.transitions.iter().filter(|t| t.source == q && t.label.action == a).collect();
            let values: Vec<TimeValue> = out.iter().map(|t| t.label.time).collect();
            let guards = partition(&values)?;
            for (t, g) in out.iter().zip(guards) {
                transitions.push(Transition { source: LocationId(q), action: a, guard: g, reset: t.label.reset, target: LocationId(t.target) });
            }
        }
    }
    let names = (0..dfa.len()).map(|i| format!("q{i}")).collect();
    let accepting: Vec<LocationId> = (0..dfa.len()).filter(|&q| dfa.accepting[q]).map(LocationId).collect();
    let h = Ota::new(dfa.alphabet.clone(), names, LocationId(dfa.initial), &accepting, transitions).map_err(|_| HypothesisError::NotComplete)?;
    let report = h.validate();
    if !(report.deterministic && report.complete) {
        return Err(HypothesisError::NotComplete);
    }
    Ok(h)
}

pub fn hypothesis_from_table(table: &ObservationTable) -> Result<Ota, HypothesisError> {
    build_hypothesis(&build_dfa(table)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TimeValue {
        s.parse().unwrap()
    }

    fn show(gs: &[Guard]) -> Vec<String> {
        gs.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(show(&partition(&[t("0"), t("1.1"), t("3")]).unwrap()), ["[0,1]", "(1,3)", "[3,+)"]);
        assert_eq!(show(&partition(&[t("0")]).unwrap()), ["[0,+)"]);
        assert_eq!(show(&partition(&[t("0"), t("2"), t("3.1")]).unwrap()), ["[0,2)", "[2,3]", "(3,+)"]);
        assert_eq!(show(&partition(&[t("0"), t("2"), t("4")]).unwrap()), ["[0,2)", "[2,4)", "[4,+)"]);
        assert_eq!(show(&partition(&[t("0"), t("1.1"), t("2.1")]).unwrap()), ["[0,1]", "(1,2]", "(2,+)"]);
    }

    #[test]
    fn partition_errors() {
        assert_eq!(partition(&[t("1")]), Err(HypothesisError::MissingZero));
        assert_eq!(partition(&[]), Err(HypothesisError::MissingZero));
        assert_eq!(partition(&[t("0"), t("2"), t("1")]), Err(HypothesisError::Unsorted));
        assert_eq!(partition(&[t("0"), t("1.1"), t("1.5")]), Err(HypothesisError::DuplicateFloor(1)));
    }
}
