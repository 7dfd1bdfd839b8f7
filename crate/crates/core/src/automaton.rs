//! One-clock timed automata and their simulation.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Action, Alphabet};
use crate::guard::Guard;
use crate::time::TimeValue;
use crate::word::{DelayWord, LogicalWord, ResetDelayWord, ResetLogicalWord};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LocationId(pub usize);

/// Outcome of a run: accepted, rejected, or left the (uncompleted) automaton.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Verdict {
    Accept,
    Reject,
    Invalid,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Accept => '+',
            Verdict::Reject => '-',
            Verdict::Invalid => 'x',
        }
    }

    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Transition {
    pub source: LocationId,
    pub action: Action,
    pub guard: Guard,
    pub reset: bool,
    pub target: LocationId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("duplicate location `{0}`")]
    DuplicateLocation(String),
    #[error("automaton has no locations")]
    NoLocations,
    #[error("transition {0} references a location or action outside the automaton")]
    Dangling(usize),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("alphabets differ")]
    AlphabetMismatch,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub deterministic: bool,
    pub complete: bool,
    pub max_constant: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ota {
    alphabet: Alphabet,
    locations: Vec<String>,
    initial: LocationId,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
    sink: Option<LocationId>,
    // transition indices per (location, action)
    outgoing: Vec<Vec<usize>>,
}

/// A detailed run, used where fired transitions matter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Run {
    pub resets: Vec<bool>,
    pub verdict: Verdict,
    /// Fired transition indices; shorter than the word if the run stopped.
    pub fired: Vec<usize>,
}

impl Ota {
    pub fn new(
        alphabet: Alphabet,
        locations: Vec<String>,
        initial: LocationId,
        accepting: &[LocationId],
        transitions: Vec<Transition>,
    ) -> Result<Self, AutomatonError> {
        if locations.is_empty() {
            return Err(AutomatonError::NoLocations);
        }
        let mut seen = HashSet::new();
        for l in &locations {
            if !seen.insert(l.as_str()) {
                return Err(AutomatonError::DuplicateLocation(l.clone()));
            }
        }
        let n = locations.len();
        if initial.0 >= n {
            return Err(AutomatonError::UnknownLocation(format!("#{}", initial.0)));
        }
        let mut acc = vec![false; n];
        for &q in accepting {
            if q.0 >= n {
                return Err(AutomatonError::UnknownLocation(format!("#{}", q.0)));
            }
            acc[q.0] = true;
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.source.0 >= n || t.target.0 >= n || t.action.0 >= alphabet.len() {
                return Err(AutomatonError::Dangling(i));
            }
        }
        let mut ota = Ota { alphabet, locations, initial, accepting: acc, transitions, sink: None, outgoing: Vec::new() };
        ota.reindex();
        Ok(ota)
    }

    fn reindex(&mut self) {
        let m = self.alphabet.len();
        let mut outgoing = vec![Vec::new(); self.locations.len() * m];
        for (i, t) in self.transitions.iter().enumerate() {
            outgoing[t.source.0 * m + t.action.0].push(i);
        }
        self.outgoing = outgoing;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn location_ids(&self) -> impl Iterator<Item = LocationId> {
        (0..self.locations.len()).map(LocationId)
    }

    pub fn location_name(&self, q: LocationId) -> &str {
        &self.locations[q.0]
    }

    pub fn location_by_name(&self, name: &str) -> Option<LocationId> {
        self.locations.iter().position(|l| l == name).map(LocationId)
    }

    pub fn initial(&self) -> LocationId {
        self.initial
    }

    pub fn is_accepting(&self, q: LocationId) -> bool {
        self.accepting[q.0]
    }

    pub fn accepting(&self) -> Vec<LocationId> {
        self.location_ids().filter(|&q| self.accepting[q.0]).collect()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn sink(&self) -> Option<LocationId> {
        self.sink
    }

    pub fn outgoing(&self, q: LocationId, a: Action) -> impl Iterator<Item = &Transition> {
        self.outgoing[q.0 * self.alphabet.len() + a.0].iter().map(move |&i| &self.transitions[i])
    }

    fn enabled(&self, q: LocationId, a: Action, v: TimeValue) -> Option<usize> {
        self.outgoing[q.0 * self.alphabet.len() + a.0].iter().copied().find(|&i| self.transitions[i].guard.contains(v))
    }

    /// Transition taken from `q` on `a` at clock value `v`, if any.
    pub fn step(&self, q: LocationId, a: Action, v: TimeValue) -> Option<&Transition> {
        self.enabled(q, a, v).map(|i| &self.transitions[i])
    }

    pub fn max_constant(&self) -> u64 {
        self.transitions.iter().map(|t| t.guard.max_constant()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut deterministic = true;
        let mut complete = true;
        for q in self.location_ids() {
            for a in self.alphabet.actions() {
                let guards: Vec<Guard> = self.outgoing(q, a).map(|t| t.guard).collect();
                for i in 0..guards.len() {
                    for j in i + 1..guards.len() {
                        if guards[i].intersects(&guards[j]) {
                            deterministic = false;
                        }
                    }
                }
                if !Guard::is_partition(&guards) {
                    complete = false;
                }
            }
        }
        ValidationReport { deterministic, complete: complete && deterministic, max_constant: self.max_constant() }
    }

    /// Add a non-accepting sink covering every uncovered clock value.
    /// Returns a clone when nothing is uncovered.
    pub fn complete(&self) -> Result<Ota, AutomatonError> {
        let report = self.validate();
        if !report.deterministic {
            return Err(AutomatonError::NotDeterministic);
        }
        if report.complete {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        let mut name = "sink".to_string();
        let mut k = 1;
        while out.locations.contains(&name) {
            name = format!("sink_{k}");
            k += 1;
        }
        let sink = LocationId(out.locations.len());
        out.locations.push(name);
        out.accepting.push(false);
        out.reindex();
        let mut extra = Vec::new();
        for q in out.location_ids() {
            for a in out.alphabet.actions() {
                let guards: Vec<Guard> = out.outgoing(q, a).map(|t| t.guard).collect();
                for g in Guard::complement(&guards) {
                    extra.push(Transition { source: q, action: a, guard: g, reset: true, target: sink });
                }
            }
        }
        out.transitions.extend(extra);
        out.sink = Some(sink);
        out.reindex();
        Ok(out)
    }

    /// Simulate a delay word. A step with no enabled transition stops the run:
    /// the verdict is `Invalid` with `trick`, `Reject` otherwise, and all
    /// remaining resets are reported as true.
    pub fn run_delay_detailed(&self, word: &DelayWord, trick: bool) -> Run {
        let mut q = self.initial;
        let mut clock = TimeValue::ZERO;
        let mut resets = Vec::with_capacity(word.len());
        let mut fired = Vec::with_capacity(word.len());
        let mut stopped = false;
        for item in word.iter() {
            if stopped {
                resets.push(true);
                continue;
            }
            let v = clock + item.time;
            match self.enabled(q, item.action, v) {
                Some(i) => {
                    let t = &self.transitions[i];
                    resets.push(t.reset);
                    fired.push(i);
                    q = t.target;
                    clock = if t.reset { TimeValue::ZERO } else { v };
                }
                None => {
                    stopped = true;
                    resets.push(true);
                }
            }
        }
        Run { resets, verdict: self.final_verdict(q, stopped, trick), fired }
    }

    pub fn run_delay(&self, word: &DelayWord, trick: bool) -> (ResetDelayWord, Verdict) {
        let run = self.run_delay_detailed(word, trick);
        (word.with_resets(&run.resets), run.verdict)
    }

    /// π: simulate a logical word, treating each value as the clock reading.
    /// An invalid position (value below the current clock without a reset)
    /// stops the run like a missing transition does.
    pub fn run_logical_detailed(&self, word: &LogicalWord, trick: bool) -> Run {
        let mut q = self.initial;
        let mut clock = TimeValue::ZERO;
        let mut resets = Vec::with_capacity(word.len());
        let mut fired = Vec::with_capacity(word.len());
        let mut stopped = false;
        for item in word.iter() {
            if stopped {
                resets.push(true);
                continue;
            }
            let step = if item.time < clock { None } else { self.enabled(q, item.action, item.time) };
            match step {
                Some(i) => {
                    let t = &self.transitions[i];
                    resets.push(t.reset);
                    fired.push(i);
                    q = t.target;
                    clock = if t.reset { TimeValue::ZERO } else { item.time };
                }
                None => {
                    stopped = true;
                    resets.push(true);
                }
            }
        }
        Run { resets, verdict: self.final_verdict(q, stopped, trick), fired }
    }

    pub fn run_logical(&self, word: &LogicalWord, trick: bool) -> (ResetLogicalWord, Verdict) {
        let run = self.run_logical_detailed(word, trick);
        (word.with_resets(&run.resets), run.verdict)
    }

    fn final_verdict(&self, q: LocationId, stopped: bool, trick: bool) -> Verdict {
        match (stopped, trick) {
            (true, true) => Verdict::Invalid,
            (true, false) => Verdict::Reject,
            (false, _) if self.accepting[q.0] => Verdict::Accept,
            (false, _) => Verdict::Reject,
        }
    }

    /// A non-accepting location whose transitions all loop back to itself.
    pub fn is_trap(&self, q: LocationId) -> bool {
        !self.accepting[q.0] && self.transitions.iter().filter(|t| t.source == q).all(|t| t.target == q)
    }

    pub fn non_trap_count(&self) -> usize {
        self.location_ids().filter(|&q| !self.is_trap(q)).count()
    }

    /// Locations reachable from the initial one, ignoring guards.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.locations.len()];
        let mut stack = vec![self.initial];
        seen[self.initial.0] = true;
        while let Some(q) = stack.pop() {
            for t in self.transitions.iter().filter(|t| t.source == q) {
                if !seen[t.target.0] {
                    seen[t.target.0] = true;
                    stack.push(t.target);
                }
            }
        }
        seen
    }

    /// The same automaton over `alphabet`, which must hold the same symbols.
    pub fn with_alphabet(&self, alphabet: &Alphabet) -> Result<Ota, AutomatonError> {
        if !self.alphabet.same_symbols(alphabet) {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let transitions = self.transitions.iter().map(|t| Transition { action: alphabet.lookup(self.alphabet.name(t.action)).unwrap(), ..t.clone() }).collect();
        let mut out = Ota::new(alphabet.clone(), self.locations.clone(), self.initial, &self.accepting(), transitions)?;
        out.sink = self.sink;
        Ok(out)
    }

    /// Structural identity key: equal keys mean identical automata up to location names.
    pub fn structural_key(&self) -> StructuralKey {
        let mut ts: Vec<(usize, usize, String, bool, usize)> =
            self.transitions.iter().map(|t| (t.source.0, t.action.0, t.guard.to_string(), t.reset, t.target.0)).collect();
        ts.sort();
        StructuralKey { locations: self.locations.len(), initial: self.initial.0, accepting: self.accepting.clone(), transitions: ts }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StructuralKey {
    locations: usize,
    initial: usize,
    accepting: Vec<bool>,
    transitions: Vec<(usize, usize, String, bool, usize)>,
}

/// Builder-style helper for writing automata by name.
pub struct OtaBuilder {
    alphabet: Alphabet,
    locations: Vec<String>,
    initial: Option<String>,
    accepting: Vec<String>,
    transitions: Vec<(String, String, Guard, bool, String)>,
}

impl OtaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        OtaBuilder { alphabet, locations: Vec::new(), initial: None, accepting: Vec::new(), transitions: Vec::new() }
    }

    pub fn location(mut self, name: &str) -> Self {
        self.locations.push(name.to_string());
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    pub fn accepting(mut self, name: &str) -> Self {
        self.accepting.push(name.to_string());
        self
    }

    pub fn transition(mut self, source: &str, action: &str, guard: Guard, reset: bool, target: &str) -> Self {
        self.transitions.push((source.into(), action.into(), guard, reset, target.into()));
        self
    }

    pub fn build(self) -> Result<Ota, AutomatonError> {
        let loc = |n: &str| self.locations.iter().position(|l| l == n).map(LocationId).ok_or_else(|| AutomatonError::UnknownLocation(n.to_string()));
        let initial = match &self.initial {
            Some(n) => loc(n)?,
            None => LocationId(0),
        };
        let accepting = self.accepting.iter().map(|n| loc(n)).collect::<Result<Vec<_>, _>>()?;
        let mut transitions = Vec::new();
        for (s, a, g, r, t) in &self.transitions {
            let action = self.alphabet.lookup(a).ok_or_else(|| AutomatonError::UnknownAction(a.clone()))?;
            transitions.push(Transition { source: loc(s)?, action, guard: *g, reset: *r, target: loc(t)? });
        }
        Ota::new(self.alphabet.clone(), self.locations.clone(), initial, &accepting, transitions)
    }
}
