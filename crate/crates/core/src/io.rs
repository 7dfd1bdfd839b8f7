//! JSON documents for automata and learning statistics.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError};
use crate::automaton::{AutomatonError, LocationId, Ota, Transition};
use crate::guard::{Guard, GuardError};
use crate::learner::LearnStats;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad alphabet: {0}")]
    Alphabet(#[from] AlphabetError),
    #[error("bad guard `{text}`: {source}")]
    Guard { text: String, source: GuardError },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDocument {
    pub source: String,
    pub action: String,
    pub guard: String,
    pub reset: bool,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonDocument {
    pub alphabet: Vec<String>,
    pub locations: Vec<String>,
    pub initial: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionDocument>,
}

impl AutomatonDocument {
    pub fn from_ota(a: &Ota) -> Self {
        let name = |q: LocationId| a.location_name(q).to_string();
        AutomatonDocument {
            alphabet: a.alphabet().symbols().to_vec(),
            locations: a.locations().to_vec(),
            initial: name(a.initial()),
            accepting: a.accepting().into_iter().map(name).collect(),
            transitions: a
                .transitions()
                .iter()
                .map(|t| TransitionDocument {
                    source: name(t.source),
                    action: a.alphabet().name(t.action).to_string(),
                    guard: t.guard.to_string(),
                    reset: t.reset,
                    target: name(t.target),
                })
                .collect(),
        }
    }

    pub fn to_ota(&self) -> Result<Ota, IoError> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let loc = |n: &str| self.locations.iter().position(|l| l == n).map(LocationId).ok_or_else(|| IoError::UnknownLocation(n.to_string()));
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let guard: Guard = t.guard.parse().map_err(|source| IoError::Guard { text: t.guard.clone(), source })?;
            transitions.push(Transition {
                source: loc(&t.source)?,
                action: alphabet.lookup(&t.action).ok_or_else(|| IoError::UnknownAction(t.action.clone()))?,
                guard,
                reset: t.reset,
                target: loc(&t.target)?,
            });
        }
        let accepting = self.accepting.iter().map(|n| loc(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(Ota::new(alphabet, self.locations.clone(), loc(&self.initial)?, &accepting, transitions)?)
    }
}

pub fn automaton_to_json(a: &Ota) -> String {
    let mut s = serde_json::to_string_pretty(&AutomatonDocument::from_ota(a)).expect("serializable");
    s.push('\n');
    s
}

pub fn automaton_from_json(text: &str) -> Result<Ota, IoError> {
    serde_json::from_str::<AutomatonDocument>(text)?.to_ota()
}

pub fn read_automaton(path: &Path) -> Result<Ota, IoError> {
    automaton_from_json(&read(path)?)
}

pub fn write_automaton(path: &Path, a: &Ota) -> Result<(), IoError> {
    write(path, &automaton_to_json(a))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    pub mode: String,
    pub membership_count: u64,
    pub equivalence_count: u64,
    pub locations_learned: usize,
    pub table_rows: usize,
    pub table_columns: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub explored_instances: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub discarded_instances: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cache_hits: Option<u64>,
    pub wall_time_ms: u64,
}

impl StatsDocument {
    /// `locations_learned` counts every hypothesis location, the sink included.
    pub fn new(mode: &str, stats: &LearnStats, hypothesis: &Ota) -> Self {
        StatsDocument {
            mode: mode.to_string(),
            membership_count: stats.membership_count,
            equivalence_count: stats.equivalence_count,
            locations_learned: hypothesis.locations().len(),
            table_rows: stats.table_rows,
            table_columns: stats.table_columns,
            explored_instances: stats.normal.as_ref().map(|n| n.explored_instances),
            discarded_instances: stats.normal.as_ref().map(|n| n.discarded_instances()),
            cache_hits: stats.normal.as_ref().map(|n| n.cache_hits),
            wall_time_ms: stats.wall_time.as_millis() as u64,
        }
    }
}

pub fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File { path: path.display().to_string(), source })
}
