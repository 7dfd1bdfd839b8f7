//! The teacher: membership by simulation, equivalence by region-graph search.

mod equivalence;

pub use equivalence::find_counterexample;

use thiserror::Error;

use crate::automaton::{AutomatonError, Ota, Verdict};
use crate::word::{DelayWord, LogicalWord, ResetDelayWord, ResetLogicalWord};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    /// Target accepts, hypothesis rejects.
    Positive,
    /// Hypothesis accepts, target rejects.
    Negative,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EquivResult<W> {
    Equivalent,
    Counterexample { word: W, sign: Sign },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeacherError {
    #[error("target is not deterministic")]
    NotDeterministic,
    #[error("automaton is not complete and deterministic")]
    NotComplete,
    #[error("automata use different alphabets")]
    AlphabetMismatch,
    #[error("teacher internal error: {0}")]
    Internal(String),
}

impl From<AutomatonError> for TeacherError {
    fn from(e: AutomatonError) -> Self {
        match e {
            AutomatonError::NotDeterministic => TeacherError::NotDeterministic,
            AutomatonError::AlphabetMismatch => TeacherError::AlphabetMismatch,
            other => TeacherError::Internal(other.to_string()),
        }
    }
}

/// Query interface of a teacher that reveals resets.
pub trait SmartTeacher {
    fn membership(&mut self, word: &LogicalWord) -> (ResetLogicalWord, Verdict);
    fn equivalence(&mut self, hypothesis: &Ota) -> Result<EquivResult<ResetDelayWord>, TeacherError>;
}

/// Query interface of a teacher that answers on delay words only.
pub trait NormalTeacher {
    fn membership(&mut self, word: &DelayWord) -> Verdict;
    fn equivalence(&mut self, hypothesis: &Ota) -> Result<EquivResult<DelayWord>, TeacherError>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct QueryCounts {
    pub membership: u64,
    pub equivalence: u64,
}

/// A teacher backed by a known target automaton.
#[derive(Clone, Debug)]
pub struct Oracle {
    target: Ota,
    completed: Ota,
    trick: bool,
    counts: QueryCounts,
}

impl Oracle {
    /// With `trick`, membership runs on the target as given (so leaving it
    /// yields ×); otherwise on its completion.
    pub fn new(target: &Ota, trick: bool) -> Result<Self, TeacherError> {
        let completed = target.complete()?;
        let target = if trick { target.clone() } else { completed.clone() };
        Ok(Oracle { target, completed, trick, counts: QueryCounts::default() })
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn trick(&self) -> bool {
        self.trick
    }

    pub fn target(&self) -> &Ota {
        &self.target
    }

    pub fn completed_target(&self) -> &Ota {
        &self.completed
    }

    pub fn membership_smart(&mut self, word: &LogicalWord) -> (ResetLogicalWord, Verdict) {
        self.counts.membership += 1;
        self.target.run_logical(word, self.trick)
    }

    pub fn membership_normal(&mut self, word: &DelayWord) -> Verdict {
        self.counts.membership += 1;
        self.target.run_delay(word, self.trick).1
    }

    fn disagreement(&mut self, hypothesis: &Ota) -> Result<Option<(DelayWord, Sign)>, TeacherError> {
        self.counts.equivalence += 1;
        let h = hypothesis.with_alphabet(self.completed.alphabet())?;
        let found = find_counterexample(&h, &self.completed)?;
        if let Some((w, sign)) = &found {
            let h_acc = h.run_delay(w, false).1.is_accept();
            let t_acc = self.completed.run_delay(w, false).1.is_accept();
            if h_acc == t_acc || (*sign == Sign::Negative) != h_acc {
                return Err(TeacherError::Internal("counterexample failed its replay check".into()));
            }
        }
        Ok(found)
    }

    pub fn equivalence_smart(&mut self, hypothesis: &Ota) -> Result<EquivResult<ResetDelayWord>, TeacherError> {
        Ok(match self.disagreement(hypothesis)? {
            None => EquivResult::Equivalent,
            Some((w, sign)) => EquivResult::Counterexample { word: self.completed.run_delay(&w, false).0, sign },
        })
    }

    pub fn equivalence_normal(&mut self, hypothesis: &Ota) -> Result<EquivResult<DelayWord>, TeacherError> {
        Ok(match self.disagreement(hypothesis)? {
            None => EquivResult::Equivalent,
            Some((word, sign)) => EquivResult::Counterexample { word, sign },
        })
    }
}

impl SmartTeacher for Oracle {
    fn membership(&mut self, word: &LogicalWord) -> (ResetLogicalWord, Verdict) {
        self.membership_smart(word)
    }

    fn equivalence(&mut self, hypothesis: &Ota) -> Result<EquivResult<ResetDelayWord>, TeacherError> {
        self.equivalence_smart(hypothesis)
    }
}

impl NormalTeacher for Oracle {
    fn membership(&mut self, word: &DelayWord) -> Verdict {
        self.membership_normal(word)
    }

    fn equivalence(&mut self, hypothesis: &Ota) -> Result<EquivResult<DelayWord>, TeacherError> {
        self.equivalence_normal(hypothesis)
    }
}

/// Timed-language equivalence of two deterministic automata, with a witness
/// delay word when they differ.
pub fn equivalent(a: &Ota, b: &Ota) -> Result<Option<DelayWord>, TeacherError> {
    let ca = a.complete()?;
    let cb = b.complete()?.with_alphabet(ca.alphabet())?;
    Ok(find_counterexample(&ca, &cb)?.map(|(w, _)| w))
}
