//! Learning loops for the smart and normal teacher settings.

pub mod normal;
pub mod smart;

use std::time::Duration;

use thiserror::Error;

use crate::automaton::Ota;
use crate::hypothesis::HypothesisError;
use crate::table::{ObservationTable, TableError};
use crate::teacher::TeacherError;

pub use normal::{learn_normal, NormalConfig, NormalStats};
pub use smart::{learn_smart, learn_smart_observed, SmartConfig};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Hypothesis(#[from] HypothesisError),
    #[error(transparent)]
    Teacher(#[from] TeacherError),
    #[error("counterexample did not change the table")]
    NoProgress,
    #[error("|S| = {size} exceeds the bound {bound}")]
    PrefixBound { size: usize, bound: usize },
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("no table instance left to explore")]
    Exhausted,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearnStats {
    pub membership_count: u64,
    pub equivalence_count: u64,
    /// |S| + |R| of the final table.
    pub table_rows: usize,
    /// |E| of the final table.
    pub table_columns: usize,
    pub wall_time: Duration,
    /// Normal-teacher figures.
    pub normal: Option<NormalStats>,
}

#[derive(Clone, Debug)]
pub struct LearnResult {
    pub hypothesis: Ota,
    pub table: ObservationTable,
    pub stats: LearnStats,
}

/// What changed the table last.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableStep {
    Initial,
    Counterexample,
    Closed,
    Consistent,
    EvidenceClosed,
}

/// Progress notifications from the smart learner.
pub enum TraceEvent<'a> {
    Table { step: TableStep, table: &'a ObservationTable },
    Hypothesis { table: &'a ObservationTable, hypothesis: &'a Ota },
}
