//! Learning with a teacher that reveals resets.

use std::collections::HashMap;
use std::time::Instant;

use crate::alphabet::Alphabet;
use crate::automaton::Verdict;
use crate::hypothesis::{build_dfa, build_hypothesis};
use crate::table::ObservationTable;
use crate::teacher::{EquivResult, SmartTeacher};
use crate::word::{LogicalWord, ResetLogicalWord};

use super::{LearnError, LearnResult, LearnStats, TableStep, TraceEvent};

#[derive(Clone, Debug)]
pub struct SmartConfig {
    pub evidence_closed: bool,
    /// Fail if |S| ever exceeds this.
    pub prefix_bound: Option<usize>,
}

impl Default for SmartConfig {
    fn default() -> Self {
        SmartConfig { evidence_closed: true, prefix_bound: None }
    }
}

pub fn learn_smart<T: SmartTeacher>(teacher: &mut T, alphabet: &Alphabet, config: &SmartConfig) -> Result<LearnResult, LearnError> {
    learn_smart_observed(teacher, alphabet, config, &mut |_| {})
}

/// Caches membership answers per logical word and counts real queries.
struct Memo<'t, T> {
    teacher: &'t mut T,
    cache: HashMap<LogicalWord, (ResetLogicalWord, Verdict)>,
    queries: u64,
}

impl<T: SmartTeacher> Memo<'_, T> {
    fn query(&mut self, w: &LogicalWord) -> (ResetLogicalWord, Verdict) {
        if let Some(hit) = self.cache.get(w) {
            return hit.clone();
        }
        self.queries += 1;
        let answer = self.teacher.membership(w);
        self.cache.insert(w.clone(), answer.clone());
        answer
    }
}

pub fn learn_smart_observed<T: SmartTeacher>(
    teacher: &mut T,
    alphabet: &Alphabet,
    config: &SmartConfig,
    observe: &mut dyn FnMut(TraceEvent<'_>),
) -> Result<LearnResult, LearnError> {
    let started = Instant::now();
    let mut memo = Memo { teacher, cache: HashMap::new(), queries: 0 };
    let mut equivalence = 0u64;
    let mut table = ObservationTable::init_smart(alphabet.clone(), &mut |w: &LogicalWord| memo.query(w))?;
    observe(TraceEvent::Table { step: TableStep::Initial, table: &table });
    loop {
        loop {
            let mut changed = false;
            if let Some(r) = table.find_closed_defect() {
                table.make_closed(&r, &mut |w: &LogicalWord| memo.query(w))?;
                observe(TraceEvent::Table { step: TableStep::Closed, table: &table });
                changed = true;
            }
            if let Some((action, suffix)) = table.find_consistency_defect() {
                table.make_consistent(action, &suffix, &mut |w: &LogicalWord| memo.query(w))?;
                observe(TraceEvent::Table { step: TableStep::Consistent, table: &table });
                changed = true;
            }
            if config.evidence_closed && table.find_evidence_defect().is_some() {
                table.make_evidence_closed(&mut |w: &LogicalWord| memo.query(w))?;
                observe(TraceEvent::Table { step: TableStep::EvidenceClosed, table: &table });
                changed = true;
            }
            if let Some(bound) = config.prefix_bound {
                if table.s().len() > bound {
                    return Err(LearnError::PrefixBound { size: table.s().len(), bound });
                }
            }
            if !changed {
                break;
            }
        }
        table.check_invariants()?;
        let hypothesis = build_hypothesis(&build_dfa(&table)?)?;
        observe(TraceEvent::Hypothesis { table: &table, hypothesis: &hypothesis });
        let answer = memo.teacher.equivalence(&hypothesis)?;
        equivalence += 1;
        match answer {
            EquivResult::Equivalent => {
                let stats = LearnStats {
                    membership_count: memo.queries,
                    equivalence_count: equivalence,
                    table_rows: table.len_rows(),
                    table_columns: table.e().len(),
                    wall_time: started.elapsed(),
                    normal: None,
                };
                return Ok(LearnResult { hypothesis, table, stats });
            }
            EquivResult::Counterexample { word, .. } => {
                let before = table.len_rows();
                table.process_counterexample(&word, &mut |w: &LogicalWord| memo.query(w))?;
                if table.len_rows() == before {
                    return Err(LearnError::NoProgress);
                }
                observe(TraceEvent::Table { step: TableStep::Counterexample, table: &table });
            }
        }
    }
}
