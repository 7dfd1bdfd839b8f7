//! Learning with a teacher that answers delay words only; resets are guessed.
//!
//! Every table instance carries one guess per reset the learner could not
//! observe. Instances wait in a frontier ordered by (guess count, insertion
//! index) and the cheapest one is always repaired next.

use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::time::Instant;

use crate::alphabet::Alphabet;
use crate::automaton::{Ota, StructuralKey, Verdict};
use crate::hypothesis::{build_dfa, build_hypothesis};
use crate::table::{cell_word, Cell, Defect, ObservationTable};
use crate::teacher::{EquivResult, NormalTeacher, Sign};
use crate::time::TimeValue;
use crate::word::{DelayWord, LogicalWord, ResetLogicalWord, TimedAction};

use super::{LearnError, LearnResult, LearnStats};

#[derive(Clone, Debug)]
pub struct NormalConfig {
    /// Must match the teacher's trick setting.
    pub trick: bool,
    pub evidence_closed: bool,
    pub max_explored: u64,
    pub max_resident: usize,
}

impl Default for NormalConfig {
    fn default() -> Self {
        NormalConfig { trick: true, evidence_closed: false, max_explored: 1_000_000, max_resident: 2_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalStats {
    pub explored_instances: u64,
    pub inserted_instances: u64,
    /// Guess combinations whose reset-logical word contradicts its own validity.
    pub discarded_invalid: u64,
    /// Guesses that clash with a stored prefix equal under Π₁,₂.
    pub discarded_duplicate: u64,
    /// Tables whose hypothesis construction failed.
    pub discarded_partition: u64,
    /// Inconsistencies whose repair suffix is already in E.
    pub discarded_conflict: u64,
    /// Counterexamples that added nothing to the table.
    pub discarded_stalled: u64,
    /// Instances equal to one inserted before, up to row order.
    pub discarded_repeat: u64,
    pub cache_hits: u64,
}

impl NormalStats {
    pub fn discarded_instances(&self) -> u64 {
        self.discarded_invalid + self.discarded_duplicate + self.discarded_partition + self.discarded_conflict + self.discarded_stalled + self.discarded_repeat
    }
}

struct Instance {
    table: ObservationTable,
    guesses: u64,
    id: u64,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        (self.guesses, self.id) == (other.guesses, other.id)
    }
}

impl Eq for Instance {}

impl PartialOrd for Instance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Instance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.guesses, self.id).cmp(&(other.guesses, other.id))
    }
}

/// A table under construction together with the guesses it took.
#[derive(Clone)]
struct Partial {
    table: ObservationTable,
    guesses: u64,
}

struct Learner<'t, T> {
    teacher: &'t mut T,
    config: NormalConfig,
    cache: HashMap<DelayWord, Verdict>,
    equiv_cache: HashMap<StructuralKey, EquivResult<DelayWord>>,
    queries: u64,
    equivalence: u64,
    stats: NormalStats,
    frontier: BinaryHeap<Reverse<Instance>>,
    next_id: u64,
    overflow: bool,
    counterexamples: Vec<(DelayWord, bool)>,
    seen: HashSet<u64>,
}

impl<T: NormalTeacher> Learner<'_, T> {
    fn query(&mut self, w: DelayWord) -> Verdict {
        if let Some(&v) = self.cache.get(&w) {
            self.stats.cache_hits += 1;
            return v;
        }
        self.queries += 1;
        let v = self.teacher.membership(&w);
        self.cache.insert(w, v);
        v
    }

    fn stopped_verdict(&self) -> Verdict {
        if self.config.trick {
            Verdict::Invalid
        } else {
            Verdict::Reject
        }
    }

    /// Verdict of a reset-logical word whose first `known` resets are fixed.
    /// `None` when the guesses contradict the word's own validity: after the
    /// first invalid position every reset must be true.
    fn evaluate(&mut self, word: &ResetLogicalWord, known: usize) -> Option<Verdict> {
        match word.first_invalid() {
            Some(k) => {
                if word[k..known.max(k)].iter().any(|x| !x.reset) {
                    None
                } else {
                    Some(self.stopped_verdict())
                }
            }
            None => Some(self.query(word.to_delay().expect("valid word").delay_word())),
        }
    }

    /// The possible cells of (prefix, suffix), each with its guess count.
    /// Resets along a stored row of `table` are taken from that row, not guessed.
    fn cell_options(&mut self, table: &ObservationTable, prefix: &ResetLogicalWord, prefix_verdict: Verdict, suffix: &LogicalWord) -> Vec<(Cell, u64)> {
        if suffix.is_empty() {
            return vec![(Cell::new(prefix_verdict, Vec::new()), 0)];
        }
        let len = suffix.len() - 1;
        if self.config.trick && prefix_verdict == Verdict::Invalid {
            return vec![(Cell::new(Verdict::Invalid, vec![true; len]), 0)];
        }
        let logical = cell_word(prefix, suffix);
        let known: Vec<Option<bool>> = (0..len)
            .map(|k| {
                let n = prefix.len() + k + 1;
                table.by_logical(&logical.prefix(n)).map(|row| row[n - 1].reset)
            })
            .collect();
        let free: Vec<usize> = (0..len).filter(|&k| known[k].is_none()).collect();
        let mut out: Vec<(Cell, u64)> = Vec::new();
        for bits in 0u64..(1 << free.len()) {
            let mut resets: Vec<bool> = known.iter().map(|k| k.unwrap_or(false)).collect();
            for (i, &k) in free.iter().enumerate() {
                resets[k] = bits >> (free.len() - 1 - i) & 1 == 1;
            }
            let mut full = prefix.resets();
            full.extend_from_slice(&resets);
            full.push(true);
            let word = logical.with_resets(&full);
            match self.evaluate(&word, prefix.len() + len) {
                None => self.stats.discarded_invalid += 1,
                Some(v) => {
                    let dup = !self.config.evidence_closed && out.iter().any(|(c, _)| c.verdict == v);
                    if !dup {
                        out.push((Cell::new(v, resets), free.len() as u64));
                    }
                }
            }
        }
        out
    }

    /// Cartesian product of per-cell options, or `None` past the resident cap.
    fn product(&mut self, acc: Vec<(Vec<Cell>, u64)>, options: &[(Cell, u64)]) -> Vec<(Vec<Cell>, u64)> {
        if acc.len() * options.len() > self.config.max_resident {
            self.overflow = true;
            return Vec::new();
        }
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for (cells, g) in &acc {
            for (c, h) in options {
                let mut cells = cells.clone();
                cells.push(c.clone());
                next.push((cells, g + h));
            }
        }
        next
    }

    fn row_variants(&mut self, table: &ObservationTable, prefix: &ResetLogicalWord, verdict: Verdict) -> Vec<(Vec<Cell>, u64)> {
        let mut acc: Vec<(Vec<Cell>, u64)> = vec![(vec![Cell::new(verdict, Vec::new())], 0)];
        for suffix in &table.e()[1..] {
            let options = self.cell_options(table, prefix, verdict, suffix);
            acc = self.product(acc, &options);
        }
        acc
    }

    /// Add `parent · action` to R in every way the last reset and the cells can be guessed.
    /// Returns each variant with the row actually stored (or already present).
    fn add_row(&mut self, partial: &Partial, parent: &ResetLogicalWord, action: TimedAction) -> Vec<(Partial, ResetLogicalWord)> {
        let logical = parent.logical_word().pushed(action);
        if let Some(existing) = partial.table.by_logical(&logical) {
            if existing[..parent.len()] == parent[..] {
                return vec![(partial.clone(), existing.clone())];
            }
            self.stats.discarded_duplicate += 1;
            return Vec::new();
        }
        let parent_verdict = partial.table.entry(parent).expect("parent stored").cells[0].verdict;
        let base = parent.pushed(action.with_reset(true));
        let (verdict, forced) = if self.config.trick && parent_verdict == Verdict::Invalid {
            (Verdict::Invalid, true)
        } else {
            match self.evaluate(&base, parent.len()) {
                None => {
                    self.stats.discarded_invalid += 1;
                    return Vec::new();
                }
                Some(v) => (v, base.first_invalid().is_some() || (self.config.trick && v == Verdict::Invalid)),
            }
        };
        let choices: &[bool] = if forced { &[true] } else { &[false, true] };
        let mut out = Vec::new();
        for &reset in choices {
            let word = parent.pushed(action.with_reset(reset));
            if !agrees_with_cells(&partial.table, &word) {
                self.stats.discarded_duplicate += 1;
                continue;
            }
            for (cells, g) in self.row_variants(&partial.table, &word, verdict) {
                let mut table = partial.table.clone();
                table.push_r(word.clone(), cells).expect("fresh prefix");
                out.push((Partial { table, guesses: partial.guesses + g + u64::from(!forced) }, word.clone()));
            }
        }
        out
    }

    fn add_column(&mut self, partial: &Partial, suffix: &LogicalWord) -> Vec<Partial> {
        let rows: Vec<(ResetLogicalWord, Verdict)> = partial.table.entries().map(|e| (e.word.clone(), e.cells[0].verdict)).collect();
        let mut acc: Vec<(Vec<Cell>, u64)> = vec![(Vec::new(), 0)];
        for (word, verdict) in &rows {
            let options = self.cell_options(&partial.table, word, *verdict, suffix);
            acc = self.product(acc, &options);
        }
        acc.into_iter()
            .map(|(cells, g)| {
                let mut table = partial.table.clone();
                table.push_e(suffix.clone(), cells).expect("fresh suffix");
                Partial { table, guesses: partial.guesses + g }
            })
            .collect()
    }

    fn push(&mut self, partials: Vec<Partial>) -> Result<(), LearnError> {
        for p in partials {
            if !self.seen.insert(fingerprint(&p.table)) {
                self.stats.discarded_repeat += 1;
                continue;
            }
            self.frontier.push(Reverse(Instance { table: p.table, guesses: p.guesses, id: self.next_id }));
            self.next_id += 1;
            self.stats.inserted_instances += 1;
        }
        if self.frontier.len() > self.config.max_resident {
            return Err(LearnError::ResourceLimit(format!("more than {} resident table instances", self.config.max_resident)));
        }
        Ok(())
    }

    fn close(&mut self, inst: Partial, r: &ResetLogicalWord) -> Vec<Partial> {
        let mut partial = inst;
        partial.table.move_to_s(r).expect("row in R");
        let mut states = vec![partial];
        let actions: Vec<_> = partial_actions(&states[0].table);
        for a in actions {
            let mut next = Vec::new();
            for p in &states {
                next.extend(self.add_row(p, r, TimedAction::new(a, TimeValue::ZERO)).into_iter().map(|(p, _)| p));
            }
            states = next;
        }
        states
    }

    fn evidence(&mut self, inst: Partial) -> Vec<Partial> {
        let mut states = vec![inst];
        let words = states[0].table.evidence_words();
        for (s, e, known) in words {
            let logical = cell_word(&s, &e);
            let mut next = Vec::new();
            for p in &states {
                // Walk the evidence word, reusing stored prefixes.
                let mut branch = vec![(p.clone(), ResetLogicalWord::empty())];
                for (i, item) in logical.iter().enumerate() {
                    let mut grown = Vec::new();
                    for (bp, prefix) in branch {
                        for (np, word) in self.add_row(&bp, &prefix, *item) {
                            if i < known.len() && word[i].reset != known[i] {
                                self.stats.discarded_duplicate += 1;
                                continue;
                            }
                            grown.push((np, word));
                        }
                    }
                    branch = grown;
                }
                next.extend(branch.into_iter().map(|(p, _)| p));
            }
            states = next;
        }
        states
    }

    fn counterexample(&mut self, inst: Partial, ctx: &DelayWord) -> Vec<Partial> {
        // (partial, stored prefix, raw clock value of the last action)
        let mut states = vec![(inst, ResetLogicalWord::empty(), TimeValue::ZERO)];
        for item in ctx.iter() {
            let mut next = Vec::new();
            for (p, prefix, raw_prev) in states {
                let raw = match prefix.last() {
                    Some(last) if !last.reset => raw_prev + item.time,
                    _ => item.time,
                };
                let action = TimedAction::new(item.action, raw.normalized());
                for (np, word) in self.add_row(&p, &prefix, action) {
                    next.push((np, word, raw));
                }
            }
            states = next;
        }
        states.into_iter().map(|(p, _, _)| p).collect()
    }

    /// Earlier counterexamples are tried before the teacher is asked.
    fn equivalence(&mut self, h: &Ota) -> Result<EquivResult<DelayWord>, LearnError> {
        let key = h.structural_key();
        if let Some(hit) = self.equiv_cache.get(&key) {
            self.stats.cache_hits += 1;
            return Ok(hit.clone());
        }
        for (word, accepted) in &self.counterexamples {
            if h.run_delay(word, false).1.is_accept() != *accepted {
                self.stats.cache_hits += 1;
                let sign = if *accepted { Sign::Positive } else { Sign::Negative };
                return Ok(EquivResult::Counterexample { word: word.clone(), sign });
            }
        }
        self.equivalence += 1;
        let answer = self.teacher.equivalence(h)?;
        if let EquivResult::Counterexample { word, sign } = &answer {
            self.counterexamples.push((word.clone(), *sign == Sign::Positive));
        }
        self.equiv_cache.insert(key, answer.clone());
        Ok(answer)
    }
}

/// Whether the guessed cell resets that run through the new row `word` agree with its resets.
fn agrees_with_cells(table: &ObservationTable, word: &ResetLogicalWord) -> bool {
    let n = word.len();
    let reset = word[n - 1].reset;
    for entry in table.entries() {
        let p = entry.word.len();
        if p >= n || word[..p].iter().zip(entry.word.iter()).any(|(a, b)| a.without_reset() != b.without_reset()) {
            continue;
        }
        for (suffix, cell) in table.e().iter().zip(&entry.cells) {
            // Guessed positions of this cell are p..p+|e|-1.
            if p + suffix.len() > n && suffix[..n - p].iter().zip(&word[p..]).all(|(a, b)| *a == b.without_reset()) && cell.resets[n - p - 1] != reset {
                return false;
            }
        }
    }
    true
}

/// Hash of a table's content, independent of the order rows were added in.
fn fingerprint(t: &ObservationTable) -> u64 {
    let mut rows: Vec<(bool, &ResetLogicalWord, &[Cell])> = t.entries().map(|e| (t.in_s(&e.word), &e.word, &e.cells[..])).collect();
    rows.sort();
    let mut h = DefaultHasher::new();
    t.e().hash(&mut h);
    rows.hash(&mut h);
    h.finish()
}

fn partial_actions(t: &ObservationTable) -> Vec<crate::alphabet::Action> {
    t.alphabet().actions().collect()
}

pub fn learn_normal<T: NormalTeacher>(teacher: &mut T, alphabet: &Alphabet, config: &NormalConfig) -> Result<LearnResult, LearnError> {
    let started = Instant::now();
    let mut l = Learner {
        teacher,
        config: config.clone(),
        cache: HashMap::new(),
        equiv_cache: HashMap::new(),
        queries: 0,
        equivalence: 0,
        stats: NormalStats::default(),
        frontier: BinaryHeap::new(),
        next_id: 0,
        overflow: false,
        counterexamples: Vec::new(),
        seen: HashSet::new(),
    };
    let eps = l.query(DelayWord::empty());
    let mut seeds = vec![Partial { table: ObservationTable::new(alphabet.clone(), Cell::new(eps, Vec::new()), false), guesses: 0 }];
    for a in alphabet.actions() {
        let mut next = Vec::new();
        for p in &seeds {
            next.extend(l.add_row(p, &ResetLogicalWord::empty(), TimedAction::new(a, TimeValue::ZERO)).into_iter().map(|(p, _)| p));
        }
        seeds = next;
    }
    l.push(seeds)?;
    while let Some(Reverse(inst)) = l.frontier.pop() {
        l.stats.explored_instances += 1;
        if l.stats.explored_instances > l.config.max_explored {
            return Err(LearnError::ResourceLimit(format!("explored more than {} table instances", l.config.max_explored)));
        }
        let partial = Partial { table: inst.table, guesses: inst.guesses };
        let defect = partial.table.find_defect(false)?;
        let defect = match defect {
            None if l.config.evidence_closed => missing_evidence(&partial.table),
            d => d,
        };
        let children = match defect {
            Some(Defect::NotClosed(r)) => l.close(partial, &r),
            Some(Defect::NotConsistent { action, suffix }) => {
                let new_suffix = LogicalWord::new(vec![action]).concat(&suffix);
                if partial.table.e().contains(&new_suffix) {
                    l.stats.discarded_conflict += 1;
                    continue;
                }
                l.add_column(&partial, &new_suffix)
            }
            Some(Defect::NotEvidenceClosed { .. }) => l.evidence(partial),
            Some(_) => unreachable!("invariant defects are reported as errors"),
            None => {
                let hypothesis = match build_dfa(&partial.table).and_then(|m| build_hypothesis(&m)) {
                    Ok(h) => h,
                    Err(_) => {
                        l.stats.discarded_partition += 1;
                        continue;
                    }
                };
                match l.equivalence(&hypothesis)? {
                    EquivResult::Equivalent => {
                        let stats = LearnStats {
                            membership_count: l.queries,
                            equivalence_count: l.equivalence,
                            table_rows: partial.table.len_rows(),
                            table_columns: partial.table.e().len(),
                            wall_time: started.elapsed(),
                            normal: Some(l.stats.clone()),
                        };
                        return Ok(LearnResult { hypothesis, table: partial.table, stats });
                    }
                    EquivResult::Counterexample { word, .. } => {
                        let before = partial.table.len_rows();
                        let children = l.counterexample(partial, &word);
                        let progressed: Vec<Partial> = children.into_iter().filter(|c| c.table.len_rows() > before).collect();
                        if progressed.is_empty() {
                            l.stats.discarded_stalled += 1;
                            continue;
                        }
                        progressed
                    }
                }
            }
        };
        if l.overflow {
            return Err(LearnError::ResourceLimit(format!("one repair spawned more than {} table instances", l.config.max_resident)));
        }
        l.push(children)?;
    }
    Err(LearnError::Exhausted)
}

fn missing_evidence(t: &ObservationTable) -> Option<Defect> {
    for (s, e, known) in t.evidence_words() {
        let logical = cell_word(&s, &e);
        let present = match t.by_logical(&logical) {
            Some(stored) => stored.resets()[..known.len()] == known[..],
            None => false,
        };
        if !present {
            return Some(Defect::NotEvidenceClosed { prefix: s, suffix: e });
        }
    }
    None
}
