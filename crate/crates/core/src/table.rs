//! Timed observation tables.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::automaton::Verdict;
use crate::time::TimeValue;
use crate::word::{LogicalWord, ResetAction, ResetDelayWord, ResetLogicalWord, TimedAction};

/// One table entry: a verdict plus whatever suffix resets are known.
///
/// With a smart teacher `resets` covers the whole suffix. With a normal
/// teacher it holds the guessed resets of all but the last suffix action.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cell {
    pub verdict: Verdict,
    pub resets: Vec<bool>,
}

impl Cell {
    pub fn new(verdict: Verdict, resets: Vec<bool>) -> Self {
        Cell { verdict, resets }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Entry {
    pub word: ResetLogicalWord,
    pub cells: Vec<Cell>,
}

/// Verdict vector of a prefix, indexed like E.
pub type Row = Vec<Verdict>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RowKey {
    Verdicts(Vec<Verdict>),
    WithResets(Vec<Cell>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Defect {
    NotClosed(ResetLogicalWord),
    /// The new suffix is `action · suffix`.
    NotConsistent {
        action: TimedAction,
        suffix: LogicalWord,
    },
    NotEvidenceClosed {
        prefix: ResetLogicalWord,
        suffix: LogicalWord,
    },
    NotReduced(ResetLogicalWord, ResetLogicalWord),
    NotPrefixClosed(ResetLogicalWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("unknown prefix {0}")]
    UnknownPrefix(String),
    #[error("table invariant violated: {0}")]
    InvariantViolation(String),
    #[error("suffix {0} is already in E")]
    DuplicateSuffix(String),
    #[error("prefix {0} is already in the table")]
    DuplicatePrefix(String),
    #[error("teacher resets for {0} disagree with the stored prefix")]
    ResetMismatch(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    S(usize),
    R(usize),
}

/// The table (S, R, E, f).
#[derive(Clone, Debug)]
pub struct ObservationTable {
    alphabet: Alphabet,
    s: Vec<Entry>,
    r: Vec<Entry>,
    e: Vec<LogicalWord>,
    index: HashMap<ResetLogicalWord, Slot>,
    by_logical: HashMap<LogicalWord, ResetLogicalWord>,
    resets_observed: bool,
}

/// Logical word of the cell (p, e): Π(p) · e.
pub fn cell_word(prefix: &ResetLogicalWord, suffix: &LogicalWord) -> LogicalWord {
    prefix.logical_word().concat(suffix)
}

impl ObservationTable {
    /// S = {ε}, E = {ε}, R = ∅. The ε cell must be filled with [`Self::set_epsilon`].
    /// `resets_observed` makes suffix resets part of row identity.
    pub fn new(alphabet: Alphabet, epsilon: Cell, resets_observed: bool) -> Self {
        let eps = ResetLogicalWord::empty();
        let mut index = HashMap::new();
        index.insert(eps.clone(), Slot::S(0));
        let mut by_logical = HashMap::new();
        by_logical.insert(LogicalWord::empty(), eps.clone());
        ObservationTable {
            alphabet,
            s: vec![Entry { word: eps, cells: vec![epsilon] }],
            r: Vec::new(),
            e: vec![LogicalWord::empty()],
            index,
            by_logical,
            resets_observed,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn s(&self) -> &[Entry] {
        &self.s
    }

    pub fn r(&self) -> &[Entry] {
        &self.r
    }

    pub fn e(&self) -> &[LogicalWord] {
        &self.e
    }

    pub fn resets_observed(&self) -> bool {
        self.resets_observed
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.s.iter().chain(self.r.iter())
    }

    pub fn len_rows(&self) -> usize {
        self.s.len() + self.r.len()
    }

    pub fn contains(&self, p: &ResetLogicalWord) -> bool {
        self.index.contains_key(p)
    }

    pub fn in_s(&self, p: &ResetLogicalWord) -> bool {
        matches!(self.index.get(p), Some(Slot::S(_)))
    }

    /// The stored prefix with the given Π₁,₂, if any.
    pub fn by_logical(&self, w: &LogicalWord) -> Option<&ResetLogicalWord> {
        self.by_logical.get(w)
    }

    pub fn entry(&self, p: &ResetLogicalWord) -> Option<&Entry> {
        self.index.get(p).map(|slot| match *slot {
            Slot::S(i) => &self.s[i],
            Slot::R(i) => &self.r[i],
        })
    }

    pub fn row(&self, p: &ResetLogicalWord) -> Result<Row, TableError> {
        let entry = self.entry(p).ok_or_else(|| TableError::UnknownPrefix(self.show(p)))?;
        Ok(entry.cells.iter().map(|c| c.verdict).collect())
    }

    pub fn row_key(&self, entry: &Entry) -> RowKey {
        if self.resets_observed {
            RowKey::WithResets(entry.cells.clone())
        } else {
            RowKey::Verdicts(entry.cells.iter().map(|c| c.verdict).collect())
        }
    }

    pub fn cell(&self, p: &ResetLogicalWord, e_index: usize) -> Option<&Cell> {
        self.entry(p).and_then(|entry| entry.cells.get(e_index))
    }

    fn show(&self, p: &ResetLogicalWord) -> String {
        show_reset_logical(p, &self.alphabet)
    }

    /// Append `p` to R with its cells (one per suffix, in E order).
    pub fn push_r(&mut self, p: ResetLogicalWord, cells: Vec<Cell>) -> Result<(), TableError> {
        if self.index.contains_key(&p) {
            return Err(TableError::DuplicatePrefix(self.show(&p)));
        }
        if cells.len() != self.e.len() {
            return Err(TableError::InvariantViolation(format!("row {} has {} cells for {} suffixes", self.show(&p), cells.len(), self.e.len())));
        }
        self.index.insert(p.clone(), Slot::R(self.r.len()));
        self.by_logical.entry(p.logical_word()).or_insert_with(|| p.clone());
        self.r.push(Entry { word: p, cells });
        Ok(())
    }

    /// Move `p` from R to S; R keeps its relative order.
    pub fn move_to_s(&mut self, p: &ResetLogicalWord) -> Result<(), TableError> {
        let Some(Slot::R(i)) = self.index.get(p).copied() else {
            return Err(TableError::UnknownPrefix(self.show(p)));
        };
        let entry = self.r.remove(i);
        for (j, rest) in self.r.iter().enumerate().skip(i) {
            self.index.insert(rest.word.clone(), Slot::R(j));
        }
        self.index.insert(entry.word.clone(), Slot::S(self.s.len()));
        self.s.push(entry);
        Ok(())
    }

    /// Append a suffix to E with one cell per row, S rows first then R rows.
    pub fn push_e(&mut self, suffix: LogicalWord, cells: Vec<Cell>) -> Result<(), TableError> {
        if self.e.contains(&suffix) {
            return Err(TableError::DuplicateSuffix(show_logical(&suffix, &self.alphabet)));
        }
        if cells.len() != self.len_rows() {
            return Err(TableError::InvariantViolation("column length mismatch".into()));
        }
        self.e.push(suffix);
        for (entry, cell) in self.s.iter_mut().chain(self.r.iter_mut()).zip(cells) {
            entry.cells.push(cell);
        }
        Ok(())
    }

    /// Reduced, prefix-closed, disjoint S/R, ε present, every cell filled.
    pub fn check_invariants(&self) -> Result<(), TableError> {
        let viol = |m: String| Err(TableError::InvariantViolation(m));
        if self.s.first().map(|e| e.word.is_empty()) != Some(true) || self.e.first().map(|e| e.is_empty()) != Some(true) {
            return viol("ε missing from S or E".into());
        }
        let mut keys = HashSet::new();
        for entry in &self.s {
            if !keys.insert(self.row_key(entry)) {
                return viol(format!("not reduced at {}", self.show(&entry.word)));
            }
        }
        for entry in self.entries() {
            if entry.cells.len() != self.e.len() {
                return viol(format!("unfilled cells in row {}", self.show(&entry.word)));
            }
            if !entry.word.is_empty() && !self.index.contains_key(&entry.word.prefix(entry.word.len() - 1)) {
                return viol(format!("not prefix-closed at {}", self.show(&entry.word)));
            }
        }
        if self.index.len() != self.len_rows() {
            return viol("S and R overlap".into());
        }
        Ok(())
    }

    pub fn find_closed_defect(&self) -> Option<ResetLogicalWord> {
        let s_keys: HashSet<RowKey> = self.s.iter().map(|e| self.row_key(e)).collect();
        self.r.iter().filter(|e| !s_keys.contains(&self.row_key(e))).map(|e| &e.word).min().cloned()
    }

    /// Smallest (canonically) new suffix `σ·e` witnessing an inconsistency.
    pub fn find_consistency_defect(&self) -> Option<(TimedAction, LogicalWord)> {
        // Children of every stored prefix, grouped by parent row.
        let mut groups: HashMap<RowKey, Vec<&Entry>> = HashMap::new();
        for entry in self.entries() {
            groups.entry(self.row_key(entry)).or_default().push(entry);
        }
        let mut children: HashMap<&[ResetAction], Vec<&Entry>> = HashMap::new();
        for entry in self.entries() {
            if !entry.word.is_empty() {
                children.entry(&entry.word[..entry.word.len() - 1]).or_default().push(entry);
            }
        }
        let mut best: Option<(TimedAction, LogicalWord)> = None;
        let mut consider = |cand: (TimedAction, LogicalWord)| {
            let word = LogicalWord::new(vec![cand.0]).concat(&cand.1);
            let better = match &best {
                None => true,
                Some(b) => word < LogicalWord::new(vec![b.0]).concat(&b.1),
            };
            if better {
                best = Some(cand);
            }
        };
        for members in groups.values() {
            let mut by_action: HashMap<TimedAction, Vec<&Entry>> = HashMap::new();
            for parent in members {
                for child in children.get(&parent.word[..]).map(Vec::as_slice).unwrap_or(&[]) {
                    by_action.entry(child.word.last().unwrap().without_reset()).or_default().push(child);
                }
            }
            for (action, kids) in by_action {
                let first = kids[0];
                for other in &kids[1..] {
                    for (j, (a, b)) in first.cells.iter().zip(&other.cells).enumerate() {
                        let differs = if self.resets_observed { a != b } else { a.verdict != b.verdict };
                        if differs {
                            consider((action, self.e[j].clone()));
                        }
                    }
                    if self.resets_observed && first.word.last().unwrap().reset != other.word.last().unwrap().reset {
                        consider((action, LogicalWord::empty()));
                    }
                }
            }
        }
        best
    }

    /// Evidence words π(Π s·e) for every s ∈ S, e ∈ E, as far as resets are known.
    /// The returned resets have length |s|+|e| with a smart teacher, one less otherwise.
    pub fn evidence_words(&self) -> Vec<(ResetLogicalWord, LogicalWord, Vec<bool>)> {
        let mut out = Vec::new();
        for entry in &self.s {
            for (j, suffix) in self.e.iter().enumerate() {
                let mut resets = entry.word.resets();
                resets.extend_from_slice(&entry.cells[j].resets);
                out.push((entry.word.clone(), suffix.clone(), resets));
            }
        }
        out
    }

    /// First (s, e) whose evidence word is missing, for fully known resets.
    pub fn find_evidence_defect(&self) -> Option<(ResetLogicalWord, LogicalWord)> {
        let mut best: Option<(ResetLogicalWord, (ResetLogicalWord, LogicalWord))> = None;
        for (s, e, resets) in self.evidence_words() {
            let word = cell_word(&s, &e);
            if resets.len() != word.len() {
                continue;
            }
            let full = word.with_resets(&resets);
            if !self.index.contains_key(&full) && best.as_ref().is_none_or(|(b, _)| full < *b) {
                best = Some((full, (s, e)));
            }
        }
        best.map(|(_, d)| d)
    }

    /// The first defect in the order closed, consistent, evidence-closed.
    pub fn find_defect(&self, evidence: bool) -> Result<Option<Defect>, TableError> {
        self.check_invariants()?;
        if let Some(r) = self.find_closed_defect() {
            return Ok(Some(Defect::NotClosed(r)));
        }
        if let Some((action, suffix)) = self.find_consistency_defect() {
            return Ok(Some(Defect::NotConsistent { action, suffix }));
        }
        if evidence {
            if let Some((prefix, suffix)) = self.find_evidence_defect() {
                return Ok(Some(Defect::NotEvidenceClosed { prefix, suffix }));
            }
        }
        Ok(None)
    }

    pub fn is_closed(&self) -> bool {
        self.find_closed_defect().is_none()
    }

    pub fn is_consistent(&self) -> bool {
        self.find_consistency_defect().is_none()
    }

    pub fn is_evidence_closed(&self) -> bool {
        self.find_evidence_defect().is_none()
    }

    pub fn is_reduced(&self) -> bool {
        let keys: HashSet<RowKey> = self.s.iter().map(|e| self.row_key(e)).collect();
        keys.len() == self.s.len()
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.entries().all(|e| e.word.is_empty() || self.index.contains_key(&e.word.prefix(e.word.len() - 1)))
    }

    /// Aligned text rendering: prefixes down, suffixes across, S above R.
    pub fn dump(&self) -> String {
        let heads: Vec<String> = self.e.iter().map(|e| show_logical(e, &self.alphabet)).collect();
        let names: Vec<String> = self.entries().map(|e| show_reset_logical(&e.word, &self.alphabet)).collect();
        let w0 = names.iter().map(|n| n.chars().count()).max().unwrap_or(1);
        let widths: Vec<usize> = heads.iter().map(|h| h.chars().count().max(1)).collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
        let mut out = String::new();
        let mut line = pad("", w0);
        for (h, w) in heads.iter().zip(&widths) {
            let _ = write!(line, " | {}", pad(h, *w));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        let rule = |out: &mut String| {
            let mut r = "-".repeat(w0);
            for w in &widths {
                r.push_str("-+-");
                r.push_str(&"-".repeat(*w));
            }
            out.push_str(&r);
            out.push('\n');
        };
        rule(&mut out);
        for (i, entry) in self.entries().enumerate() {
            if i == self.s.len() {
                rule(&mut out);
            }
            let mut line = pad(&names[i], w0);
            for (c, w) in entry.cells.iter().zip(&widths) {
                let _ = write!(line, " | {}", pad(&c.verdict.symbol().to_string(), *w));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    // ---- repairs driven by a smart membership oracle ----

    fn smart_cell<Q>(prefix: &ResetLogicalWord, suffix: &LogicalWord, query: &mut Q) -> Result<Cell, TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let (w, v) = query(&cell_word(prefix, suffix));
        let resets = w.resets();
        if resets[..prefix.len()] != prefix.resets()[..] {
            return Err(TableError::ResetMismatch(format!("{prefix:?}")));
        }
        Ok(Cell::new(v, resets[prefix.len()..].to_vec()))
    }

    fn add_smart_row<Q>(&mut self, p: ResetLogicalWord, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let cells = self.e.iter().map(|e| Self::smart_cell(&p, e, query)).collect::<Result<Vec<_>, _>>()?;
        self.push_r(p, cells)
    }

    /// Fill a fresh table's ε cell and seed R with π((σ,0)) for every σ.
    pub fn init_smart<Q>(alphabet: Alphabet, query: &mut Q) -> Result<Self, TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let eps = Self::smart_cell(&ResetLogicalWord::empty(), &LogicalWord::empty(), query)?;
        let mut t = ObservationTable::new(alphabet, eps, true);
        t.extend_with_zero_successors(&ResetLogicalWord::empty(), query)?;
        Ok(t)
    }

    fn extend_with_zero_successors<Q>(&mut self, p: &ResetLogicalWord, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let actions: Vec<_> = self.alphabet.actions().collect();
        for a in actions {
            let (w, _) = query(&p.logical_word().pushed(TimedAction::new(a, TimeValue::ZERO)));
            if !self.index.contains_key(&w) {
                self.add_smart_row(w, query)?;
            }
        }
        Ok(())
    }

    pub fn make_closed<Q>(&mut self, r: &ResetLogicalWord, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        self.move_to_s(r)?;
        self.extend_with_zero_successors(r, query)
    }

    pub fn make_consistent<Q>(&mut self, action: TimedAction, suffix: &LogicalWord, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let new_suffix = LogicalWord::new(vec![action]).concat(suffix);
        let cells = self.entries().map(|p| Self::smart_cell(&p.word, &new_suffix, query)).collect::<Result<Vec<_>, _>>()?;
        self.push_e(new_suffix, cells)
    }

    pub fn make_evidence_closed<Q>(&mut self, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let mut words: Vec<ResetLogicalWord> = self.evidence_words().into_iter().map(|(s, e, resets)| cell_word(&s, &e).with_resets(&resets)).collect();
        words.sort();
        for w in words {
            for p in w.prefixes().skip(1) {
                if !self.index.contains_key(&p) {
                    self.add_smart_row(p, query)?;
                }
            }
        }
        Ok(())
    }

    /// Add every prefix of normalize(Γ(ctx)) that is not yet stored.
    pub fn process_counterexample<Q>(&mut self, ctx: &ResetDelayWord, query: &mut Q) -> Result<(), TableError>
    where
        Q: FnMut(&LogicalWord) -> (ResetLogicalWord, Verdict),
    {
        let word = ctx.to_logical().normalize();
        for p in word.prefixes().skip(1) {
            if !self.index.contains_key(&p) {
                self.add_smart_row(p, query)?;
            }
        }
        Ok(())
    }
}

pub fn show_reset_logical(w: &ResetLogicalWord, alphabet: &Alphabet) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|x| format!("({},{},{})", alphabet.name(x.action), x.time, if x.reset { '⊤' } else { '⊥' })).collect()
}

pub fn show_logical(w: &LogicalWord, alphabet: &Alphabet) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|x| format!("({},{})", alphabet.name(x.action), x.time)).collect()
}
