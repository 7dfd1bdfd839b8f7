//! Timed words: delay, logical, and their reset-annotated forms.
//!
//! All four word types order canonically: shorter words first, then
//! pointwise by (action index, time, reset) with `false < true`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::alphabet::{Action, Alphabet};
use crate::time::TimeValue;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TimedAction {
    pub action: Action,
    pub time: TimeValue,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ResetAction {
    pub action: Action,
    pub time: TimeValue,
    pub reset: bool,
}

impl TimedAction {
    pub fn new(action: Action, time: TimeValue) -> Self {
        TimedAction { action, time }
    }

    pub fn with_reset(self, reset: bool) -> ResetAction {
        ResetAction { action: self.action, time: self.time, reset }
    }
}

impl ResetAction {
    pub fn new(action: Action, time: TimeValue, reset: bool) -> Self {
        ResetAction { action, time, reset }
    }

    pub fn without_reset(&self) -> TimedAction {
        TimedAction { action: self.action, time: self.time }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("negative delay at position {0}")]
    NegativeDelay(usize),
}

macro_rules! word_type {
    ($(#[$meta:meta])* $name:ident, $elem:ty) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, Default)]
        pub struct $name(Vec<$elem>);

        impl $name {
            pub fn new(items: Vec<$elem>) -> Self {
                $name(items)
            }

            pub fn empty() -> Self {
                $name(Vec::new())
            }

            pub fn push(&mut self, item: $elem) {
                self.0.push(item);
            }

            pub fn pushed(&self, item: $elem) -> Self {
                let mut v = self.0.clone();
                v.push(item);
                $name(v)
            }

            pub fn prefix(&self, n: usize) -> Self {
                $name(self.0[..n].to_vec())
            }

            /// All prefixes, shortest first, including ε and the word itself.
            pub fn prefixes(&self) -> impl Iterator<Item = Self> + '_ {
                (0..=self.0.len()).map(move |n| self.prefix(n))
            }

            pub fn concat(&self, other: &Self) -> Self {
                let mut v = self.0.clone();
                v.extend_from_slice(&other.0);
                $name(v)
            }

            pub fn last(&self) -> Option<&$elem> {
                self.0.last()
            }

            pub fn into_vec(self) -> Vec<$elem> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [$elem];
            fn deref(&self) -> &[$elem] {
                &self.0
            }
        }

        impl FromIterator<$elem> for $name {
            fn from_iter<I: IntoIterator<Item = $elem>>(iter: I) -> Self {
                $name(iter.into_iter().collect())
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "ε");
                }
                for item in &self.0 {
                    write!(f, "{}", DebugItem(item))?;
                }
                Ok(())
            }
        }
    };
}

word_type!(
    /// A sequence of (action, delay) pairs.
    DelayWord,
    TimedAction
);
word_type!(
    /// A sequence of (action, clock value) pairs.
    LogicalWord,
    TimedAction
);
word_type!(
    /// A delay word annotated with resets.
    ResetDelayWord,
    ResetAction
);
word_type!(
    /// A logical word annotated with resets.
    ResetLogicalWord,
    ResetAction
);

struct DebugItem<'a, T>(&'a T);

impl fmt::Display for DebugItem<'_, TimedAction> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(#{},{})", self.0.action.0, self.0.time)
    }
}

impl fmt::Display for DebugItem<'_, ResetAction> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(#{},{},{})", self.0.action.0, self.0.time, if self.0.reset { 'R' } else { 'N' })
    }
}

fn strip(items: &[ResetAction]) -> Vec<TimedAction> {
    items.iter().map(ResetAction::without_reset).collect()
}

fn annotate(items: &[TimedAction], resets: &[bool]) -> Vec<ResetAction> {
    assert_eq!(items.len(), resets.len(), "reset vector length mismatch");
    items.iter().zip(resets).map(|(t, &r)| t.with_reset(r)).collect()
}

impl DelayWord {
    pub fn with_resets(&self, resets: &[bool]) -> ResetDelayWord {
        ResetDelayWord(annotate(&self.0, resets))
    }
}

impl LogicalWord {
    pub fn with_resets(&self, resets: &[bool]) -> ResetLogicalWord {
        ResetLogicalWord(annotate(&self.0, resets))
    }
}

impl ResetDelayWord {
    /// Π₁,₂: drop the resets.
    pub fn delay_word(&self) -> DelayWord {
        DelayWord(strip(&self.0))
    }

    pub fn resets(&self) -> Vec<bool> {
        self.0.iter().map(|x| x.reset).collect()
    }

    /// Γ: convert delays into clock values, following the resets.
    pub fn to_logical(&self) -> ResetLogicalWord {
        let mut out = Vec::with_capacity(self.0.len());
        let mut prev: Option<&ResetAction> = None;
        let mut prev_mu = TimeValue::ZERO;
        for item in &self.0 {
            let mu = match prev {
                Some(p) if !p.reset => prev_mu + item.time,
                _ => item.time,
            };
            out.push(ResetAction { action: item.action, time: mu, reset: item.reset });
            prev = Some(item);
            prev_mu = mu;
        }
        ResetLogicalWord(out)
    }
}

impl ResetLogicalWord {
    /// Π₁,₂: drop the resets.
    pub fn logical_word(&self) -> LogicalWord {
        LogicalWord(strip(&self.0))
    }

    pub fn resets(&self) -> Vec<bool> {
        self.0.iter().map(|x| x.reset).collect()
    }

    /// First position `i` with `μ_i < μ_{i-1}` while the previous action did not reset.
    pub fn first_invalid(&self) -> Option<usize> {
        (1..self.0.len()).find(|&i| !self.0[i - 1].reset && self.0[i].time < self.0[i - 1].time)
    }

    pub fn is_valid(&self) -> bool {
        self.first_invalid().is_none()
    }

    /// Γ⁻¹: recover delays from clock values.
    pub fn to_delay(&self) -> Result<ResetDelayWord, WordError> {
        let mut out = Vec::with_capacity(self.0.len());
        for (i, item) in self.0.iter().enumerate() {
            let t = if i == 0 || self.0[i - 1].reset { item.time } else { item.time.checked_sub(self.0[i - 1].time).ok_or(WordError::NegativeDelay(i))? };
            out.push(ResetAction { action: item.action, time: t, reset: item.reset });
        }
        Ok(ResetDelayWord(out))
    }

    /// g: replace every fractional value by its floor plus 1/10.
    pub fn normalize(&self) -> ResetLogicalWord {
        ResetLogicalWord(self.0.iter().map(|x| ResetAction { action: x.action, time: x.time.normalized(), reset: x.reset }).collect())
    }

    pub fn is_normalized(&self) -> bool {
        self.0.iter().all(|x| x.time.normalized() == x.time)
    }
}

/// The four textual word kinds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WordKind {
    Delay,
    Logical,
    ResetDelay,
    ResetLogical,
}

impl WordKind {
    pub fn has_resets(self) -> bool {
        matches!(self, WordKind::ResetDelay | WordKind::ResetLogical)
    }
}

impl std::str::FromStr for WordKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "delay" => Ok(WordKind::Delay),
            "logical" => Ok(WordKind::Logical),
            "reset-delay" => Ok(WordKind::ResetDelay),
            "reset-logical" => Ok(WordKind::ResetLogical),
            _ => Err(format!("unknown word kind `{s}`")),
        }
    }
}

/// A parsed word of any kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyWord {
    Delay(DelayWord),
    Logical(LogicalWord),
    ResetDelay(ResetDelayWord),
    ResetLogical(ResetLogicalWord),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("word parse error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("reset field {0} for this word kind")]
    KindMismatch(&'static str),
}

/// Parse `(a,1.1)(b,0.9)` or `(a,0,R)(a,1.1,N)` style words.
pub fn parse_word(text: &str, kind: WordKind, alphabet: &Alphabet) -> Result<AnyWord, WordParseError> {
    let syntax = |offset: usize, message: &str| WordParseError::Syntax { offset, message: message.to_string() };
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut items: Vec<(TimedAction, Option<bool>)> = Vec::new();
    skip_ws(&mut pos);
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(syntax(pos, "expected '('"));
        }
        let close = text[pos..].find(')').map(|i| pos + i).ok_or_else(|| syntax(pos, "unclosed '('"))?;
        let inner = &text[pos + 1..close];
        let fields: Vec<&str> = inner.split(',').collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(syntax(pos + 1, "expected 2 or 3 fields"));
        }
        let name = fields[0].trim();
        let action = alphabet.lookup(name).ok_or_else(|| WordParseError::UnknownAction(name.to_string()))?;
        let time_offset = pos + 1 + fields[0].len() + 1;
        let time: TimeValue = fields[1].trim().parse().map_err(|e: crate::time::TimeError| syntax(time_offset, &e.to_string()))?;
        let reset = match fields.get(2).map(|s| s.trim()) {
            None => None,
            Some("R") => Some(true),
            Some("N") => Some(false),
            Some(_) => return Err(syntax(time_offset + fields[1].len() + 1, "expected 'R' or 'N'")),
        };
        items.push((TimedAction { action, time }, reset));
        pos = close + 1;
        skip_ws(&mut pos);
    }
    let with_resets = kind.has_resets();
    if items.iter().any(|(_, r)| r.is_some() != with_resets) {
        return Err(WordParseError::KindMismatch(if with_resets { "missing" } else { "not allowed" }));
    }
    let plain: Vec<TimedAction> = items.iter().map(|(t, _)| *t).collect();
    let reset: Vec<ResetAction> = items.iter().map(|(t, r)| t.with_reset(r.unwrap_or(false))).collect();
    Ok(match kind {
        WordKind::Delay => AnyWord::Delay(DelayWord(plain)),
        WordKind::Logical => AnyWord::Logical(LogicalWord(plain)),
        WordKind::ResetDelay => AnyWord::ResetDelay(ResetDelayWord(reset)),
        WordKind::ResetLogical => AnyWord::ResetLogical(ResetLogicalWord(reset)),
    })
}

/// Textual form of a word over `alphabet`, the inverse of [`parse_word`].
pub trait WordText {
    fn to_text(&self, alphabet: &Alphabet) -> String;
}

impl WordText for [TimedAction] {
    fn to_text(&self, alphabet: &Alphabet) -> String {
        self.iter().map(|x| format!("({},{})", alphabet.name(x.action), x.time)).collect()
    }
}

impl WordText for [ResetAction] {
    fn to_text(&self, alphabet: &Alphabet) -> String {
        self.iter().map(|x| format!("({},{},{})", alphabet.name(x.action), x.time, if x.reset { 'R' } else { 'N' })).collect()
    }
}

impl WordText for AnyWord {
    fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            AnyWord::Delay(w) => w.to_text(alphabet),
            AnyWord::Logical(w) => w.to_text(alphabet),
            AnyWord::ResetDelay(w) => w.to_text(alphabet),
            AnyWord::ResetLogical(w) => w.to_text(alphabet),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn rl(s: &str) -> ResetLogicalWord {
        match parse_word(s, WordKind::ResetLogical, &ab()).unwrap() {
            AnyWord::ResetLogical(w) => w,
            _ => unreachable!(),
        }
    }

    fn rd(s: &str) -> ResetDelayWord {
        match parse_word(s, WordKind::ResetDelay, &ab()).unwrap() {
            AnyWord::ResetDelay(w) => w,
            _ => unreachable!(),
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(rd("(a,1.1,N)(b,0.9,R)").to_logical(), rl("(a,1.1,N)(b,2,R)"));
        assert_eq!(rd("(b,0.4,N)").to_logical(), rl("(b,0.4,N)"));
        assert_eq!(rd("(a,1,R)(a,2,N)(a,3,N)").to_logical(), rl("(a,1,R)(a,2,N)(a,5,N)"));
    }

    #[test]
    fn gamma_inverse_examples() {
        assert_eq!(rl("(a,1.1,N)(b,2,R)").to_delay().unwrap(), rd("(a,1.1,N)(b,0.9,R)"));
        assert_eq!(ResetLogicalWord::empty().to_delay().unwrap(), ResetDelayWord::empty());
        assert_eq!(rl("(a,1,R)(a,2,N)(a,5,N)").to_delay().unwrap(), rd("(a,1,R)(a,2,N)(a,3,N)"));
        assert_eq!(rl("(a,1.1,N)(b,0.5,R)").to_delay(), Err(WordError::NegativeDelay(1)));
        assert_eq!(rl("(a,1.1,N)(b,0.5,R)").first_invalid(), Some(1));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(rl("(a,0,R)(a,1.3,R)").normalize(), rl("(a,0,R)(a,1.1,R)"));
        assert_eq!(rl("(a,0,R)(b,3,N)").normalize(), rl("(a,0,R)(b,3,N)"));
        assert_eq!(rl("(b,2.75,N)").normalize(), rl("(b,2.1,N)"));
    }

    #[test]
    fn parsing_kinds() {
        let a = ab();
        match parse_word("(a,1.1)(b,0.9)", WordKind::Delay, &a).unwrap() {
            AnyWord::Delay(w) => assert_eq!(w.len(), 2),
            other => panic!("{other:?}"),
        }
        for kind in [WordKind::Delay, WordKind::Logical, WordKind::ResetDelay, WordKind::ResetLogical] {
            assert_eq!(parse_word("", kind, &a).unwrap().to_text(&a), "");
        }
        assert_eq!(rl("(a,0,R)(a,1.1,N)").resets(), vec![true, false]);
        assert!(matches!(parse_word("(a,1)", WordKind::ResetDelay, &a), Err(WordParseError::KindMismatch(_))));
        assert!(matches!(parse_word("(a,1,R)", WordKind::Delay, &a), Err(WordParseError::KindMismatch(_))));
        assert!(matches!(parse_word("(c,1)", WordKind::Delay, &a), Err(WordParseError::UnknownAction(_))));
        assert!(matches!(parse_word("(a,x)", WordKind::Delay, &a), Err(WordParseError::Syntax { offset: 3, .. })));
    }

    #[test]
    fn canonical_order() {
        let short = rl("(b,9,R)");
        let long = rl("(a,0,N)(a,0,N)");
        assert!(short < long);
        assert!(rl("(a,1,N)") < rl("(b,0,N)"));
        assert!(rl("(a,1,N)") < rl("(a,1.1,N)"));
        assert!(rl("(a,1,N)") < rl("(a,1,R)"));
    }
}
