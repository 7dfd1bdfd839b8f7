use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Index of a symbol in its alphabet. Ordering follows alphabet order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Action(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
}

/// An ordered, duplicate-free list of action names.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '!' | '?')) && !s.chars().all(|c| c.is_ascii_digit())
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if !is_ident(s) {
                return Err(AlphabetError::InvalidSymbol(s.clone()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(AlphabetError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn actions(&self) -> impl Iterator<Item = Action> {
        (0..self.symbols.len()).map(Action)
    }

    pub fn lookup(&self, name: &str) -> Option<Action> {
        self.index.get(name).copied().map(Action)
    }

    pub fn name(&self, a: Action) -> &str {
        &self.symbols[a.0]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Same symbols regardless of order.
    pub fn same_symbols(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.symbols.iter().all(|s| other.index.contains_key(s))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}
