//! Clock guards: intervals with natural endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::time::TimeValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuardError {
    #[error("guard parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("empty guard interval")]
    Empty,
    #[error("an unbounded guard must be open on the right")]
    ClosedInfinity,
}

/// An interval over the non-negative reals with natural (or infinite) endpoints.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Guard {
    lower: u64,
    lower_closed: bool,
    upper: Option<u64>,
    upper_closed: bool,
}

impl Guard {
    pub fn new(lower: u64, lower_closed: bool, upper: Option<u64>, upper_closed: bool) -> Result<Self, GuardError> {
        match upper {
            None if upper_closed => return Err(GuardError::ClosedInfinity),
            None => {}
            Some(u) if u < lower || (u == lower && !(lower_closed && upper_closed)) => return Err(GuardError::Empty),
            Some(_) => {}
        }
        Ok(Guard { lower, lower_closed, upper, upper_closed })
    }

    /// `[0, ∞)`
    pub fn full() -> Self {
        Guard { lower: 0, lower_closed: true, upper: None, upper_closed: false }
    }

    /// `[n, n]`
    pub fn point(n: u64) -> Self {
        Guard { lower: n, lower_closed: true, upper: Some(n), upper_closed: true }
    }

    pub fn lower(&self) -> u64 {
        self.lower
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper(&self) -> Option<u64> {
        self.upper
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn contains(&self, v: TimeValue) -> bool {
        let lo = TimeValue::from_int(self.lower);
        let above = if self.lower_closed { v >= lo } else { v > lo };
        let below = match self.upper {
            None => true,
            Some(u) => {
                let hi = TimeValue::from_int(u);
                if self.upper_closed {
                    v <= hi
                } else {
                    v < hi
                }
            }
        };
        above && below
    }

    /// Largest finite endpoint.
    pub fn max_constant(&self) -> u64 {
        self.upper.unwrap_or(self.lower).max(self.lower)
    }

    // Lower bound as a sortable key: closed before open at the same value.
    fn lower_key(&self) -> (u64, bool) {
        (self.lower, !self.lower_closed)
    }

    /// Whether `self` ends strictly before `other` begins, with nothing missing in between.
    fn meets(&self, other: &Guard) -> bool {
        match self.upper {
            None => false,
            Some(u) => u == other.lower && self.upper_closed != other.lower_closed,
        }
    }

    fn ends_before(&self, other: &Guard) -> bool {
        match self.upper {
            None => false,
            Some(u) => u < other.lower || (u == other.lower && !(self.upper_closed && other.lower_closed)),
        }
    }

    pub fn intersects(&self, other: &Guard) -> bool {
        let (a, b) = if self.lower_key() <= other.lower_key() { (self, other) } else { (other, self) };
        !a.ends_before(b)
    }

    /// Maximal intervals of `[0,∞)` not covered by `guards`, ordered by lower endpoint.
    /// The input guards must be pairwise disjoint.
    pub fn complement(guards: &[Guard]) -> Vec<Guard> {
        let mut sorted: Vec<Guard> = guards.to_vec();
        sorted.sort_by_key(|g| g.lower_key());
        let mut out = Vec::new();
        // Uncovered region starts at `cursor` (value, closed).
        let mut cursor: Option<(u64, bool)> = Some((0, true));
        for g in &sorted {
            let Some((c, c_closed)) = cursor else { break };
            let gap_exists = match c.cmp(&g.lower) {
                Ordering::Less => true,
                Ordering::Equal => c_closed && !g.lower_closed,
                Ordering::Greater => false,
            };
            if gap_exists {
                out.push(Guard { lower: c, lower_closed: c_closed, upper: Some(g.lower), upper_closed: !g.lower_closed });
            }
            cursor = g.upper.map(|u| (u, !g.upper_closed));
        }
        if let Some((c, c_closed)) = cursor {
            out.push(Guard { lower: c, lower_closed: c_closed, upper: None, upper_closed: false });
        }
        out
    }

    /// Whether `guards` are pairwise disjoint and their union is `[0,∞)`.
    pub fn is_partition(guards: &[Guard]) -> bool {
        let mut sorted: Vec<Guard> = guards.to_vec();
        sorted.sort_by_key(|g| g.lower_key());
        let Some(first) = sorted.first() else { return false };
        if first.lower != 0 || !first.lower_closed {
            return false;
        }
        for pair in sorted.windows(2) {
            if !pair[0].meets(&pair[1]) {
                return false;
            }
        }
        sorted.last().is_some_and(|g| g.upper.is_none())
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        match self.upper {
            None => write!(f, "{open}{},+)", self.lower),
            Some(u) => {
                let close = if self.upper_closed { ']' } else { ')' };
                write!(f, "{open}{},{u}{close}", self.lower)
            }
        }
    }
}

impl fmt::Debug for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Guard {
    type Err = GuardError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let err = |offset: usize, message: &str| GuardError::Parse { offset, message: message.to_string() };
        let mut pos = 0;
        let lower_closed = match bytes.first() {
            Some(b'[') => true,
            Some(b'(') => false,
            _ => return Err(err(0, "expected '[' or '('")),
        };
        pos += 1;
        let nat = |pos: &mut usize| -> Result<u64, GuardError> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(err(start, "expected a natural number"));
            }
            s[start..*pos].parse().map_err(|_| err(start, "number out of range"))
        };
        let lower = nat(&mut pos)?;
        if bytes.get(pos) != Some(&b',') {
            return Err(err(pos, "expected ','"));
        }
        pos += 1;
        let upper = if bytes.get(pos) == Some(&b'+') {
            pos += 1;
            None
        } else {
            Some(nat(&mut pos)?)
        };
        let upper_closed = match bytes.get(pos) {
            Some(b']') => true,
            Some(b')') => false,
            _ => return Err(err(pos, "expected ']' or ')'")),
        };
        pos += 1;
        if pos != bytes.len() {
            return Err(err(pos, "trailing input"));
        }
        Guard::new(lower, lower_closed, upper, upper_closed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Guard {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let a = g("(1,3)");
        assert_eq!((a.lower(), a.lower_closed(), a.upper(), a.upper_closed()), (1, false, Some(3), false));
        assert_eq!(g("[0,+)"), Guard::full());
        let b = g("[3,+)");
        assert!(b.lower_closed() && b.upper().is_none());
        for s in ["[0,1]", "(1,3)", "[3,+)", "(4,+)", "[2,2]"] {
            assert_eq!(g(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!("[0,+]".parse::<Guard>(), Err(GuardError::ClosedInfinity));
        assert_eq!("(2,2)".parse::<Guard>(), Err(GuardError::Empty));
        match "[1;2]".parse::<Guard>() {
            Err(GuardError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!("[1,2] ".parse::<Guard>(), Err(GuardError::Parse { offset: 5, .. })));
    }

    #[test]
    fn membership() {
        let t = |s: &str| s.parse::<TimeValue>().unwrap();
        assert!(g("(1,3)").contains(t("1.1")));
        assert!(!g("(1,3)").contains(t("1")));
        assert!(g("[2,4)").contains(t("2")));
        assert!(!g("[2,4)").contains(t("4")));
        assert!(g("[3,+)").contains(t("1000")));
    }

    #[test]
    fn complement_of_q0_a() {
        assert_eq!(Guard::complement(&[g("(1,3)")]), vec![g("[0,1]"), g("[3,+)")]);
        assert_eq!(Guard::complement(&[g("[2,4)")]), vec![g("[0,2)"), g("[4,+)")]);
        assert_eq!(Guard::complement(&[]), vec![Guard::full()]);
        assert!(Guard::complement(&[Guard::full()]).is_empty());
        assert_eq!(Guard::complement(&[g("[0,0]"), g("[1,1]")]), vec![g("(0,1)"), g("(1,+)")]);
    }

    #[test]
    fn partition_check() {
        assert!(Guard::is_partition(&[g("(1,3)"), g("[0,1]"), g("[3,+)")]));
        assert!(!Guard::is_partition(&[g("[0,1]"), g("[1,+)")]));
        assert!(!Guard::is_partition(&[g("[0,1)"), g("(1,+)")]));
        assert!(g("[0,2]").intersects(&g("[1,3]")));
        assert!(!g("[0,1)").intersects(&g("[1,3]")));
        assert!(g("[0,1]").intersects(&g("[1,3]")));
    }
}
