//! One-clock regions.

use std::fmt;

use crate::time::TimeValue;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Region {
    /// `[n, n]`
    Point(u64),
    /// `(n, n+1)`
    Open(u64),
}

impl Region {
    pub fn of(v: TimeValue) -> Region {
        if v.is_integer() {
            Region::Point(v.floor())
        } else {
            Region::Open(v.floor())
        }
    }

    pub fn contains(&self, v: TimeValue) -> bool {
        Region::of(v) == *self
    }
}

pub fn region_of(v: TimeValue) -> Region {
    Region::of(v)
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Point(n) => write!(f, "[{n},{n}]"),
            Region::Open(n) => write!(f, "({n},{})", n + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = |s: &str| s.parse::<TimeValue>().unwrap();
        assert_eq!(region_of(t("3")), Region::Point(3));
        assert_eq!(region_of(t("1.1")), Region::Open(1));
        assert_eq!(region_of(t("0")), Region::Point(0));
        assert_eq!(region_of(t("1.1")).to_string(), "(1,2)");
        assert!(Region::Open(1).contains(t("1.99")));
    }
}
