//! Exact non-negative clock values.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// A non-negative rational clock value or delay.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TimeValue(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("negative time value")]
    Negative,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed time literal `{0}`")]
    Malformed(String),
    #[error("time literal `{0}` out of range")]
    Overflow(String),
}

impl TimeValue {
    pub const ZERO: TimeValue = TimeValue(Ratio::new_raw(0, 1));

    /// One tenth, the fractional part used by normalization.
    pub const THETA: TimeValue = TimeValue(Ratio::new_raw(1, 10));

    pub fn new(numer: i64, denom: i64) -> Result<Self, TimeError> {
        if denom == 0 {
            return Err(TimeError::ZeroDenominator);
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::zero() {
            return Err(TimeError::Negative);
        }
        Ok(TimeValue(r))
    }

    pub fn from_int(n: u64) -> Self {
        TimeValue(Ratio::from_integer(n as i64))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> u64 {
        self.0.to_integer() as u64
    }

    pub fn fract(&self) -> TimeValue {
        TimeValue(self.0.fract())
    }

    /// `self - rhs`, or `None` when the result would be negative.
    pub fn checked_sub(self, rhs: TimeValue) -> Option<TimeValue> {
        if rhs.0 > self.0 {
            None
        } else {
            Some(TimeValue(self.0 - rhs.0))
        }
    }

    /// `⌊self⌋ + 1/10` for fractional values, identity on integers.
    pub fn normalized(&self) -> TimeValue {
        if self.is_integer() {
            *self
        } else {
            TimeValue::from_int(self.floor()) + TimeValue::THETA
        }
    }

    /// The rational with the smallest denominator strictly between `lo` and `hi`.
    pub fn simplest_between(lo: TimeValue, hi: TimeValue) -> TimeValue {
        assert!(lo < hi, "empty interval");
        let base = lo.floor();
        let lo_f = lo.0 - Ratio::from_integer(base as i64);
        let hi_f = hi.0 - Ratio::from_integer(base as i64);
        if hi_f > Ratio::from_integer(1) {
            return TimeValue::from_int(base + 1);
        }
        // Both offsets lie in [0, 1]; search denominators upward.
        let mut q: i64 = 1;
        loop {
            let p = (lo_f * q).floor().to_integer() + 1;
            let cand = Ratio::new(p, q);
            if cand > lo_f && cand < hi_f {
                return TimeValue(cand + Ratio::from_integer(base as i64));
            }
            q += 1;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for TimeValue {
    type Output = TimeValue;
    fn add(self, rhs: TimeValue) -> TimeValue {
        TimeValue(self.0 + rhs.0)
    }
}

impl Sub for TimeValue {
    type Output = TimeValue;
    fn sub(self, rhs: TimeValue) -> TimeValue {
        self.checked_sub(rhs).expect("negative time difference")
    }
}

impl From<u64> for TimeValue {
    fn from(n: u64) -> Self {
        TimeValue::from_int(n)
    }
}

fn is_terminating(denom: i64) -> bool {
    let mut d = denom;
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    d == 1
}

impl fmt::Display for TimeValue {
    /// Decimal when the expansion terminates, `n/d` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d == 1 {
            return write!(f, "{n}");
        }
        if !is_terminating(d) {
            return write!(f, "{n}/{d}");
        }
        let (int, mut rem) = n.div_rem(&d);
        let mut digits = String::new();
        while rem != 0 {
            rem *= 10;
            digits.push(char::from(b'0' + (rem / d) as u8));
            rem %= d;
        }
        write!(f, "{int}.{digits}")
    }
}

impl fmt::Debug for TimeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for TimeValue {
    type Err = TimeError;

    /// Accepts `12`, `1.25` and `7/3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TimeError::Malformed(s.to_string());
        let overflow = || TimeError::Overflow(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            if n.is_empty() || d.is_empty() || !n.bytes().chain(d.bytes()).all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let n: i64 = n.parse().map_err(|_| overflow())?;
            let d: i64 = d.parse().map_err(|_| overflow())?;
            return TimeValue::new(n, d);
        }
        let (int, frac) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if s.contains('.') && (frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit())) {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(overflow)?;
        let int: i64 = int.parse().map_err(|_| overflow())?;
        let frac_v: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| overflow())? };
        let numer = int.checked_mul(scale).and_then(|v| v.checked_add(frac_v)).ok_or_else(overflow)?;
        TimeValue::new(numer, scale)
    }
}
