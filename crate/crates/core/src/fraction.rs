//! Exact fractions for supports and thresholds.
//!
//! Supports are kept as the raw `count / total` pair rather than a reduced
//! rational or a float: the wire format preserves both numbers, and
//! threshold checks like `support >= minsup` stay exact at boundaries.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// An exact non-negative fraction. Never auto-reduced.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    /// Builds `num / den`. Panics when `den` is zero.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "fraction denominator must be nonzero");
        Fraction { num, den }
    }

    pub fn zero() -> Self {
        Fraction { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Fraction { num: 1, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses a minsup argument. Accepts a decimal in (0, 1] like `0.32`,
    /// a fraction like `2/6`, or a percentage like `32%`; `0.32` and `32%`
    /// parse to the same value.
    pub fn parse_minsup(text: &str) -> Result<Self, Error> {
        let raw = text.trim();
        let invalid = || Error::InvalidMinsup(raw.to_string());
        let frac = if let Some(percent) = raw.strip_suffix('%') {
            let scaled = Self::parse_decimal(percent.trim()).ok_or_else(invalid)?;
            Fraction::new(scaled.num, scaled.den.checked_mul(100).ok_or_else(invalid)?)
        } else if let Some((n, d)) = raw.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| invalid())?;
            let den: u64 = d.trim().parse().map_err(|_| invalid())?;
            if den == 0 {
                return Err(invalid());
            }
            Fraction::new(num, den)
        } else {
            Self::parse_decimal(raw).ok_or_else(invalid)?
        };
        if frac.num == 0 || frac > Fraction::one() {
            return Err(invalid());
        }
        Ok(frac)
    }

    /// Exact decimal-to-fraction parse: `0.32` becomes 32/100.
    fn parse_decimal(text: &str) -> Option<Self> {
        if text.is_empty() {
            return None;
        }
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().ok()? };
        if frac_part.is_empty() {
            return Some(Fraction::new(int, 1));
        }
        if frac_part.len() > 18 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let den = 10u64.checked_pow(frac_part.len() as u32)?;
        let frac: u64 = frac_part.parse().ok()?;
        Some(Fraction::new(int.checked_mul(den)?.checked_add(frac)?, den))
    }

    /// Display as a rounded percentage, e.g. `66 %`.
    pub fn as_percent(self) -> f64 {
        self.to_f64() * 100.0
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        u128::from(self.num) * u128::from(other.den) == u128::from(other.num) * u128::from(self.den)
    }
}

impl Eq for Fraction {}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = u128::from(self.num) * u128::from(other.den);
        let rhs = u128::from(other.num) * u128::from(self.den);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
