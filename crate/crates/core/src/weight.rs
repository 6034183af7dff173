//! Fixed-point refactor weights.
//!
//! Weights are stored as integer thousandths so that sums and comparisons are
//! exact and platform independent. Priority ordering in the miner relies on
//! this.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Number of fixed-point units per whole weight unit.
pub const SCALE: u64 = 1000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(u64);

impl Weight {
    pub const ZERO: Weight = Weight(0);
    pub const ONE: Weight = Weight(SCALE);

    pub const fn from_units(units: u64) -> Weight {
        Weight(units * SCALE)
    }

    pub const fn from_raw(raw: u64) -> Weight {
        Weight(raw)
    }

    pub const fn raw(self) -> u64 {
        self.0
    }

    /// Converts a decimal value, rounding to the nearest thousandth.
    /// Returns `None` for negative or non-finite input.
    pub fn from_f64(value: f64) -> Option<Weight> {
        if !value.is_finite() || value < 0.0 {
            return None;
        }
        let raw = (value * SCALE as f64).round();
        if raw > u64::MAX as f64 {
            return None;
        }
        Some(Weight(raw as u64))
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn min(self, other: Weight) -> Weight {
        Weight(self.0.min(other.0))
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Weight> for Weight {
    fn sum<I: Iterator<Item = &'a Weight>>(iter: I) -> Weight {
        iter.copied().sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / SCALE;
        let frac = self.0 % SCALE;
        if frac == 0 {
            write!(f, "{whole}")
        } else {
            let s = format!("{frac:03}");
            write!(f, "{whole}.{}", s.trim_end_matches('0'))
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_multiple_of(SCALE) {
            serializer.serialize_u64(self.0 / SCALE)
        } else {
            serializer.serialize_f64(self.as_f64())
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Weight, D::Error> {
        let v = f64::deserialize(deserializer)?;
        Weight::from_f64(v).ok_or_else(|| serde::de::Error::custom(format!("invalid weight {v}")))
    }
}
