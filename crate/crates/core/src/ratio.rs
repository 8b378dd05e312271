use std::fmt;
use std::ops::Sub;

use num_rational::Ratio as Exact;
use serde::{Serialize, Serializer};

/// Exact score `num / den`, kept in lowest terms so equal scores always tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(Exact<i64>);

impl Ratio {
    pub const ZERO: Ratio = Ratio(Exact::new_raw(0, 1));
    pub const ONE: Ratio = Ratio(Exact::new_raw(1, 1));

    /// Panics when `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        Ratio(Exact::new(num, den))
    }

    pub fn from_counts(num: u64, den: u64) -> Self {
        Self::new(num as i64, den as i64)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }
}

impl Sub for Ratio {
    type Output = Ratio;

    fn sub(self, other: Ratio) -> Ratio {
        Ratio(self.0 - other.0)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}
