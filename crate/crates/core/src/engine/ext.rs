use std::fmt;
use std::ops::Sub;

use serde::{Serialize, Serializer};

/// An integer extended by `-inf`, the value of `c(S,k)` and `g(S,k)` when no
/// polytope qualifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
}

impl ExtInt {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(v) => Some(v),
            ExtInt::NegInf => None,
        }
    }

    /// Maximum of a sequence; `-inf` for an empty one.
    pub fn max_of(it: impl IntoIterator<Item = ExtInt>) -> ExtInt {
        it.into_iter().fold(ExtInt::NegInf, Ord::max)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(v)
    }
}

impl Sub<i64> for ExtInt {
    type Output = ExtInt;
    fn sub(self, rhs: i64) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v - rhs),
            ExtInt::NegInf => ExtInt::NegInf,
        }
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::NegInf => f.write_str("-inf"),
        }
    }
}

/// `-inf` serializes as `null`.
impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::Fin(v) => s.serialize_i64(*v),
            ExtInt::NegInf => s.serialize_none(),
        }
    }
}
