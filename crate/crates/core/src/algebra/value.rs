//! The ordered value domain `ℕ ∪ {∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A point of `ℕ ∪ {∞}`.
///
/// `Infinite { exact: false }` is what a capped membership scan returns when
/// it could not prove that an element lies in every level. It is the same
/// order point as an exact infinity, so comparisons and hashing both
/// ignore the flag; use [`ExtendedValue::is_exact`] or [`compare`] to see it.
#[derive(Debug, Clone, Copy)]
pub enum ExtendedValue {
    Finite(u32),
    Infinite { exact: bool },
}

pub const INFINITY: ExtendedValue = ExtendedValue::Infinite { exact: true };

impl ExtendedValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedValue::Infinite { .. })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExtendedValue::Infinite { exact: false })
    }

    pub fn finite(&self) -> Option<u32> {
        match self {
            ExtendedValue::Finite(n) => Some(*n),
            ExtendedValue::Infinite { .. } => None,
        }
    }

    /// Sum in the monoid `ℕ ∪ {∞}`; exactness of infinities is kept.
    pub fn saturating_add(self, other: ExtendedValue) -> ExtendedValue {
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => {
                ExtendedValue::Finite(a.saturating_add(b))
            }
            (ExtendedValue::Infinite { exact: a }, ExtendedValue::Infinite { exact: b }) => {
                ExtendedValue::Infinite { exact: a && b }
            }
            (inf @ ExtendedValue::Infinite { .. }, _) | (_, inf @ ExtendedValue::Infinite { .. }) => {
                inf
            }
        }
    }
}

impl PartialEq for ExtendedValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtendedValue {}

impl Hash for ExtendedValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.finite().hash(state)
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedValue::Finite(a), ExtendedValue::Finite(b)) => a.cmp(b),
            (ExtendedValue::Finite(_), ExtendedValue::Infinite { .. }) => Ordering::Less,
            (ExtendedValue::Infinite { .. }, ExtendedValue::Finite(_)) => Ordering::Greater,
            (ExtendedValue::Infinite { .. }, ExtendedValue::Infinite { .. }) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(n) => write!(f, "{n}"),
            ExtendedValue::Infinite { exact: true } => f.write_str("inf(exact)"),
            ExtendedValue::Infinite { exact: false } => f.write_str("inf(capped)"),
        }
    }
}

/// Result of [`compare`]: the order relation plus whether an inexact
/// infinity took part in it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    pub tainted: bool,
}

pub fn compare(v1: ExtendedValue, v2: ExtendedValue) -> Comparison {
    Comparison {
        ordering: v1.cmp(&v2),
        tainted: !v1.is_exact() || !v2.is_exact(),
    }
}
