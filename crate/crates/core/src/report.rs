//! Check reports, search strategies and witnesses.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, ExtendedValue};

/// Level bound used for infinite carriers when none is given.
pub const DEFAULT_LEVEL_BOUND: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SearchStrategy {
    Exhaustive,
    BoundedRandom {
        seed: u64,
        samples: usize,
        level_bound: u32,
    },
}

impl SearchStrategy {
    pub fn bounded(seed: u64, samples: usize, level_bound: u32) -> Self {
        SearchStrategy::BoundedRandom {
            seed,
            samples,
            level_bound,
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self, SearchStrategy::Exhaustive)
    }

    /// A fresh generator for this strategy. Every checker starts from the
    /// strategy seed, so reports replay identically.
    pub fn rng(&self) -> ChaCha8Rng {
        let seed = match self {
            SearchStrategy::Exhaustive => 0,
            SearchStrategy::BoundedRandom { seed, .. } => *seed,
        };
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn samples(&self) -> usize {
        match self {
            SearchStrategy::Exhaustive => 0,
            SearchStrategy::BoundedRandom { samples, .. } => *samples,
        }
    }

    pub fn level_bound(&self) -> Option<u32> {
        match self {
            SearchStrategy::Exhaustive => None,
            SearchStrategy::BoundedRandom { level_bound, .. } => Some(*level_bound),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Named witness components rendered as canonical strings. Every role shares
/// one namespace whatever its carrier; the claim id determines which
/// carrier each role belongs to.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Witness(BTreeMap<String, String>);

impl Witness {
    pub fn new() -> Self {
        Witness::default()
    }

    pub fn element(mut self, role: &str, value: &Element) -> Self {
        self.0.insert(role.to_string(), value.to_string());
        self
    }

    pub fn level(mut self, role: &str, n: u32) -> Self {
        self.0.insert(role.to_string(), n.to_string());
        self
    }

    pub fn label(mut self, role: &str, text: impl Into<String>) -> Self {
        self.0.insert(role.to_string(), text.into());
        self
    }

    pub fn get(&self, role: &str) -> Option<&str> {
        self.0.get(role).map(String::as_str)
    }

    pub fn roles(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub claim_id: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub strategy: SearchStrategy,
    pub tainted: bool,
    pub note: Option<String>,
}

impl CheckReport {
    pub fn pass(claim_id: &str, strategy: SearchStrategy) -> Self {
        CheckReport {
            claim_id: claim_id.to_string(),
            verdict: Verdict::Pass,
            witness: None,
            strategy,
            tainted: false,
            note: None,
        }
    }

    pub fn fail(claim_id: &str, strategy: SearchStrategy, witness: Witness) -> Self {
        CheckReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
            ..CheckReport::pass(claim_id, strategy)
        }
    }

    pub fn inconclusive(claim_id: &str, strategy: SearchStrategy, note: impl Into<String>) -> Self {
        CheckReport {
            verdict: Verdict::Inconclusive,
            note: Some(note.into()),
            ..CheckReport::pass(claim_id, strategy)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Accumulates the outcome of one quantifier search.
///
/// The first recorded witness wins, so callers that scan in element order get
/// the least counterexample. Any inexact value seen taints the search; a
/// tainted search without a witness is inconclusive.
#[derive(Debug, Default)]
pub(crate) struct Search {
    witness: Option<Witness>,
    tainted: bool,
    inconclusive: Option<String>,
}

impl Search {
    pub fn new() -> Self {
        Search::default()
    }

    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    pub fn fail(&mut self, witness: Witness) {
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    /// Records the values an evaluation depended on; returns true if all were exact.
    pub fn observe(&mut self, values: &[ExtendedValue]) -> bool {
        let exact = values.iter().all(ExtendedValue::is_exact);
        if !exact {
            self.tainted = true;
        }
        exact
    }

    pub fn taint(&mut self) {
        self.tainted = true;
    }

    pub fn undecided(&mut self, reason: impl Into<String>) {
        if self.inconclusive.is_none() {
            self.inconclusive = Some(reason.into());
        }
    }

    pub fn finish(self, claim_id: &str, strategy: SearchStrategy) -> CheckReport {
        let mut report = match (self.witness, self.tainted, self.inconclusive) {
            (Some(w), _, _) => CheckReport::fail(claim_id, strategy, w),
            (None, _, Some(reason)) => CheckReport::inconclusive(claim_id, strategy, reason),
            (None, true, None) => CheckReport::inconclusive(
                claim_id,
                strategy,
                "depends on a search-capped infinite value",
            ),
            (None, false, None) => CheckReport::pass(claim_id, strategy),
        };
        report.tainted = self.tainted;
        report
    }
}
