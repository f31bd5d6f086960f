//! The JSON report documents written by the command line tool.
//!
//! Documents are serialized through `serde_json::Value`, whose maps are
//! ordered, so every object is emitted with sorted keys. Comparison with a
//! golden file drops the `metadata` block, which holds the wall-clock time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::report::{CheckReport, SearchStrategy, Verdict, Witness};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEntry {
    pub claim_id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub tainted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&CheckReport> for ResultEntry {
    fn from(r: &CheckReport) -> Self {
        ResultEntry {
            claim_id: r.claim_id.clone(),
            verdict: r.verdict,
            witness: r.witness.clone(),
            tainted: r.tainted,
            note: r.note.clone(),
        }
    }
}

impl ResultEntry {
    pub fn to_report(&self, strategy: SearchStrategy) -> CheckReport {
        CheckReport {
            claim_id: self.claim_id.clone(),
            verdict: self.verdict,
            witness: self.witness.clone(),
            strategy,
            tainted: self.tainted,
            note: self.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub runtime_ms: u64,
}

/// Skeleton section of a `skeleton` report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonSection {
    pub representatives: Vec<String>,
    /// Each non-core element of the sample mapped to its representative.
    pub classes: BTreeMap<String, String>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub instance_id: String,
    pub strategy: SearchStrategy,
    pub results: Vec<ResultEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<SkeletonSection>,
    pub metadata: Metadata,
}

impl ReportDocument {
    pub fn new(instance_id: &str, strategy: SearchStrategy, reports: &[CheckReport], runtime_ms: u64) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            instance_id: instance_id.to_string(),
            strategy,
            results: reports.iter().map(ResultEntry::from).collect(),
            skeleton: None,
            metadata: Metadata { runtime_ms },
        }
    }

    pub fn reports(&self) -> Vec<CheckReport> {
        self.results.iter().map(|r| r.to_report(self.strategy)).collect()
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> Result<String> {
        render_value(&serde_json::to_value(self)?)
    }

    /// The rendering compared against golden files: everything except
    /// `metadata`.
    pub fn body(&self) -> Result<String> {
        body_of(&serde_json::to_value(self)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn render_value(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Comparable body of any report text, parsed leniently so that a golden
/// file from a different schema still yields a mismatch instead of an
/// error.
pub fn body_of(v: &Value) -> Result<String> {
    let mut v = v.clone();
    if let Value::Object(map) = &mut v {
        map.remove("metadata");
    }
    render_value(&v)
}

pub fn body_of_text(text: &str) -> Result<String> {
    body_of(&serde_json::from_str(text)?)
}
