//! JSON envelope emitted by `posted-price analyze`.
//!
//! Numbers are rounded to 12 significant digits and non-finite values are
//! written as `"inf"`, `"-inf"` or `"nan"`, so parsing and re-serializing an
//! envelope reproduces it byte for byte. The schema lives in
//! `docs/report.schema.json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::moments::MomentsReport;
use crate::revenue::OptimalRevenue;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalysisReport {
    Moments(MomentsReport),
    OptimalRevenue(OptimalRevenue),
    Bounds(BoundReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub spec_text: String,
    pub seed: u64,
    pub reports: BTreeMap<String, AnalysisReport>,
    pub tool_version: String,
    /// Wall-clock time; zero unless timing was requested, which keeps
    /// repeated runs byte-identical.
    pub runtime_ms: u64,
}

impl ReportEnvelope {
    pub fn new(spec_text: impl Into<String>, seed: u64) -> Self {
        Self {
            spec_text: spec_text.into(),
            seed,
            reports: BTreeMap::new(),
            tool_version: TOOL_VERSION.to_owned(),
            runtime_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
