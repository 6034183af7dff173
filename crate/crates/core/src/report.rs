//! The JSON mining report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::miner::{Algorithm, DuplicationMetrics};
use crate::weight::Weight;

/// Settings of one mining run, as recorded in its report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiningConfig {
    pub beta: f64,
    pub delta: f64,
    pub mcs_budget_ms: u64,
    /// `None` means unlimited.
    pub total_budget_s: Option<f64>,
    pub algorithm: AlgorithmName,
    pub preprocess: bool,
    pub dedup: bool,
    pub index: bool,
    pub seed: u64,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            beta: 5.0,
            delta: 1.0,
            mcs_budget_ms: 10_000,
            total_budget_s: None,
            algorithm: AlgorithmName::Lazy,
            preprocess: true,
            dedup: true,
            index: true,
            seed: 0,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(format!("delta must lie in (0, 1], got {}", self.delta));
        }
        if Weight::from_f64(self.beta).is_none() {
            return Err(format!("beta must be a non-negative number, got {}", self.beta));
        }
        if self.total_budget_s.is_some_and(|s| !(s >= 0.0 && s.is_finite())) {
            return Err("total budget must be non-negative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmName {
    Greedy,
    Lazy,
}

impl From<AlgorithmName> for Algorithm {
    fn from(a: AlgorithmName) -> Algorithm {
        match a {
            AlgorithmName::Greedy => Algorithm::Greedy,
            AlgorithmName::Lazy => Algorithm::Lazy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub mining_ms: u64,
    /// `None` when no pattern was mined.
    pub first_pattern_ms: Option<u64>,
    pub mcs_total: u64,
    pub mcs_optimal: u64,
}

/// A parent of a pattern: another pattern, or an original flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParentRef {
    Pattern(u32),
    Flow(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportNode {
    pub id: u32,
    pub label: String,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEdge {
    pub src: u32,
    pub dst: u32,
    pub label: String,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportPattern {
    pub id: u32,
    pub weight: Weight,
    pub parents: Option<Vec<ParentRef>>,
    pub root: bool,
    pub nodes: Vec<ReportNode>,
    pub edges: Vec<ReportEdge>,
    /// Flow id to (pattern node id to flow node id), using the corpus' ids.
    pub occurrences: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub config: MiningConfig,
    pub metrics: DuplicationMetrics,
    pub timing: Timing,
    pub budget_exhausted: bool,
    pub patterns: Vec<ReportPattern>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report with every timing field zeroed; what remains is fully
    /// determined by the corpus and configuration.
    pub fn without_timing(&self) -> Report {
        Report { timing: Timing { mining_ms: 0, first_pattern_ms: None, ..self.timing.clone() }, ..self.clone() }
    }
}
