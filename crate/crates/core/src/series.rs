//! Gain-trajectory records shared by the quantum and classical runners.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One per-step record; `step` counts elementary games from 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainRecord {
    pub step: usize,
    pub expected_gain: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

/// Run metadata: both step counters plus an echo of every knob that shaped
/// the run, so a series file is interpretable on its own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub engine_version: String,
    pub kind: String,
    pub strategy: String,
    pub elementary_games: usize,
    pub strategy_iterations: usize,
    pub params: BTreeMap<String, String>,
}

impl RunMeta {
    pub fn new(kind: &str, strategy: String, elementary_games: usize, strategy_iterations: usize) -> Self {
        Self {
            engine_version: ENGINE_VERSION.to_string(),
            kind: kind.to_string(),
            strategy,
            elementary_games,
            strategy_iterations,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// A per-step expected-gain trajectory; step indices strictly increase
/// from 1 and the implicit step-0 gain is 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainSeries {
    pub meta: RunMeta,
    pub records: Vec<GainRecord>,
}

impl GainSeries {
    pub fn final_gain(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.expected_gain)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}
