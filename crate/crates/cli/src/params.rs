//! Resolved run parameters: everything a subcommand needs after defaults,
//! presets, and flags have been folded together. These structs are what a
//! manifest stores, so a replayed manifest reconstructs the run exactly.

use parrondo_core::gate::GateParams;
use parrondo_core::quantum::{BMapping, GainFormula};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateAngles {
    pub delta_a: f64,
    pub alpha_a: f64,
    pub beta_a: f64,
    pub theta_a: f64,
    pub delta_b1: f64,
    pub alpha_b1: f64,
    pub beta_b1: f64,
    pub theta_b1: f64,
    pub delta_b2: f64,
    pub alpha_b2: f64,
    pub beta_b2: f64,
    pub theta_b2: f64,
}

impl GateAngles {
    pub fn table1() -> Self {
        let a = GateParams::preset_a();
        let b1 = GateParams::preset_b1();
        let b2 = GateParams::preset_b2();
        Self {
            delta_a: a.delta,
            alpha_a: a.alpha,
            beta_a: a.beta,
            theta_a: a.theta,
            delta_b1: b1.delta,
            alpha_b1: b1.alpha,
            beta_b1: b1.beta,
            theta_b1: b1.theta,
            delta_b2: b2.delta,
            alpha_b2: b2.alpha,
            beta_b2: b2.beta,
            theta_b2: b2.theta,
        }
    }

    pub fn params_a(&self) -> GateParams {
        GateParams {
            delta: self.delta_a,
            alpha: self.alpha_a,
            beta: self.beta_a,
            theta: self.theta_a,
        }
    }

    pub fn params_b1(&self) -> GateParams {
        GateParams {
            delta: self.delta_b1,
            alpha: self.alpha_b1,
            beta: self.beta_b1,
            theta: self.theta_b1,
        }
    }

    pub fn params_b2(&self) -> GateParams {
        GateParams {
            delta: self.delta_b2,
            alpha: self.alpha_b2,
            beta: self.beta_b2,
            theta: self.theta_b2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumParams {
    pub strategy: String,
    pub iterations: usize,
    pub offset: i64,
    pub capital_qubits: usize,
    pub gates: GateAngles,
    pub b_mapping: BMapping,
    pub gain_formula: GainFormula,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParamsResolved {
    pub strategy: String,
    pub steps: usize,
    pub epsilon: f64,
    pub initial_capital: i64,
    pub mc_trials: Option<u64>,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub length: usize,
    pub iterations: usize,
    pub offsets: Vec<i64>,
    pub capital_qubits: usize,
    pub gates: GateAngles,
    pub b_mappings: Vec<BMapping>,
    pub gain_formulas: Vec<GainFormula>,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub strategy: String,
    pub iterations: usize,
    pub offsets: Vec<i64>,
    pub capital_qubits: usize,
    pub gates: GateAngles,
    pub b_mapping: BMapping,
    pub gain_formula: GainFormula,
    pub format: OutputFormat,
}
