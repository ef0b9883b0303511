//! Statevector simulation of capital-dependent quantum Parrondo games,
//! with an exact classical baseline, a dense brute-force oracle, and an
//! exhaustive strategy-search harness.
//!
//! The pieces:
//!
//! - [`gate`] — the four-angle coin-gate algebra;
//! - [`engine`] — in-place statevector kernels (single-qubit, controlled,
//!   register arithmetic, mod-3 accumulation);
//! - [`quantum`] — the game circuits and strategy runner;
//! - [`classical`] — exact distribution evolution and Monte Carlo sampling
//!   of the classical games;
//! - [`oracle`] — a deliberately naive dense-matrix reference, capped at
//!   10 qubits;
//! - [`search`] — strategy/offset enumeration and ranking;
//! - [`validate`] — the self-check suites behind `parrondo validate`.

pub mod classical;
pub mod engine;
pub mod gate;
pub mod oracle;
pub mod quantum;
pub mod search;
pub mod series;
pub mod strategy;
pub mod validate;

pub use classical::{
    classical_step, expected_gain_exact, monte_carlo, CapitalDistribution, ClassicalError,
    ClassicalParams,
};
pub use engine::{
    init_state, CircuitOp, ControlSpec, EngineError, Polarity, RegisterLayout, StateVector,
};
pub use gate::{
    compose_gate, phase_gate, rotation_y, rotation_z, GateError, GateParams, Matrix2,
};
pub use oracle::{
    build_dense, evolve_circuit, op_matrix, oracle_evolve, DenseUnitary, OracleError,
    MAX_ORACLE_QUBITS,
};
pub use quantum::{
    ancilla_leakage, auto_capital_qubits, expected_capital_gain, minimum_capital_qubits,
    run_strategy, sigma_z_expectation, BMapping, GainFormula, QuantumError, QuantumGameConfig,
};
pub use search::{
    enumerate_strategies, rank_strategies, sweep_offsets, SearchConfig, SearchEntry, SearchError,
    SearchReport, SignFlip,
};
pub use series::{GainRecord, GainSeries, RunMeta, ENGINE_VERSION};
pub use strategy::{GameToken, Strategy, StrategyError};
pub use validate::{run_validation, CheckResult, ValidationError};
