//! Benchmark-only crate; see `benches/simulation.rs`.
//!
//! Shared fixtures for the benchmarks live here so the bench target stays
//! small.

use parrondo_core::engine::{init_state, RegisterLayout, StateVector};
use parrondo_core::quantum::QuantumGameConfig;

/// A prepared state and its layout at the flagship register size.
pub fn flagship_fixture() -> (QuantumGameConfig, RegisterLayout, StateVector) {
    let config = QuantumGameConfig::table1(11, 0).expect("valid size");
    let layout = config.layout();
    let state = init_state(&layout, 0).expect("offset in range");
    (config, layout, state)
}
