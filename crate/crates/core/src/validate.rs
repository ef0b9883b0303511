//! Self-check suites behind the `validate` CLI subcommand: arithmetic
//! permutation checks, engine-vs-oracle equivalence, game unitarity, and
//! the run-level conservation properties.

use crate::engine::{init_state, CircuitOp, ControlSpec, Polarity, RegisterLayout, StateVector};
use crate::gate::{compose_gate, GateParams};
use crate::oracle::{build_dense, evolve_circuit, op_matrix, oracle_evolve, MAX_ORACLE_QUBITS};
use crate::quantum::{
    ancilla_leakage, game_a_circuit, game_b_circuit, run_strategy, BMapping, QuantumGameConfig,
    ANCILLA_LEAK_TOL,
};
use crate::strategy::Strategy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum ValidationError {
    #[error("max qubits {0} exceeds the dense-oracle cap of {MAX_ORACLE_QUBITS}")]
    CapExceeded(usize),
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self {
            name,
            passed: false,
            detail,
        }
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> GateParams {
    GateParams {
        delta: rng.random_range(-3.0..3.0),
        alpha: rng.random_range(-3.0..3.0),
        beta: rng.random_range(-3.0..3.0),
        theta: rng.random_range(-3.0..3.0),
    }
}

fn random_primitive_op(rng: &mut ChaCha8Rng, layout: &RegisterLayout) -> CircuitOp {
    let total = layout.total_qubits();
    match rng.random_range(0..4) {
        0 => CircuitOp::Single {
            target: rng.random_range(0..total),
            gate: compose_gate(&random_params(rng)).expect("finite angles"),
        },
        1 => {
            let target = rng.random_range(0..total);
            let mut controls = Vec::new();
            for qubit in 0..total {
                if qubit != target && rng.random::<f64>() < 0.25 {
                    let polarity = if rng.random::<bool>() {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    };
                    controls.push((qubit, polarity));
                }
            }
            CircuitOp::Controlled {
                target,
                gate: compose_gate(&random_params(rng)).expect("finite angles"),
                controls: ControlSpec::new(controls).expect("distinct qubits"),
            }
        }
        2 => CircuitOp::AddConst {
            reg: layout.capital_range(),
            delta: if rng.random::<bool>() { 1 } else { -1 },
            controls: if rng.random::<bool>() {
                ControlSpec::positive(layout.coin_qubit())
            } else {
                ControlSpec::negative(layout.coin_qubit())
            },
        },
        _ => {
            let [o1, o2, _] = layout.ancilla_qubits();
            CircuitOp::Mod3 {
                reg: layout.capital_range(),
                low: o1,
                high: o2,
                inverse: rng.random::<bool>(),
            }
        }
    }
}

fn check_cid_permutation(max_capital_qubits: usize) -> CheckResult {
    const NAME: &str = "cid-permutation";
    for n in 2..=max_capital_qubits {
        let layout = RegisterLayout::new(n).expect("n >= 2");
        let circuit = crate::quantum::cid_circuit(&layout);
        let dim = 1usize << layout.total_qubits();
        for index in 0..dim {
            let mut state = StateVector::basis_state(layout.total_qubits(), index);
            if state.apply_circuit(&circuit).is_err() {
                return CheckResult::fail(NAME, format!("engine error at n={n} index={index}"));
            }
            // classical image coded here, independent of engine and oracle
            let coin = layout.coin_of(index);
            let capital = layout.capital_of(index);
            let capacity = layout.capital_capacity();
            let moved = if coin == 1 {
                (capital + 1) % capacity
            } else {
                (capital + capacity - 1) % capacity
            };
            let expected = layout.basis_index(coin, moved, layout.ancilla_of(index));
            let amp = state.amplitude(expected);
            if (amp.re - 1.0).abs() > 0.0 || amp.im != 0.0 {
                return CheckResult::fail(
                    NAME,
                    format!("n={n}: basis {index} did not map exactly to {expected}"),
                );
            }
        }
    }
    CheckResult::pass(
        NAME,
        format!("exact on all basis states for n in 2..={max_capital_qubits}"),
    )
}

fn check_mod3_permutation(max_capital_qubits: usize) -> CheckResult {
    const NAME: &str = "mod3-permutation";
    for n in 2..=max_capital_qubits {
        let layout = RegisterLayout::new(n).expect("n >= 2");
        let op = crate::quantum::mod3_op(&layout, false);
        let dim = 1usize << layout.total_qubits();
        for index in 0..dim {
            let mut state = StateVector::basis_state(layout.total_qubits(), index);
            if state.apply_op(&op).is_err() {
                return CheckResult::fail(NAME, format!("engine error at n={n} index={index}"));
            }
            let capital = layout.capital_of(index);
            let b = layout.ancilla_of(index) & 0b11;
            let o3 = layout.ancilla_of(index) >> 2;
            let moved = ((b + capital % 3) % 4) | (o3 << 2);
            let expected = layout.basis_index(layout.coin_of(index), capital, moved);
            let amp = state.amplitude(expected);
            if (amp.re - 1.0).abs() > 0.0 || amp.im != 0.0 {
                return CheckResult::fail(
                    NAME,
                    format!("n={n}: basis {index} did not map exactly to {expected}"),
                );
            }
        }
    }
    CheckResult::pass(
        NAME,
        format!("matches the classical mod-3 map for n in 2..={max_capital_qubits}"),
    )
}

fn check_mod3_roundtrip(seed: u64) -> CheckResult {
    const NAME: &str = "mod3-roundtrip";
    let layout = RegisterLayout::new(5).expect("n >= 2");
    for trial in 0..20u64 {
        let mut state = StateVector::random_normalized(layout.total_qubits(), seed ^ trial);
        let before = state.clone();
        let forward = crate::quantum::mod3_op(&layout, false);
        let backward = crate::quantum::mod3_op(&layout, true);
        if state.apply_op(&forward).is_err() || state.apply_op(&backward).is_err() {
            return CheckResult::fail(NAME, format!("engine error on trial {trial}"));
        }
        if state != before {
            return CheckResult::fail(NAME, format!("round trip not bit-exact on trial {trial}"));
        }
    }
    CheckResult::pass(NAME, "compute/uncompute round trips are bit-exact".to_string())
}

fn check_oracle_single_ops(max_qubits: usize, seed: u64) -> CheckResult {
    const NAME: &str = "oracle-single-ops";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = rng.random_range(2..=max_qubits.saturating_sub(4).max(2));
        let layout = RegisterLayout::new(n).expect("n >= 2");
        let op = random_primitive_op(&mut rng, &layout);
        let state = StateVector::random_normalized(layout.total_qubits(), seed ^ (trial as u64));

        let mut engine_state = state.clone();
        if engine_state.apply_op(&op).is_err() {
            return CheckResult::fail(NAME, format!("engine error on trial {trial}"));
        }
        let matrix = match op_matrix(&op, layout.total_qubits()) {
            Ok(m) => m,
            Err(e) => return CheckResult::fail(NAME, format!("oracle error on trial {trial}: {e}")),
        };
        let oracle_state = match oracle_evolve(&state, &matrix) {
            Ok(s) => s,
            Err(e) => return CheckResult::fail(NAME, format!("oracle error on trial {trial}: {e}")),
        };
        let diff = engine_state.max_amplitude_diff(&oracle_state);
        worst = worst.max(diff);
        if diff > ORACLE_TOL {
            return CheckResult::fail(
                NAME,
                format!("trial {trial} ({op:?}): amplitude diff {diff:.3e}"),
            );
        }
    }
    CheckResult::pass(NAME, format!("100 random ops agree; worst diff {worst:.3e}"))
}

fn check_oracle_game_circuits(max_qubits: usize, seed: u64) -> CheckResult {
    const NAME: &str = "oracle-game-circuits";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let n = rng.random_range(2..=max_qubits.saturating_sub(4).max(2));
        let layout = RegisterLayout::new(n).expect("n >= 2");
        let params_a = random_params(&mut rng);
        let params_b1 = random_params(&mut rng);
        let params_b2 = random_params(&mut rng);
        let b_mapping = if rng.random::<bool>() {
            BMapping::Paper
        } else {
            BMapping::Classical
        };
        let mut circuit = Vec::new();
        for _ in 0..3 {
            if rng.random::<bool>() {
                circuit.extend(game_a_circuit(&layout, &params_a).expect("finite angles"));
            } else {
                circuit.extend(
                    game_b_circuit(&layout, &params_b1, &params_b2, b_mapping)
                        .expect("finite angles"),
                );
            }
        }
        let state = StateVector::random_normalized(layout.total_qubits(), seed ^ (trial as u64) << 8);

        let mut engine_state = state.clone();
        if engine_state.apply_circuit(&circuit).is_err() {
            return CheckResult::fail(NAME, format!("engine error on trial {trial}"));
        }
        let oracle_state = match evolve_circuit(&state, &circuit) {
            Ok(s) => s,
            Err(e) => return CheckResult::fail(NAME, format!("oracle error on trial {trial}: {e}")),
        };
        let diff = engine_state.max_amplitude_diff(&oracle_state);
        worst = worst.max(diff);
        if diff > ORACLE_TOL {
            return CheckResult::fail(NAME, format!("trial {trial}: amplitude diff {diff:.3e}"));
        }
    }
    CheckResult::pass(
        NAME,
        format!("20 random 3-game circuits agree; worst diff {worst:.3e}"),
    )
}

fn check_game_unitarity() -> CheckResult {
    const NAME: &str = "game-unitarity";
    let layout = RegisterLayout::new(4).expect("n >= 2");
    let config = QuantumGameConfig::table1(4, 0).expect("valid size");
    let circuits = [
        game_a_circuit(&layout, &config.params_a).expect("finite angles"),
        game_b_circuit(&layout, &config.params_b1, &config.params_b2, config.b_mapping)
            .expect("finite angles"),
    ];
    let mut worst = 0.0f64;
    for circuit in &circuits {
        // build_dense itself rejects defects above 1e-10
        match build_dense(circuit, layout.total_qubits()) {
            Ok(dense) => worst = worst.max(dense.unitarity_defect()),
            Err(e) => return CheckResult::fail(NAME, format!("{e}")),
        }
    }
    CheckResult::pass(NAME, format!("game matrices unitary; worst defect {worst:.3e}"))
}

fn check_norm_and_ancilla() -> CheckResult {
    const NAME: &str = "norm-and-ancilla";
    let config = QuantumGameConfig::table1(11, 0).expect("valid size");
    let layout = config.layout();
    let strategy: Strategy = "ABBAB".parse().expect("valid tokens");
    let mut state = init_state(&layout, 0).expect("offset in range");
    let a_ops = game_a_circuit(&layout, &config.params_a).expect("finite angles");
    let b_ops = game_b_circuit(&layout, &config.params_b1, &config.params_b2, config.b_mapping)
        .expect("finite angles");
    let mut worst_leak = 0.0f64;
    for step in 0..2000 {
        let ops = match strategy.token_at(step) {
            crate::strategy::GameToken::A => &a_ops,
            crate::strategy::GameToken::B => &b_ops,
        };
        if state.apply_circuit(ops).is_err() {
            return CheckResult::fail(NAME, format!("engine error at step {step}"));
        }
        let leak = ancilla_leakage(&state, &layout);
        worst_leak = worst_leak.max(leak);
        if leak >= ANCILLA_LEAK_TOL {
            return CheckResult::fail(NAME, format!("ancilla leak {leak:.3e} at step {step}"));
        }
    }
    let drift = (state.norm() - 1.0).abs();
    if drift >= 1e-9 {
        return CheckResult::fail(NAME, format!("norm drift {drift:.3e} after 2000 games"));
    }
    CheckResult::pass(
        NAME,
        format!("2000 games: norm drift {drift:.3e}, worst ancilla leak {worst_leak:.3e}"),
    )
}

fn check_global_phase() -> CheckResult {
    const NAME: &str = "global-phase";
    let strategy: Strategy = "ABBAB".parse().expect("valid tokens");
    let base = QuantumGameConfig::table1(7, 0).expect("valid size");
    let baseline = match run_strategy(&base, &strategy, 8) {
        Ok(s) => s,
        Err(e) => return CheckResult::fail(NAME, format!("{e}")),
    };
    for (da, db1, db2) in [(0.9, 0.0, 0.0), (0.0, -1.3, 0.0), (0.0, 0.0, 2.1)] {
        let mut config = base.clone();
        config.params_a.delta = da;
        config.params_b1.delta = db1;
        config.params_b2.delta = db2;
        let shifted = match run_strategy(&config, &strategy, 8) {
            Ok(s) => s,
            Err(e) => return CheckResult::fail(NAME, format!("{e}")),
        };
        for (a, b) in baseline.records.iter().zip(&shifted.records) {
            if (a.expected_gain - b.expected_gain).abs() >= 1e-12 {
                return CheckResult::fail(
                    NAME,
                    format!(
                        "step {}: gain moved from {} to {} under a phase change",
                        a.step, a.expected_gain, b.expected_gain
                    ),
                );
            }
        }
    }
    CheckResult::pass(NAME, "phase angles leave every gain record unchanged".to_string())
}

fn check_support_parity() -> CheckResult {
    const NAME: &str = "support-parity";
    let config = QuantumGameConfig::table1(6, 1).expect("valid size");
    let layout = config.layout();
    let strategy: Strategy = "ABBAB".parse().expect("valid tokens");
    let mut state = init_state(&layout, 1).expect("offset in range");
    let c0 = layout.initial_capital(1).expect("offset in range") as i64;
    let a_ops = game_a_circuit(&layout, &config.params_a).expect("finite angles");
    let b_ops = game_b_circuit(&layout, &config.params_b1, &config.params_b2, config.b_mapping)
        .expect("finite angles");
    for step in 0..20 {
        let ops = match strategy.token_at(step) {
            crate::strategy::GameToken::A => &a_ops,
            crate::strategy::GameToken::B => &b_ops,
        };
        if state.apply_circuit(ops).is_err() {
            return CheckResult::fail(NAME, format!("engine error at step {step}"));
        }
        let k = step as i64 + 1;
        let probs = match state.register_distribution(layout.capital_range()) {
            Ok(p) => p,
            Err(e) => return CheckResult::fail(NAME, format!("{e}")),
        };
        for (v, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let v = v as i64;
            if v < c0 - k || v > c0 + k || (v - (c0 + k)).rem_euclid(2) != 0 {
                return CheckResult::fail(
                    NAME,
                    format!("step {k}: probability {p:.3e} at capital {v}"),
                );
            }
        }
    }
    CheckResult::pass(NAME, "support confined to the parity-matched window".to_string())
}

/// Run every suite. `max_qubits` caps the total register size used by the
/// exhaustive and oracle-backed checks.
pub fn run_validation(max_qubits: usize, seed: u64) -> Result<Vec<CheckResult>, ValidationError> {
    if max_qubits > MAX_ORACLE_QUBITS {
        return Err(ValidationError::CapExceeded(max_qubits));
    }
    let max_capital = max_qubits.saturating_sub(4).clamp(2, 6);
    Ok(vec![
        check_cid_permutation(max_capital),
        check_mod3_permutation(max_capital),
        check_mod3_roundtrip(seed),
        check_oracle_single_ops(max_qubits, seed.wrapping_add(1)),
        check_oracle_game_circuits(max_qubits, seed.wrapping_add(2)),
        check_game_unitarity(),
        check_norm_and_ancilla(),
        check_global_phase(),
        check_support_parity(),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_enforced() {
        assert_eq!(
            run_validation(11, 0).unwrap_err(),
            ValidationError::CapExceeded(11)
        );
    }

    #[test]
    fn full_validation_passes() {
        let results = run_validation(9, 2024).unwrap();
        assert_eq!(results.len(), 9);
        for result in &results {
            assert!(result.passed, "{}: {}", result.name, result.detail);
        }
    }
}
