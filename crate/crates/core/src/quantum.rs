//! Quantum game circuits and the strategy runner.
//!
//! One elementary game leaves the ancilla register in `|000>`:
//!
//! - game A: coin gate `A`, then CID;
//! - game B: compute capital mod 3 into `o1 o2`, flag `o3` on the
//!   multiple-of-three subspace, apply one coin gate per flag branch,
//!   unflag, uncompute mod 3, then CID.
//!
//! The mod3/flag ancillas must be uncomputed *before* CID moves the
//! capital; once the capital has shifted, the uncomputation no longer
//! cancels and the ancilla stays entangled.
//!
//! Coin gates applied under ancilla control are phase-stripped: an
//! unconditional `Ph(delta)` is an unobservable global phase, but a
//! *controlled* `Ph(delta)` would be a relative phase between the
//! flag branches and make the bookkeeping angle physical.

use crate::engine::{
    init_state, CircuitOp, ControlSpec, EngineError, Polarity, RegisterLayout, StateVector,
};
use crate::gate::{compose_gate, GateError, GateParams, Matrix2};
use crate::series::{GainRecord, GainSeries, RunMeta};
use crate::strategy::{GameToken, Strategy, StrategyError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Total probability allowed outside the `|000>` ancilla subspace after a
/// completed game.
pub const ANCILLA_LEAK_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("iterations must be at least 1")]
    ZeroIterations,
    #[error(
        "{games} elementary games exceed the capacity of a {capital_qubits}-qubit capital \
         register; at least {min_capital_qubits} capital qubits are required"
    )]
    CapacityExceeded {
        games: usize,
        capital_qubits: usize,
        min_capital_qubits: usize,
    },
}

impl QuantumError {
    /// Smallest capital-register size that would make the run valid, when
    /// the error is a sizing problem.
    pub fn minimum_capital_qubits(&self) -> Option<usize> {
        match self {
            QuantumError::CapacityExceeded {
                min_capital_qubits, ..
            } => Some(*min_capital_qubits),
            _ => None,
        }
    }
}

/// Which coin plays on capitals divisible by three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BMapping {
    /// `B2` on multiples of three (the quantum-circuit reading).
    Paper,
    /// `B1` on multiples of three (the classical-game reading).
    Classical,
}

impl fmt::Display for BMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BMapping::Paper => write!(f, "paper"),
            BMapping::Classical => write!(f, "classical"),
        }
    }
}

impl FromStr for BMapping {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(BMapping::Paper),
            "classical" => Ok(BMapping::Classical),
            other => Err(format!("unknown b-mapping {other:?}; use paper or classical")),
        }
    }
}

/// How a gain record is read off the capital register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainFormula {
    /// Expected capital minus the initial capital, in dollars.
    Integer,
    /// Parity-weighted readout `sum_v P(v) (-1)^popcount(v)`, in [-1, 1].
    SigmaZ,
}

impl fmt::Display for GainFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GainFormula::Integer => write!(f, "integer"),
            GainFormula::SigmaZ => write!(f, "sigmaz"),
        }
    }
}

impl FromStr for GainFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "integer" => Ok(GainFormula::Integer),
            "sigmaz" => Ok(GainFormula::SigmaZ),
            other => Err(format!("unknown gain formula {other:?}; use integer or sigmaz")),
        }
    }
}

/// Everything one quantum run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumGameConfig {
    pub params_a: GateParams,
    pub params_b1: GateParams,
    pub params_b2: GateParams,
    pub capital_qubits: usize,
    pub offset: i64,
    pub b_mapping: BMapping,
    pub gain_formula: GainFormula,
}

impl QuantumGameConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        params_a: GateParams,
        params_b1: GateParams,
        params_b2: GateParams,
        capital_qubits: usize,
        offset: i64,
        b_mapping: BMapping,
        gain_formula: GainFormula,
    ) -> Result<Self, QuantumError> {
        params_a.validate()?;
        params_b1.validate()?;
        params_b2.validate()?;
        let layout = RegisterLayout::new(capital_qubits)?;
        layout.initial_capital(offset)?;
        Ok(Self {
            params_a,
            params_b1,
            params_b2,
            capital_qubits,
            offset,
            b_mapping,
            gain_formula,
        })
    }

    /// The standard coefficient set with default conventions.
    pub fn table1(capital_qubits: usize, offset: i64) -> Result<Self, QuantumError> {
        Self::new(
            GateParams::preset_a(),
            GateParams::preset_b1(),
            GateParams::preset_b2(),
            capital_qubits,
            offset,
            BMapping::Paper,
            GainFormula::Integer,
        )
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new(self.capital_qubits).expect("validated at construction")
    }

    pub fn with_offset(&self, offset: i64) -> Result<Self, QuantumError> {
        let mut cfg = self.clone();
        self.layout().initial_capital(offset)?;
        cfg.offset = offset;
        Ok(cfg)
    }
}

/// CID: increment the capital when the coin is |1>, decrement when |0>.
pub fn cid_circuit(layout: &RegisterLayout) -> Vec<CircuitOp> {
    vec![
        CircuitOp::AddConst {
            reg: layout.capital_range(),
            delta: 1,
            controls: ControlSpec::positive(layout.coin_qubit()),
        },
        CircuitOp::AddConst {
            reg: layout.capital_range(),
            delta: -1,
            controls: ControlSpec::negative(layout.coin_qubit()),
        },
    ]
}

/// Write (or unwrite) capital mod 3 into the `o1 o2` accumulator.
pub fn mod3_op(layout: &RegisterLayout, inverse: bool) -> CircuitOp {
    let [o1, o2, _] = layout.ancilla_qubits();
    CircuitOp::Mod3 {
        reg: layout.capital_range(),
        low: o1,
        high: o2,
        inverse,
    }
}

/// Flip `o3` where `o1 = o2 = 0`, i.e. exactly on the multiple-of-three
/// subspace once the accumulator holds capital mod 3. Self-inverse.
pub fn flag_op(layout: &RegisterLayout) -> CircuitOp {
    let [o1, o2, o3] = layout.ancilla_qubits();
    CircuitOp::Controlled {
        target: o3,
        gate: Matrix2::pauli_x(),
        controls: ControlSpec::new(vec![(o1, Polarity::Negative), (o2, Polarity::Negative)])
            .expect("distinct ancilla qubits"),
    }
}

/// Game A: coin gate, then CID.
pub fn game_a_circuit(
    layout: &RegisterLayout,
    params_a: &GateParams,
) -> Result<Vec<CircuitOp>, GateError> {
    let mut ops = vec![CircuitOp::Single {
        target: layout.coin_qubit(),
        gate: compose_gate(params_a)?,
    }];
    ops.extend(cid_circuit(layout));
    Ok(ops)
}

/// Game B: mod3, flag, per-branch coin gates, unflag, uncompute, CID.
pub fn game_b_circuit(
    layout: &RegisterLayout,
    params_b1: &GateParams,
    params_b2: &GateParams,
    b_mapping: BMapping,
) -> Result<Vec<CircuitOp>, GateError> {
    let [_, _, o3] = layout.ancilla_qubits();
    let (on_multiple, otherwise) = match b_mapping {
        BMapping::Paper => (params_b2, params_b1),
        BMapping::Classical => (params_b1, params_b2),
    };
    let mut ops = vec![
        mod3_op(layout, false),
        flag_op(layout),
        CircuitOp::Controlled {
            target: layout.coin_qubit(),
            gate: compose_gate(&on_multiple.without_phase())?,
            controls: ControlSpec::positive(o3),
        },
        CircuitOp::Controlled {
            target: layout.coin_qubit(),
            gate: compose_gate(&otherwise.without_phase())?,
            controls: ControlSpec::negative(o3),
        },
        flag_op(layout),
        mod3_op(layout, true),
    ];
    ops.extend(cid_circuit(layout));
    Ok(ops)
}

/// Total probability outside the `|000>` ancilla subspace.
pub fn ancilla_leakage(state: &StateVector, layout: &RegisterLayout) -> f64 {
    let shift = layout.capital_qubits() + 1;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i >> shift) & 0b111 != 0)
        .map(|(_, amp)| amp.norm_sqr())
        .sum()
}

fn check_layout(state: &StateVector, layout: &RegisterLayout) -> Result<(), EngineError> {
    if state.qubit_count() != layout.total_qubits() {
        return Err(EngineError::LayoutMismatch {
            state: state.qubit_count(),
            layout: layout.total_qubits(),
        });
    }
    Ok(())
}

pub fn cid(state: &mut StateVector, layout: &RegisterLayout) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    state.apply_circuit(&cid_circuit(layout))?;
    Ok(())
}

pub fn mod3_compute(state: &mut StateVector, layout: &RegisterLayout) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    state.apply_op(&mod3_op(layout, false))?;
    Ok(())
}

pub fn mod3_uncompute(state: &mut StateVector, layout: &RegisterLayout) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    state.apply_op(&mod3_op(layout, true))?;
    Ok(())
}

pub fn flag_multiple_of_three(
    state: &mut StateVector,
    layout: &RegisterLayout,
) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    state.apply_op(&flag_op(layout))?;
    Ok(())
}

pub fn game_a(
    state: &mut StateVector,
    layout: &RegisterLayout,
    config: &QuantumGameConfig,
) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    debug_assert!(ancilla_leakage(state, layout) < ANCILLA_LEAK_TOL);
    state.apply_circuit(&game_a_circuit(layout, &config.params_a)?)?;
    debug_assert!(ancilla_leakage(state, layout) < ANCILLA_LEAK_TOL);
    Ok(())
}

pub fn game_b(
    state: &mut StateVector,
    layout: &RegisterLayout,
    config: &QuantumGameConfig,
) -> Result<(), QuantumError> {
    check_layout(state, layout)?;
    debug_assert!(ancilla_leakage(state, layout) < ANCILLA_LEAK_TOL);
    state.apply_circuit(&game_b_circuit(
        layout,
        &config.params_b1,
        &config.params_b2,
        config.b_mapping,
    )?)?;
    debug_assert!(ancilla_leakage(state, layout) < ANCILLA_LEAK_TOL);
    Ok(())
}

/// `sum_v P(capital = v) * (v - initial_capital)`.
pub fn expected_capital_gain(
    state: &StateVector,
    layout: &RegisterLayout,
    initial_capital: f64,
) -> Result<f64, EngineError> {
    check_layout(state, layout)?;
    let probs = state.register_distribution(layout.capital_range())?;
    Ok(probs
        .iter()
        .enumerate()
        .map(|(v, p)| p * (v as f64 - initial_capital))
        .sum())
}

/// Parity readout over the capital bits:
/// `sum_v P(capital = v) * (-1)^popcount(v)`.
pub fn sigma_z_expectation(
    state: &StateVector,
    layout: &RegisterLayout,
) -> Result<f64, EngineError> {
    check_layout(state, layout)?;
    let probs = state.register_distribution(layout.capital_range())?;
    Ok(probs
        .iter()
        .enumerate()
        .map(|(v, p)| {
            if (v as u64).count_ones() % 2 == 0 {
                *p
            } else {
                -p
            }
        })
        .sum())
}

fn bit_length(x: u64) -> usize {
    (64 - x.leading_zeros()) as usize
}

/// Default capital-register size for a run of `games` elementary games:
/// enough bits to hold `games + |offset|`, with a floor of 2. For 2000
/// games at offset 0 this is 11 capital qubits (15 total).
pub fn auto_capital_qubits(games: usize, offset: i64) -> usize {
    bit_length(games as u64 + offset.unsigned_abs() + 1).max(2)
}

/// Smallest register size whose capacity admits the run: `games <= 2^n`
/// and the initial capital in range.
pub fn minimum_capital_qubits(games: usize, offset: i64) -> usize {
    let mut n = 2usize;
    loop {
        let capacity = 1u64 << n;
        let mid = (capacity / 2) as i64;
        let fits = games as u64 <= capacity && offset >= -mid && offset < mid;
        if fits {
            return n;
        }
        n += 1;
    }
}

fn config_meta(config: &QuantumGameConfig, strategy: &Strategy, iterations: usize) -> RunMeta {
    let games = iterations * strategy.len();
    let layout = config.layout();
    RunMeta::new("quantum", strategy.to_string(), games, iterations)
        .with_param("delta_a", config.params_a.delta)
        .with_param("alpha_a", config.params_a.alpha)
        .with_param("beta_a", config.params_a.beta)
        .with_param("theta_a", config.params_a.theta)
        .with_param("delta_b1", config.params_b1.delta)
        .with_param("alpha_b1", config.params_b1.alpha)
        .with_param("beta_b1", config.params_b1.beta)
        .with_param("theta_b1", config.params_b1.theta)
        .with_param("delta_b2", config.params_b2.delta)
        .with_param("alpha_b2", config.params_b2.alpha)
        .with_param("beta_b2", config.params_b2.beta)
        .with_param("theta_b2", config.params_b2.theta)
        .with_param("capital_qubits", config.capital_qubits)
        .with_param("total_qubits", layout.total_qubits())
        .with_param("offset", config.offset)
        .with_param(
            "initial_capital",
            layout
                .initial_capital(config.offset)
                .expect("validated at construction"),
        )
        .with_param("b_mapping", config.b_mapping)
        .with_param("gain_formula", config.gain_formula)
}

/// Initialize, play the strategy cyclically for `iterations` repetitions,
/// and record the expected gain after every elementary game.
pub fn run_strategy(
    config: &QuantumGameConfig,
    strategy: &Strategy,
    iterations: usize,
) -> Result<GainSeries, QuantumError> {
    if iterations == 0 {
        return Err(QuantumError::ZeroIterations);
    }
    let games = iterations * strategy.len();
    let layout = config.layout();
    if games as u64 > layout.capital_capacity() {
        return Err(QuantumError::CapacityExceeded {
            games,
            capital_qubits: config.capital_qubits,
            min_capital_qubits: minimum_capital_qubits(games, config.offset),
        });
    }
    let mut state = init_state(&layout, config.offset)?;
    let initial_capital = layout.initial_capital(config.offset)? as f64;

    let a_ops = game_a_circuit(&layout, &config.params_a)?;
    let b_ops = game_b_circuit(&layout, &config.params_b1, &config.params_b2, config.b_mapping)?;

    let mut records = Vec::with_capacity(games);
    for step in 0..games {
        let ops = match strategy.token_at(step) {
            GameToken::A => &a_ops,
            GameToken::B => &b_ops,
        };
        state.apply_circuit(ops)?;
        debug_assert!(
            ancilla_leakage(&state, &layout) < ANCILLA_LEAK_TOL,
            "ancilla leaked at step {step}"
        );
        let expected_gain = match config.gain_formula {
            GainFormula::Integer => expected_capital_gain(&state, &layout, initial_capital)?,
            GainFormula::SigmaZ => sigma_z_expectation(&state, &layout)?,
        };
        records.push(GainRecord {
            step: step + 1,
            expected_gain,
            std_error: None,
        });
    }

    Ok(GainSeries {
        meta: config_meta(config, strategy, iterations),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn zero_params() -> GateParams {
        GateParams::new(0.0, 0.0, 0.0, 0.0).unwrap()
    }

    fn identity_config(capital_qubits: usize, offset: i64) -> QuantumGameConfig {
        QuantumGameConfig::new(
            zero_params(),
            zero_params(),
            zero_params(),
            capital_qubits,
            offset,
            BMapping::Paper,
            GainFormula::Integer,
        )
        .unwrap()
    }

    fn basis(layout: &RegisterLayout, coin: u64, capital: u64, ancilla: u64) -> StateVector {
        StateVector::basis_state(layout.total_qubits(), layout.basis_index(coin, capital, ancilla))
    }

    fn sole_basis_index(state: &StateVector) -> usize {
        let mut found = None;
        for (i, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm() > 1e-12 {
                assert!((amp - Complex64::new(1.0, 0.0)).norm() < 1e-12, "amp {amp} at {i}");
                assert!(found.is_none(), "state is not a basis state");
                found = Some(i);
            }
        }
        found.expect("state is zero")
    }

    #[test]
    fn cid_moves_capital_by_coin() {
        let layout = RegisterLayout::new(4).unwrap();

        let mut state = basis(&layout, 1, 8, 0);
        cid(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(1, 9, 0));

        let mut state = basis(&layout, 0, 8, 0);
        cid(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 7, 0));
    }

    #[test]
    fn cid_matches_classical_permutation_exhaustively() {
        let layout = RegisterLayout::new(4).unwrap();
        let dim = 1usize << layout.total_qubits();
        for index in 0..dim {
            let mut state = StateVector::basis_state(layout.total_qubits(), index);
            cid(&mut state, &layout).unwrap();
            let coin = layout.coin_of(index);
            let capital = layout.capital_of(index);
            let capacity = layout.capital_capacity();
            let expected_capital = if coin == 1 {
                (capital + 1) % capacity
            } else {
                (capital + capacity - 1) % capacity
            };
            let expected = layout.basis_index(coin, expected_capital, layout.ancilla_of(index));
            assert_eq!(sole_basis_index(&state), expected);
        }
    }

    #[test]
    fn mod3_writes_residue_into_accumulator() {
        let layout = RegisterLayout::new(4).unwrap();

        let mut state = basis(&layout, 0, 6, 0);
        mod3_compute(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 6, 0));

        let mut state = basis(&layout, 0, 7, 0);
        mod3_compute(&mut state, &layout).unwrap();
        // 7 mod 3 = 1 -> o1 = 1, o2 = 0
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 7, 0b001));
    }

    #[test]
    fn mod3_matches_classical_map_for_all_register_sizes() {
        for n in 2..=8 {
            let layout = RegisterLayout::new(n).unwrap();
            for capital in 0..layout.capital_capacity() {
                for b in 0..4u64 {
                    let mut state = basis(&layout, 0, capital, b);
                    mod3_compute(&mut state, &layout).unwrap();
                    let expected_b = (b + capital % 3) % 4;
                    assert_eq!(
                        sole_basis_index(&state),
                        layout.basis_index(0, capital, expected_b),
                        "n={n} capital={capital} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn mod3_uncompute_is_exact_inverse() {
        let layout = RegisterLayout::new(4).unwrap();

        let mut state = basis(&layout, 0, 7, 0b001);
        mod3_uncompute(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 7, 0));

        // bit-exact round trip on a random 9-qubit state (n = 5)
        let layout = RegisterLayout::new(5).unwrap();
        let mut state = StateVector::random_normalized(layout.total_qubits(), 77);
        let before = state.clone();
        mod3_compute(&mut state, &layout).unwrap();
        mod3_uncompute(&mut state, &layout).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn flag_fires_exactly_on_zero_accumulator() {
        let layout = RegisterLayout::new(4).unwrap();

        let mut state = basis(&layout, 0, 5, 0b000);
        flag_multiple_of_three(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 5, 0b100));

        let mut state = basis(&layout, 0, 5, 0b010);
        flag_multiple_of_three(&mut state, &layout).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 5, 0b010));

        // involution
        let mut state = StateVector::random_normalized(layout.total_qubits(), 3);
        let before = state.clone();
        flag_multiple_of_three(&mut state, &layout).unwrap();
        flag_multiple_of_three(&mut state, &layout).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn game_a_with_identity_coin_splits_symmetrically() {
        let layout = RegisterLayout::new(5).unwrap();
        let config = identity_config(5, 0);
        let mut state = init_state(&layout, 0).unwrap();
        game_a(&mut state, &layout, &config).unwrap();
        let gain = expected_capital_gain(&state, &layout, 16.0).unwrap();
        assert!(gain.abs() < 1e-12);
        let probs = state.register_distribution(layout.capital_range()).unwrap();
        assert!((probs[15] - 0.5).abs() < 1e-12);
        assert!((probs[17] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn game_a_with_flip_coin_traced_by_hand() {
        let layout = RegisterLayout::new(4).unwrap();
        let mut config = identity_config(4, 0);
        config.params_a = GateParams::new(0.0, 0.0, 0.0, std::f64::consts::PI).unwrap();
        let mut state = basis(&layout, 0, 8, 0);
        game_a(&mut state, &layout, &config).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(1, 9, 0));
    }

    #[test]
    fn game_b_with_identity_coins_reduces_to_cid() {
        let layout = RegisterLayout::new(5).unwrap();
        let config = identity_config(5, 0);
        let mut state = init_state(&layout, 0).unwrap();
        let mut reference = state.clone();
        game_b(&mut state, &layout, &config).unwrap();
        cid(&mut reference, &layout).unwrap();
        assert!(state.max_amplitude_diff(&reference) < 1e-15);
        let gain = expected_capital_gain(&state, &layout, 16.0).unwrap();
        assert!(gain.abs() < 1e-12);
    }

    #[test]
    fn game_b_applies_b2_on_multiples_of_three_under_paper_mapping() {
        let layout = RegisterLayout::new(4).unwrap();
        let mut config = identity_config(4, 0);
        config.params_b2 = GateParams::new(0.0, 0.0, 0.0, std::f64::consts::PI).unwrap();
        // capital 9 is a multiple of three: B2 flips the coin, CID pays out
        let mut state = basis(&layout, 0, 9, 0);
        game_b(&mut state, &layout, &config).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(1, 10, 0));

        // capital 8 is not: identity B1 leaves the coin, CID deducts
        let mut state = basis(&layout, 0, 8, 0);
        game_b(&mut state, &layout, &config).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 7, 0));

        // classical mapping swaps the branches
        config.b_mapping = BMapping::Classical;
        let mut state = basis(&layout, 0, 9, 0);
        game_b(&mut state, &layout, &config).unwrap();
        assert_eq!(sole_basis_index(&state), layout.basis_index(0, 8, 0));
    }

    #[test]
    fn ancilla_returns_home_after_each_game() {
        let layout = RegisterLayout::new(6).unwrap();
        let config = QuantumGameConfig::table1(6, 0).unwrap();
        let mut state = init_state(&layout, 0).unwrap();
        for _ in 0..10 {
            game_b(&mut state, &layout, &config).unwrap();
            assert!(ancilla_leakage(&state, &layout) < ANCILLA_LEAK_TOL);
            game_a(&mut state, &layout, &config).unwrap();
            assert!(ancilla_leakage(&state, &layout) < ANCILLA_LEAK_TOL);
        }
    }

    #[test]
    fn gain_formula_examples() {
        let layout = RegisterLayout::new(4).unwrap();
        let state = init_state(&layout, 0).unwrap();
        assert!(expected_capital_gain(&state, &layout, 8.0).unwrap().abs() < 1e-12);
        // capital 8 = 0b1000 has odd popcount
        assert!((sigma_z_expectation(&state, &layout).unwrap() + 1.0).abs() < 1e-12);

        let state = basis(&layout, 0, 9, 0);
        assert!((expected_capital_gain(&state, &layout, 8.0).unwrap() - 1.0).abs() < 1e-12);

        let state = basis(&layout, 0, 7, 0);
        assert!((sigma_z_expectation(&state, &layout).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_z_vanishes_on_uniform_distribution() {
        let layout = RegisterLayout::new(3).unwrap();
        let dim = 1usize << layout.total_qubits();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        let amp = Complex64::new((8f64).sqrt().recip(), 0.0);
        for v in 0..8 {
            amps[layout.basis_index(0, v, 0)] = amp;
        }
        let state = StateVector::from_amplitudes(amps);
        assert!(sigma_z_expectation(&state, &layout).unwrap().abs() < 1e-12);
    }

    #[test]
    fn run_strategy_records_zero_gain_for_identity_gates() {
        let config = identity_config(6, 0);
        let strategy: Strategy = "A".parse().unwrap();
        let series = run_strategy(&config, &strategy, 10).unwrap();
        assert_eq!(series.len(), 10);
        for record in &series.records {
            assert!(record.expected_gain.abs() < 1e-9, "step {}", record.step);
        }
        assert_eq!(series.records[0].step, 1);
        assert_eq!(series.records[9].step, 10);
    }

    #[test]
    fn run_strategy_enforces_register_capacity() {
        let config = QuantumGameConfig::table1(5, 0).unwrap();
        let strategy: Strategy = "ABBAB".parse().unwrap();
        let err = run_strategy(&config, &strategy, 400).unwrap_err();
        match err {
            QuantumError::CapacityExceeded {
                games,
                capital_qubits,
                min_capital_qubits,
            } => {
                assert_eq!(games, 2000);
                assert_eq!(capital_qubits, 5);
                assert_eq!(min_capital_qubits, 11);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn auto_sizing_matches_flagship_run() {
        assert_eq!(auto_capital_qubits(2000, 0), 11);
        assert_eq!(auto_capital_qubits(2000, 3), 11);
        assert_eq!(auto_capital_qubits(1, 0), 2);
        assert_eq!(auto_capital_qubits(16, 0), 5);
        // 11 capital qubits means 15 total
        let layout = RegisterLayout::new(auto_capital_qubits(2000, 0)).unwrap();
        assert_eq!(layout.total_qubits(), 15);
    }

    #[test]
    fn zero_iterations_rejected() {
        let config = identity_config(4, 0);
        let strategy: Strategy = "A".parse().unwrap();
        assert_eq!(
            run_strategy(&config, &strategy, 0).unwrap_err(),
            QuantumError::ZeroIterations
        );
    }

    #[test]
    fn support_stays_confined_with_matching_parity() {
        let config = QuantumGameConfig::table1(6, 0).unwrap();
        let layout = config.layout();
        let strategy: Strategy = "ABBAB".parse().unwrap();
        let iterations = 4; // 20 games, well inside the 64-value register
        let games = iterations * strategy.len();
        let series = run_strategy(&config, &strategy, iterations).unwrap();
        assert_eq!(series.len(), games);

        let mut state = init_state(&layout, 0).unwrap();
        let c0 = layout.initial_capital(0).unwrap() as i64;
        for step in 0..games {
            match strategy.token_at(step) {
                GameToken::A => game_a(&mut state, &layout, &config).unwrap(),
                GameToken::B => game_b(&mut state, &layout, &config).unwrap(),
            }
            let k = step as i64 + 1;
            let probs = state.register_distribution(layout.capital_range()).unwrap();
            for (v, &p) in probs.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let v = v as i64;
                assert!(v >= c0 - k && v <= c0 + k, "step {k}: stray support at {v}");
                assert_eq!((v - (c0 + k)).rem_euclid(2), 0, "step {k}: parity break at {v}");
            }
        }
    }

    #[test]
    fn changing_delta_leaves_gain_series_unchanged() {
        let strategy: Strategy = "ABBAB".parse().unwrap();
        let base = QuantumGameConfig::table1(7, 0).unwrap();
        let baseline = run_strategy(&base, &strategy, 8).unwrap();

        for (da, db1, db2) in [(0.7, 0.0, 0.0), (0.0, 1.1, 0.0), (0.0, 0.0, -2.3), (0.4, 0.9, 1.7)] {
            let mut config = base.clone();
            config.params_a.delta = da;
            config.params_b1.delta = db1;
            config.params_b2.delta = db2;
            let shifted = run_strategy(&config, &strategy, 8).unwrap();
            for (a, b) in baseline.records.iter().zip(&shifted.records) {
                assert!(
                    (a.expected_gain - b.expected_gain).abs() < 1e-12,
                    "step {}: {} vs {}",
                    a.step,
                    a.expected_gain,
                    b.expected_gain
                );
            }
        }
    }

    #[test]
    fn convention_toggles_preserve_invariants() {
        let strategy: Strategy = "AB".parse().unwrap();
        for b_mapping in [BMapping::Paper, BMapping::Classical] {
            for gain_formula in [GainFormula::Integer, GainFormula::SigmaZ] {
                let mut config = QuantumGameConfig::table1(6, 1).unwrap();
                config.b_mapping = b_mapping;
                config.gain_formula = gain_formula;
                let layout = config.layout();
                let mut state = init_state(&layout, 1).unwrap();
                for _ in 0..8 {
                    game_b(&mut state, &layout, &config).unwrap();
                    game_a(&mut state, &layout, &config).unwrap();
                }
                assert!((state.norm() - 1.0).abs() < 1e-9);
                assert!(ancilla_leakage(&state, &layout) < ANCILLA_LEAK_TOL);
                let series = run_strategy(&config, &strategy, 8).unwrap();
                assert_eq!(series.len(), 16);
            }
        }
    }
}
