//! In-place statevector kernels over the coin + capital + ancilla register.
//!
//! Basis indices are little-endian: qubit `k` contributes `2^k` to the
//! index. The register assignment is fixed so that outputs and oracle
//! comparisons are bit-exact:
//!
//! - coin: qubit 0,
//! - capital: qubits `1..=n`, value LSB at qubit 1,
//! - ancilla `o1, o2, o3`: qubits `n+1, n+2, n+3`.
//!
//! Every operation is `O(2^m)` over the `m = n + 4` qubit state and updates
//! amplitudes in place; register arithmetic wraps mod `2^n` (callers are
//! responsible for keeping the walk away from the register boundary).

use crate::gate::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;
use thiserror::Error;

/// Probabilities below this are reported as exactly zero in distributions.
pub const DISTRIBUTION_FLOOR: f64 = 1e-15;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("capital register needs at least 2 qubits, got {0}")]
    CapitalTooSmall(usize),
    #[error(
        "offset {offset} puts the initial capital outside the {capital_qubits}-qubit register; \
         valid offsets are [{lo}, {hi}]"
    )]
    OffsetOutOfRange {
        offset: i64,
        capital_qubits: usize,
        lo: i64,
        hi: i64,
    },
    #[error("qubit index {qubit} out of range for a {total}-qubit state")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("duplicate control on qubit {0}")]
    DuplicateControl(usize),
    #[error("target qubit {0} is also listed as a control")]
    TargetInControls(usize),
    #[error("control qubit {0} overlaps the target register")]
    ControlInRegister(usize),
    #[error("register range {start}..{end} invalid for a {total}-qubit state")]
    RegisterOutOfRange {
        start: usize,
        end: usize,
        total: usize,
    },
    #[error("register delta must be +1 or -1, got {0}")]
    InvalidDelta(i64),
    #[error("state has {state} qubits but the layout expects {layout}")]
    LayoutMismatch { state: usize, layout: usize },
}

/// Fixed qubit-index assignment for one simulation: coin, capital, ancilla.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    capital_qubits: usize,
}

impl RegisterLayout {
    pub fn new(capital_qubits: usize) -> Result<Self, EngineError> {
        if capital_qubits < 2 {
            return Err(EngineError::CapitalTooSmall(capital_qubits));
        }
        Ok(Self { capital_qubits })
    }

    pub fn capital_qubits(&self) -> usize {
        self.capital_qubits
    }

    pub fn coin_qubit(&self) -> usize {
        0
    }

    pub fn capital_range(&self) -> Range<usize> {
        1..self.capital_qubits + 1
    }

    /// `[o1, o2, o3]`.
    pub fn ancilla_qubits(&self) -> [usize; 3] {
        let n = self.capital_qubits;
        [n + 1, n + 2, n + 3]
    }

    pub fn total_qubits(&self) -> usize {
        self.capital_qubits + 4
    }

    /// Number of representable capital values, `2^n`.
    pub fn capital_capacity(&self) -> u64 {
        1u64 << self.capital_qubits
    }

    /// Register midpoint `2^(n-1)`, the zero-offset initial capital.
    pub fn capital_midpoint(&self) -> u64 {
        1u64 << (self.capital_qubits - 1)
    }

    /// Initial capital `2^(n-1) + offset`, checked against the register range.
    pub fn initial_capital(&self, offset: i64) -> Result<u64, EngineError> {
        let mid = self.capital_midpoint() as i64;
        let capital = mid + offset;
        if capital < 0 || capital >= self.capital_capacity() as i64 {
            return Err(EngineError::OffsetOutOfRange {
                offset,
                capital_qubits: self.capital_qubits,
                lo: -mid,
                hi: self.capital_capacity() as i64 - mid - 1,
            });
        }
        Ok(capital as u64)
    }

    pub fn basis_index(&self, coin: u64, capital: u64, ancilla: u64) -> usize {
        debug_assert!(coin < 2);
        debug_assert!(capital < self.capital_capacity());
        debug_assert!(ancilla < 8);
        (coin as usize)
            | ((capital as usize) << 1)
            | ((ancilla as usize) << (self.capital_qubits + 1))
    }

    pub fn coin_of(&self, index: usize) -> u64 {
        (index & 1) as u64
    }

    pub fn capital_of(&self, index: usize) -> u64 {
        ((index >> 1) as u64) & (self.capital_capacity() - 1)
    }

    pub fn ancilla_of(&self, index: usize) -> u64 {
        ((index >> (self.capital_qubits + 1)) as u64) & 0b111
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// Control fires when the qubit is |1>.
    Positive,
    /// Control fires when the qubit is |0>.
    Negative,
}

/// A set of polarity-aware controls; the empty set is always satisfied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ControlSpec {
    controls: Vec<(usize, Polarity)>,
    mask: usize,
    value: usize,
}

impl ControlSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(controls: Vec<(usize, Polarity)>) -> Result<Self, EngineError> {
        let mut mask = 0usize;
        let mut value = 0usize;
        for &(qubit, polarity) in &controls {
            let bit = 1usize << qubit;
            if mask & bit != 0 {
                return Err(EngineError::DuplicateControl(qubit));
            }
            mask |= bit;
            if polarity == Polarity::Positive {
                value |= bit;
            }
        }
        Ok(Self {
            controls,
            mask,
            value,
        })
    }

    pub fn positive(qubit: usize) -> Self {
        Self::new(vec![(qubit, Polarity::Positive)]).expect("single control cannot clash")
    }

    pub fn negative(qubit: usize) -> Self {
        Self::new(vec![(qubit, Polarity::Negative)]).expect("single control cannot clash")
    }

    pub fn controls(&self) -> &[(usize, Polarity)] {
        &self.controls
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn contains(&self, qubit: usize) -> bool {
        self.mask & (1usize << qubit) != 0
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.controls.iter().map(|&(q, _)| q).max()
    }

    #[inline]
    pub fn satisfied(&self, index: usize) -> bool {
        index & self.mask == self.value
    }
}

/// One primitive circuit operation, interpretable both by the in-place
/// engine and by the dense oracle.
#[derive(Clone, Debug)]
pub enum CircuitOp {
    Single {
        target: usize,
        gate: Matrix2,
    },
    Controlled {
        target: usize,
        gate: Matrix2,
        controls: ControlSpec,
    },
    /// Add `delta` (+1 or -1) to the register value, mod `2^len`.
    AddConst {
        reg: Range<usize>,
        delta: i64,
        controls: ControlSpec,
    },
    /// Add the register value mod 3 into the two-bit accumulator
    /// (`low` holds the accumulator LSB); `inverse` subtracts instead.
    Mod3 {
        reg: Range<usize>,
        low: usize,
        high: usize,
        inverse: bool,
    },
}

impl CircuitOp {
    /// The exact inverse operation.
    pub fn inverse(&self) -> CircuitOp {
        match self {
            CircuitOp::Single { target, gate } => CircuitOp::Single {
                target: *target,
                gate: gate.adjoint(),
            },
            CircuitOp::Controlled {
                target,
                gate,
                controls,
            } => CircuitOp::Controlled {
                target: *target,
                gate: gate.adjoint(),
                controls: controls.clone(),
            },
            CircuitOp::AddConst {
                reg,
                delta,
                controls,
            } => CircuitOp::AddConst {
                reg: reg.clone(),
                delta: -delta,
                controls: controls.clone(),
            },
            CircuitOp::Mod3 {
                reg,
                low,
                high,
                inverse,
            } => CircuitOp::Mod3 {
                reg: reg.clone(),
                low: *low,
                high: *high,
                inverse: !inverse,
            },
        }
    }
}

/// Full complex amplitude vector of an `m`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubit_count: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state `|index>`.
    pub fn basis_state(qubit_count: usize, index: usize) -> Self {
        let dim = 1usize << qubit_count;
        assert!(index < dim, "basis index {index} out of range for {qubit_count} qubits");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { qubit_count, amps }
    }

    /// A reproducible random normalized state (testing / validation input).
    pub fn random_normalized(qubit_count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 1usize << qubit_count;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { qubit_count, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        let qubit_count = amps.len().trailing_zeros() as usize;
        assert_eq!(1usize << qubit_count, amps.len(), "length must be a power of two");
        Self { qubit_count, amps }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_amplitude_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), EngineError> {
        if qubit >= self.qubit_count {
            return Err(EngineError::QubitOutOfRange {
                qubit,
                total: self.qubit_count,
            });
        }
        Ok(())
    }

    fn check_register(&self, reg: &Range<usize>) -> Result<(), EngineError> {
        if reg.start >= reg.end || reg.end > self.qubit_count {
            return Err(EngineError::RegisterOutOfRange {
                start: reg.start,
                end: reg.end,
                total: self.qubit_count,
            });
        }
        Ok(())
    }

    fn check_controls(&self, controls: &ControlSpec, target: usize) -> Result<(), EngineError> {
        if let Some(max) = controls.max_qubit() {
            self.check_qubit(max)?;
        }
        if controls.contains(target) {
            return Err(EngineError::TargetInControls(target));
        }
        Ok(())
    }

    /// 2x2 mixing over amplitude pairs differing in the target bit.
    pub fn apply_single_qubit(&mut self, gate: &Matrix2, target: usize) -> Result<(), EngineError> {
        self.check_qubit(target)?;
        let step = 1usize << target;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for offset in 0..step {
                let j = base + offset;
                let k = j + step;
                let a = self.amps[j];
                let b = self.amps[k];
                self.amps[j] = gate.e00 * a + gate.e01 * b;
                self.amps[k] = gate.e10 * a + gate.e11 * b;
            }
            base += 2 * step;
        }
        Ok(())
    }

    /// Same mixing, restricted to the subspace where every positive control
    /// is 1 and every negative control is 0.
    pub fn apply_controlled(
        &mut self,
        gate: &Matrix2,
        target: usize,
        controls: &ControlSpec,
    ) -> Result<(), EngineError> {
        self.check_qubit(target)?;
        self.check_controls(controls, target)?;
        if controls.is_empty() {
            return self.apply_single_qubit(gate, target);
        }
        let t = 1usize << target;
        for i in 0..self.amps.len() {
            if i & t != 0 || !controls.satisfied(i) {
                continue;
            }
            let j = i | t;
            let a = self.amps[i];
            let b = self.amps[j];
            self.amps[i] = gate.e00 * a + gate.e01 * b;
            self.amps[j] = gate.e10 * a + gate.e11 * b;
        }
        Ok(())
    }

    /// Map register value `v` to `(v + delta) mod 2^len` on the
    /// control-satisfied subspace — a pure permutation of amplitudes,
    /// realized as an in-place rotation of each strided register slice.
    pub fn add_to_register(
        &mut self,
        reg: Range<usize>,
        delta: i64,
        controls: &ControlSpec,
    ) -> Result<(), EngineError> {
        self.check_register(&reg)?;
        if delta != 1 && delta != -1 {
            return Err(EngineError::InvalidDelta(delta));
        }
        let width = reg.len();
        let shift = reg.start;
        let count = 1usize << width;
        let reg_mask = (count - 1) << shift;
        for &(q, _) in controls.controls() {
            self.check_qubit(q)?;
            if reg.contains(&q) {
                return Err(EngineError::ControlInRegister(q));
            }
        }
        for base in 0..self.amps.len() {
            if base & reg_mask != 0 || !controls.satisfied(base) {
                continue;
            }
            let idx = |v: usize| base | (v << shift);
            if delta == 1 {
                // new[v + 1] = old[v]
                let saved = self.amps[idx(count - 1)];
                for v in (1..count).rev() {
                    self.amps[idx(v)] = self.amps[idx(v - 1)];
                }
                self.amps[idx(0)] = saved;
            } else {
                // new[v - 1] = old[v]
                let saved = self.amps[idx(0)];
                for v in 0..count - 1 {
                    self.amps[idx(v)] = self.amps[idx(v + 1)];
                }
                self.amps[idx(count - 1)] = saved;
            }
        }
        Ok(())
    }

    /// Basis map |a, b> -> |a, (b ± (a mod 3)) mod 4> where `a` is the
    /// register value and `b` the two-bit accumulator (`low` = LSB).
    pub fn apply_mod3(
        &mut self,
        reg: Range<usize>,
        low: usize,
        high: usize,
        inverse: bool,
    ) -> Result<(), EngineError> {
        self.check_register(&reg)?;
        self.check_qubit(low)?;
        self.check_qubit(high)?;
        if low == high {
            return Err(EngineError::DuplicateControl(low));
        }
        for q in [low, high] {
            if reg.contains(&q) {
                return Err(EngineError::ControlInRegister(q));
            }
        }
        let shift = reg.start;
        let value_mask = (1usize << reg.len()) - 1;
        let low_bit = 1usize << low;
        let high_bit = 1usize << high;
        for i in 0..self.amps.len() {
            if i & (low_bit | high_bit) != 0 {
                continue;
            }
            let a = (i >> shift) & value_mask;
            let mut k = a % 3;
            if inverse {
                k = (4 - k) & 3;
            }
            if k == 0 {
                continue;
            }
            let idx = |b: usize| {
                let mut out = i;
                if b & 1 != 0 {
                    out |= low_bit;
                }
                if b & 2 != 0 {
                    out |= high_bit;
                }
                out
            };
            let saved = [
                self.amps[idx(0)],
                self.amps[idx(1)],
                self.amps[idx(2)],
                self.amps[idx(3)],
            ];
            for (b, &amp) in saved.iter().enumerate() {
                self.amps[idx((b + k) & 3)] = amp;
            }
        }
        Ok(())
    }

    pub fn apply_op(&mut self, op: &CircuitOp) -> Result<(), EngineError> {
        match op {
            CircuitOp::Single { target, gate } => self.apply_single_qubit(gate, *target),
            CircuitOp::Controlled {
                target,
                gate,
                controls,
            } => self.apply_controlled(gate, *target, controls),
            CircuitOp::AddConst {
                reg,
                delta,
                controls,
            } => self.add_to_register(reg.clone(), *delta, controls),
            CircuitOp::Mod3 {
                reg,
                low,
                high,
                inverse,
            } => self.apply_mod3(reg.clone(), *low, *high, *inverse),
        }
    }

    pub fn apply_circuit(&mut self, ops: &[CircuitOp]) -> Result<(), EngineError> {
        for op in ops {
            self.apply_op(op)?;
        }
        Ok(())
    }

    /// Probability table over register values, floored at
    /// [`DISTRIBUTION_FLOOR`].
    pub fn register_distribution(&self, reg: Range<usize>) -> Result<Vec<f64>, EngineError> {
        self.check_register(&reg)?;
        let shift = reg.start;
        let value_mask = (1usize << reg.len()) - 1;
        let mut probs = vec![0.0f64; 1usize << reg.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            probs[(i >> shift) & value_mask] += amp.norm_sqr();
        }
        for p in &mut probs {
            if *p < DISTRIBUTION_FLOOR {
                *p = 0.0;
            }
        }
        Ok(probs)
    }

    /// One terminal-measurement sample of the register; the state is left
    /// untouched. Deterministic in `seed`.
    pub fn measure_sample(&self, reg: Range<usize>, seed: u64) -> Result<u64, EngineError> {
        Ok(self.measure_samples(reg, seed, 1)?[0])
    }

    /// A reproducible sequence of terminal-measurement samples.
    pub fn measure_samples(
        &self,
        reg: Range<usize>,
        seed: u64,
        count: usize,
    ) -> Result<Vec<u64>, EngineError> {
        let probs = self.register_distribution(reg)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut drawn = probs.len() - 1;
            for (v, &p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    drawn = v;
                    break;
                }
            }
            out.push(drawn as u64);
        }
        Ok(out)
    }
}

/// The prepared initial state: coin in `(|0> + |1>)/sqrt(2)`, capital at
/// `2^(n-1) + offset`, ancilla `|000>`.
pub fn init_state(layout: &RegisterLayout, offset: i64) -> Result<StateVector, EngineError> {
    let capital = layout.initial_capital(offset)?;
    let dim = 1usize << layout.total_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let amp = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amps[layout.basis_index(0, capital, 0)] = amp;
    amps[layout.basis_index(1, capital, 0)] = amp;
    Ok(StateVector {
        qubit_count: layout.total_qubits(),
        amps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::rotation_y;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn layout_assignment_is_disjoint_and_covering() {
        let layout = RegisterLayout::new(4).unwrap();
        let mut seen = vec![false; layout.total_qubits()];
        seen[layout.coin_qubit()] = true;
        for q in layout.capital_range() {
            assert!(!seen[q]);
            seen[q] = true;
        }
        for q in layout.ancilla_qubits() {
            assert!(!seen[q]);
            seen[q] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(layout.total_qubits(), 8);
    }

    #[test]
    fn layout_rejects_tiny_capital() {
        assert_eq!(
            RegisterLayout::new(1).unwrap_err(),
            EngineError::CapitalTooSmall(1)
        );
    }

    #[test]
    fn init_state_examples() {
        let layout = RegisterLayout::new(4).unwrap();
        let state = init_state(&layout, 0).unwrap();
        let i0 = layout.basis_index(0, 8, 0);
        let i1 = layout.basis_index(1, 8, 0);
        assert!((state.amplitude(i0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((state.amplitude(i1).re - FRAC_1_SQRT_2).abs() < 1e-15);
        let nonzero = state
            .amplitudes()
            .iter()
            .filter(|a| a.norm() > 0.0)
            .count();
        assert_eq!(nonzero, 2);

        let state = init_state(&layout, 3).unwrap();
        assert!(state.amplitude(layout.basis_index(0, 11, 0)).norm() > 0.0);

        let err = init_state(&layout, 8).unwrap_err();
        match err {
            EngineError::OffsetOutOfRange { lo, hi, .. } => {
                assert_eq!(lo, -8);
                assert_eq!(hi, 7);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn identity_gate_leaves_state_unchanged() {
        let layout = RegisterLayout::new(3).unwrap();
        let mut state = init_state(&layout, 1).unwrap();
        let before = state.clone();
        state
            .apply_single_qubit(&Matrix2::identity(), 2)
            .unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn ry_pi_flips_coin_basis_state() {
        let layout = RegisterLayout::new(2).unwrap();
        let mut state = StateVector::basis_state(layout.total_qubits(), layout.basis_index(0, 2, 0));
        state
            .apply_single_qubit(&rotation_y(std::f64::consts::PI).unwrap(), layout.coin_qubit())
            .unwrap();
        let target = layout.basis_index(1, 2, 0);
        assert!((state.amplitude(target) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ry_half_pi_splits_coin() {
        let mut state = StateVector::basis_state(1, 0);
        state
            .apply_single_qubit(&rotation_y(FRAC_PI_2).unwrap(), 0)
            .unwrap();
        let quarter = std::f64::consts::FRAC_PI_4;
        assert!((state.amplitude(0).re - quarter.cos()).abs() < 1e-15);
        assert!((state.amplitude(1).re - quarter.sin()).abs() < 1e-15);
    }

    #[test]
    fn gate_on_out_of_range_qubit_rejected() {
        let mut state = StateVector::basis_state(3, 0);
        assert!(matches!(
            state.apply_single_qubit(&Matrix2::identity(), 3),
            Err(EngineError::QubitOutOfRange { qubit: 3, total: 3 })
        ));
    }

    #[test]
    fn empty_controls_equal_single_qubit_application() {
        let gate = rotation_y(0.83).unwrap();
        let mut a = StateVector::random_normalized(5, 99);
        let mut b = a.clone();
        a.apply_single_qubit(&gate, 2).unwrap();
        b.apply_controlled(&gate, 2, &ControlSpec::none()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negative_controls_gate_fires_only_on_zero_bits() {
        // X-type gate on qubit 2, negative controls on qubits 0 and 1
        let flip = Matrix2::pauli_x();
        let controls = ControlSpec::new(vec![(0, Polarity::Negative), (1, Polarity::Negative)])
            .unwrap();

        let mut state = StateVector::basis_state(3, 0b000);
        state.apply_controlled(&flip, 2, &controls).unwrap();
        assert!((state.amplitude(0b100) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let mut state = StateVector::basis_state(3, 0b001);
        state.apply_controlled(&flip, 2, &controls).unwrap();
        assert!((state.amplitude(0b001) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn control_overlapping_target_rejected() {
        let mut state = StateVector::basis_state(3, 0);
        let controls = ControlSpec::positive(1);
        assert_eq!(
            state
                .apply_controlled(&Matrix2::identity(), 1, &controls)
                .unwrap_err(),
            EngineError::TargetInControls(1)
        );
        assert!(ControlSpec::new(vec![
            (1, Polarity::Positive),
            (1, Polarity::Negative)
        ])
        .is_err());
    }

    #[test]
    fn add_to_register_examples() {
        let layout = RegisterLayout::new(4).unwrap();
        let reg = layout.capital_range();

        let mut state = StateVector::basis_state(layout.total_qubits(), layout.basis_index(0, 8, 0));
        state
            .add_to_register(reg.clone(), 1, &ControlSpec::none())
            .unwrap();
        assert!(state.amplitude(layout.basis_index(0, 9, 0)).norm() > 0.0);

        let mut state = StateVector::basis_state(layout.total_qubits(), layout.basis_index(0, 0, 0));
        state
            .add_to_register(reg.clone(), -1, &ControlSpec::none())
            .unwrap();
        assert!(state.amplitude(layout.basis_index(0, 15, 0)).norm() > 0.0);

        // coin-positive control on a coin-0 state: no move
        let mut state = StateVector::basis_state(layout.total_qubits(), layout.basis_index(0, 8, 0));
        state
            .add_to_register(reg, 1, &ControlSpec::positive(layout.coin_qubit()))
            .unwrap();
        assert!(state.amplitude(layout.basis_index(0, 8, 0)).norm() > 0.0);
    }

    #[test]
    fn add_then_subtract_restores_state_bit_exactly() {
        let layout = RegisterLayout::new(3).unwrap();
        let mut state = StateVector::random_normalized(layout.total_qubits(), 5);
        let before = state.clone();
        let controls = ControlSpec::positive(layout.coin_qubit());
        state
            .add_to_register(layout.capital_range(), 1, &controls)
            .unwrap();
        state
            .add_to_register(layout.capital_range(), -1, &controls)
            .unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn register_distribution_examples() {
        let layout = RegisterLayout::new(4).unwrap();
        let state = init_state(&layout, 0).unwrap();
        let probs = state.register_distribution(layout.capital_range()).unwrap();
        assert!((probs[8] - 1.0).abs() < 1e-12);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
        amps[layout.basis_index(0, 7, 0)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[layout.basis_index(1, 9, 0)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let state = StateVector::from_amplitudes(amps);
        let probs = state.register_distribution(layout.capital_range()).unwrap();
        assert!((probs[7] - 0.5).abs() < 1e-12);
        assert!((probs[9] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measurement_is_deterministic_and_unbiased() {
        let layout = RegisterLayout::new(4).unwrap();
        let state = init_state(&layout, 0).unwrap();
        for seed in [0, 1, 17] {
            assert_eq!(state.measure_sample(layout.capital_range(), seed).unwrap(), 8);
        }

        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
        amps[layout.basis_index(0, 7, 0)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[layout.basis_index(1, 9, 0)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let state = StateVector::from_amplitudes(amps);

        let samples = state
            .measure_samples(layout.capital_range(), 42, 100_000)
            .unwrap();
        let nines = samples.iter().filter(|&&v| v == 9).count() as f64;
        let freq = nines / samples.len() as f64;
        // 3 sigma for a fair binomial at 1e5 trials is ~0.0047
        assert!((freq - 0.5).abs() < 0.01, "frequency {freq}");

        let again = state
            .measure_samples(layout.capital_range(), 42, 100_000)
            .unwrap();
        assert_eq!(samples, again);
    }

    #[test]
    fn norm_preserved_under_long_random_op_sequences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let layout = RegisterLayout::new(2).unwrap();
        let mut state = init_state(&layout, 0).unwrap();
        for _ in 0..10_000 {
            match rng.random_range(0..4) {
                0 => {
                    let gate = crate::gate::compose_gate(&crate::gate::GateParams {
                        delta: rng.random_range(-3.0..3.0),
                        alpha: rng.random_range(-3.0..3.0),
                        beta: rng.random_range(-3.0..3.0),
                        theta: rng.random_range(-3.0..3.0),
                    })
                    .unwrap();
                    let target = rng.random_range(0..layout.total_qubits());
                    state.apply_single_qubit(&gate, target).unwrap();
                }
                1 => {
                    let gate = rotation_y(rng.random_range(-3.0..3.0)).unwrap();
                    state
                        .apply_controlled(&gate, layout.coin_qubit(), &ControlSpec::negative(layout.ancilla_qubits()[2]))
                        .unwrap();
                }
                2 => {
                    let delta = if rng.random::<bool>() { 1 } else { -1 };
                    state
                        .add_to_register(layout.capital_range(), delta, &ControlSpec::positive(layout.coin_qubit()))
                        .unwrap();
                }
                _ => {
                    let [o1, o2, _] = layout.ancilla_qubits();
                    state
                        .apply_mod3(layout.capital_range(), o1, o2, rng.random::<bool>())
                        .unwrap();
                }
            }
        }
        assert!((state.norm() - 1.0).abs() < 1e-9);
    }
}
