//! Brute-force dense-matrix reference.
//!
//! Builds explicit `2^m x 2^m` matrices for every primitive op and evolves
//! states by plain matrix-vector products. Deliberately naive and capped at
//! 10 qubits; its value is that it shares no code with the in-place engine
//! kernels. Permutation images are recomputed here from the index
//! decomposition rather than reusing the engine's strided rotations.

use crate::engine::{CircuitOp, ControlSpec, StateVector};
use num_complex::Complex64;
use std::ops::Range;
use thiserror::Error;

pub const MAX_ORACLE_QUBITS: usize = 10;

const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{qubits} qubits exceed the dense-oracle cap of {MAX_ORACLE_QUBITS}")]
    QubitCapExceeded { qubits: usize },
    #[error("dimension mismatch: matrix is {matrix}x{matrix}, state has {state} amplitudes")]
    DimensionMismatch { matrix: usize, state: usize },
    #[error("matrices have mismatched dimensions {left} and {right}")]
    MatrixSizeMismatch { left: usize, right: usize },
    #[error("constructed matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
}

/// Explicit row-major `2^m x 2^m` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    qubit_count: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseUnitary {
    fn zeros(qubit_count: usize) -> Result<Self, OracleError> {
        if qubit_count > MAX_ORACLE_QUBITS {
            return Err(OracleError::QubitCapExceeded {
                qubits: qubit_count,
            });
        }
        let dim = 1usize << qubit_count;
        Ok(Self {
            qubit_count,
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(qubit_count: usize) -> Result<Self, OracleError> {
        let mut m = Self::zeros(qubit_count)?;
        for i in 0..m.dim {
            m.entries[i * m.dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self {
            qubit_count: self.qubit_count,
            dim: self.dim,
            entries: vec![Complex64::new(0.0, 0.0); self.dim * self.dim],
        };
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.entries[c * self.dim + r] = self.entries[r * self.dim + c].conj();
            }
        }
        out
    }

    /// `self * rhs`, naive triple loop.
    pub fn matmul(&self, rhs: &DenseUnitary) -> Result<DenseUnitary, OracleError> {
        if self.dim != rhs.dim {
            return Err(OracleError::MatrixSizeMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let dim = self.dim;
        let mut out = Self {
            qubit_count: self.qubit_count,
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entries[i * dim + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &rhs.entries[k * dim..(k + 1) * dim];
                let out_row = &mut out.entries[i * dim..(i + 1) * dim];
                for (o, &b) in out_row.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entry of `U^dagger U - I` in absolute value.
    pub fn unitarity_defect(&self) -> f64 {
        let product = self
            .adjoint()
            .matmul(self)
            .expect("dimensions match by construction");
        let mut defect = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let expected = if r == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                defect = defect.max((product.get(r, c) - expected).norm());
            }
        }
        defect
    }

    pub fn max_entry_diff(&self, other: &DenseUnitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn controls_satisfied(controls: &ControlSpec, index: usize) -> bool {
    controls.satisfied(index)
}

fn add_const_image(index: usize, reg: &Range<usize>, delta: i64, controls: &ControlSpec) -> usize {
    if !controls_satisfied(controls, index) {
        return index;
    }
    let width = reg.len();
    let shift = reg.start;
    let count = 1usize << width;
    let mask = (count - 1) << shift;
    let value = (index & mask) >> shift;
    let moved = if delta == 1 {
        (value + 1) % count
    } else {
        (value + count - 1) % count
    };
    (index & !mask) | (moved << shift)
}

fn mod3_image(index: usize, reg: &Range<usize>, low: usize, high: usize, inverse: bool) -> usize {
    let width = reg.len();
    let shift = reg.start;
    let value = (index >> shift) & ((1usize << width) - 1);
    let mut k = value % 3;
    if inverse {
        k = (4 - k) & 3;
    }
    let low_bit = 1usize << low;
    let high_bit = 1usize << high;
    let b = usize::from(index & low_bit != 0) | (usize::from(index & high_bit != 0) << 1);
    let moved = (b + k) & 3;
    (index & !(low_bit | high_bit))
        | if moved & 1 != 0 { low_bit } else { 0 }
        | if moved & 2 != 0 { high_bit } else { 0 }
}

/// Explicit matrix of one primitive op on an `m`-qubit register.
pub fn op_matrix(op: &CircuitOp, qubit_count: usize) -> Result<DenseUnitary, OracleError> {
    let mut matrix = DenseUnitary::zeros(qubit_count)?;
    let dim = matrix.dim;
    match op {
        CircuitOp::Single { target, gate } => {
            let t = 1usize << target;
            for col in 0..dim {
                let bit = usize::from(col & t != 0);
                let base = col & !t;
                matrix.set(base, col, gate.entry(0, bit));
                matrix.set(base | t, col, gate.entry(1, bit));
            }
        }
        CircuitOp::Controlled {
            target,
            gate,
            controls,
        } => {
            let t = 1usize << target;
            for col in 0..dim {
                if !controls_satisfied(controls, col) {
                    matrix.set(col, col, Complex64::new(1.0, 0.0));
                    continue;
                }
                let bit = usize::from(col & t != 0);
                let base = col & !t;
                matrix.set(base, col, gate.entry(0, bit));
                matrix.set(base | t, col, gate.entry(1, bit));
            }
        }
        CircuitOp::AddConst {
            reg,
            delta,
            controls,
        } => {
            for col in 0..dim {
                matrix.set(add_const_image(col, reg, *delta, controls), col, Complex64::new(1.0, 0.0));
            }
        }
        CircuitOp::Mod3 {
            reg,
            low,
            high,
            inverse,
        } => {
            for col in 0..dim {
                matrix.set(mod3_image(col, reg, *low, *high, *inverse), col, Complex64::new(1.0, 0.0));
            }
        }
    }
    Ok(matrix)
}

/// Explicit matrix of a whole circuit: the product of primitive-op matrices
/// in application order. Unitarity is checked on construction.
pub fn build_dense(circuit: &[CircuitOp], qubit_count: usize) -> Result<DenseUnitary, OracleError> {
    let mut acc = DenseUnitary::identity(qubit_count)?;
    for op in circuit {
        acc = op_matrix(op, qubit_count)?.matmul(&acc)?;
    }
    let defect = acc.unitarity_defect();
    if defect > UNITARITY_TOL {
        return Err(OracleError::NotUnitary { defect });
    }
    Ok(acc)
}

/// Plain matrix-vector product.
pub fn oracle_evolve(state: &StateVector, dense: &DenseUnitary) -> Result<StateVector, OracleError> {
    if state.dim() != dense.dim {
        return Err(OracleError::DimensionMismatch {
            matrix: dense.dim,
            state: state.dim(),
        });
    }
    let amps = state.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); dense.dim];
    for (row, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (col, &amp) in amps.iter().enumerate() {
            acc += dense.entries[row * dense.dim + col] * amp;
        }
        *slot = acc;
    }
    Ok(StateVector::from_amplitudes(out))
}

/// Evolve through a circuit one explicit op matrix at a time. Cheaper than
/// [`build_dense`] for long circuits, still fully independent of the engine.
pub fn evolve_circuit(state: &StateVector, circuit: &[CircuitOp]) -> Result<StateVector, OracleError> {
    if state.qubit_count() > MAX_ORACLE_QUBITS {
        return Err(OracleError::QubitCapExceeded {
            qubits: state.qubit_count(),
        });
    }
    let mut current = state.clone();
    for op in circuit {
        let matrix = op_matrix(op, current.qubit_count())?;
        current = oracle_evolve(&current, &matrix)?;
    }
    Ok(current)
}
