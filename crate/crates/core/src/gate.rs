//! Coin-gate algebra.
//!
//! Every coin toss in the scheme is a 2x2 unitary built from four real
//! angles: `G = Rz(beta) * Ry(theta) * Rz(alpha) * Ph(delta)`, the phase
//! factor acting first. `delta` only ever contributes a global phase, so
//! two parameter sets differing in `delta` describe physically identical
//! coins.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GateError {
    #[error("gate angle `{name}` must be finite, got {value}")]
    NonFiniteAngle { name: &'static str, value: f64 },
}

fn ensure_finite(name: &'static str, value: f64) -> Result<(), GateError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(GateError::NonFiniteAngle { name, value })
    }
}

/// Four real angles (radians) defining one coin gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl GateParams {
    pub fn new(delta: f64, alpha: f64, beta: f64, theta: f64) -> Result<Self, GateError> {
        ensure_finite("delta", delta)?;
        ensure_finite("alpha", alpha)?;
        ensure_finite("beta", beta)?;
        ensure_finite("theta", theta)?;
        Ok(Self {
            delta,
            alpha,
            beta,
            theta,
        })
    }

    pub fn validate(&self) -> Result<(), GateError> {
        ensure_finite("delta", self.delta)?;
        ensure_finite("alpha", self.alpha)?;
        ensure_finite("beta", self.beta)?;
        ensure_finite("theta", self.theta)
    }

    /// Gate `A` of the standard coefficient set (the `table1` preset):
    /// a near-flip coin, `sin^2(theta/2)` just under 1.
    pub fn preset_a() -> Self {
        Self {
            delta: 0.0,
            alpha: 1.0,
            beta: 0.0,
            theta: 2.0 * (std::f64::consts::FRAC_PI_2 + 0.01),
        }
    }

    /// Gate `B1` of the `table1` preset; `sin^2(theta/2)` close to 1/10.
    pub fn preset_b1() -> Self {
        Self {
            delta: 0.0,
            alpha: 1.0,
            beta: 0.0,
            theta: 2.0 * (std::f64::consts::PI / 10.0 + 0.01),
        }
    }

    /// Gate `B2` of the `table1` preset.
    pub fn preset_b2() -> Self {
        Self {
            delta: 0.0,
            alpha: 1.0,
            beta: 0.0,
            theta: 2.0 * (3.0 * std::f64::consts::FRAC_PI_4 + 0.01),
        }
    }

    /// Same gate with the global-phase angle zeroed.
    pub fn without_phase(&self) -> Self {
        Self { delta: 0.0, ..*self }
    }
}

/// 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2 {
    pub e00: Complex64,
    pub e01: Complex64,
    pub e10: Complex64,
    pub e11: Complex64,
}

impl Matrix2 {
    pub const fn new(e00: Complex64, e01: Complex64, e10: Complex64, e11: Complex64) -> Self {
        Self { e00, e01, e10, e11 }
    }

    pub fn identity() -> Self {
        Self::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// The bit-flip gate `X = [[0, 1], [1, 0]]`.
    ///
    /// Distinct from `Ry(pi)`, which flips with a sign on one branch; the
    /// ancilla flag must use the phase-free flip so that computing and
    /// uncomputing it cancel exactly.
    pub fn pauli_x() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.e00.conj(),
            self.e10.conj(),
            self.e01.conj(),
            self.e11.conj(),
        )
    }

    /// Entry by (row, column), each in {0, 1}.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        match (row, col) {
            (0, 0) => self.e00,
            (0, 1) => self.e01,
            (1, 0) => self.e10,
            (1, 1) => self.e11,
            _ => panic!("Matrix2 index out of range: ({row}, {col})"),
        }
    }

    /// Largest entry of `U^dagger U - I` in absolute value.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let one = Complex64::new(1.0, 0.0);
        [(p.e00 - one), p.e01, p.e10, (p.e11 - one)]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        [
            self.e00 - other.e00,
            self.e01 - other.e01,
            self.e10 - other.e10,
            self.e11 - other.e11,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.e00 * rhs.e00 + self.e01 * rhs.e10,
            self.e00 * rhs.e01 + self.e01 * rhs.e11,
            self.e10 * rhs.e00 + self.e11 * rhs.e10,
            self.e10 * rhs.e01 + self.e11 * rhs.e11,
        )
    }
}

fn phase_unchecked(xi: f64) -> Matrix2 {
    let p = Complex64::from_polar(1.0, xi);
    Matrix2::new(p, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), p)
}

fn rotation_y_unchecked(xi: f64) -> Matrix2 {
    let c = (xi / 2.0).cos();
    let s = (xi / 2.0).sin();
    Matrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(c, 0.0),
    )
}

fn rotation_z_unchecked(xi: f64) -> Matrix2 {
    Matrix2::new(
        Complex64::from_polar(1.0, -xi / 2.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, xi / 2.0),
    )
}

/// `Ph(xi) = e^{i xi} I`.
pub fn phase_gate(xi: f64) -> Result<Matrix2, GateError> {
    ensure_finite("xi", xi)?;
    Ok(phase_unchecked(xi))
}

/// `Ry(xi) = [[cos(xi/2), -sin(xi/2)], [sin(xi/2), cos(xi/2)]]`.
pub fn rotation_y(xi: f64) -> Result<Matrix2, GateError> {
    ensure_finite("xi", xi)?;
    Ok(rotation_y_unchecked(xi))
}

/// `Rz(xi) = diag(e^{-i xi/2}, e^{i xi/2})`.
pub fn rotation_z(xi: f64) -> Result<Matrix2, GateError> {
    ensure_finite("xi", xi)?;
    Ok(rotation_z_unchecked(xi))
}

/// The full coin gate `Rz(beta) * Ry(theta) * Rz(alpha) * Ph(delta)`.
pub fn compose_gate(params: &GateParams) -> Result<Matrix2, GateError> {
    params.validate()?;
    Ok(rotation_z_unchecked(params.beta)
        * rotation_y_unchecked(params.theta)
        * rotation_z_unchecked(params.alpha)
        * phase_unchecked(params.delta))
}
