//! Preparation of `|Ψ(φ)⟩` and the X⊗X analyzer (BS₂ on direction, HWP at 45°
//! plus PBS on polarization).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use super::SimError;
use crate::qubit::{pauli, TwoQubitState};

/// Output of the preparation stage: pure for unit visibility, otherwise a mixture.
#[derive(Clone, Debug, PartialEq)]
pub enum PreparedState {
    Pure(TwoQubitState),
    Mixed(Matrix4<Complex64>),
}

impl PreparedState {
    pub fn density(&self) -> Matrix4<Complex64> {
        match self {
            PreparedState::Pure(s) => {
                let v = s.as_vector();
                v * v.adjoint()
            }
            PreparedState::Mixed(rho) => *rho,
        }
    }

    pub fn trace(&self) -> f64 {
        self.density().trace().re
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, op: &Matrix4<Complex64>) -> Complex64 {
        (self.density() * op).trace()
    }
}

/// `(|+⟩|H⟩ + e^{iφ}|−⟩|V⟩)/√2`.
pub fn psi_phi(phi: f64) -> TwoQubitState {
    TwoQubitState::from_amplitudes([
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::from_polar(FRAC_1_SQRT_2, phi),
    ])
}

/// `v |Ψ(φ)⟩⟨Ψ(φ)| + (1 − v) · diag(|Ψ(φ)⟩⟨Ψ(φ)|)`. The second term is the state
/// with all coherence between the `|+H⟩` and `|−V⟩` arms removed.
pub fn prepare_state(phi: f64, visibility: f64) -> Result<PreparedState, SimError> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(SimError::InvalidConfig { key: "visibility", reason: format!("{visibility} not in [0, 1]") });
    }
    let pure = psi_phi(phi);
    if visibility == 1.0 {
        return Ok(PreparedState::Pure(pure));
    }
    let rho = PreparedState::Pure(pure).density();
    let dephased = Matrix4::from_diagonal(&rho.diagonal());
    let v = Complex64::new(visibility, 0.0);
    Ok(PreparedState::Mixed(rho * v + dephased * (Complex64::ONE - v)))
}

/// Joint outcome probabilities indexed `(+,+), (+,−), (−,+), (−,−)`, which are
/// detectors `D₁…D₄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointProbabilities(pub [f64; 4]);

/// Eigenvalue pairs `(x_dir, x_pol)` in detector order.
pub const OUTCOMES: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

pub fn outcome_index(x_dir: i8, x_pol: i8) -> usize {
    usize::from(x_dir < 0) * 2 + usize::from(x_pol < 0)
}

impl JointProbabilities {
    pub fn get(&self, x_dir: i8, x_pol: i8) -> f64 {
        self.0[outcome_index(x_dir, x_pol)]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// `Σ x_dir x_pol P(x_dir, x_pol)`.
    pub fn correlation(&self) -> f64 {
        OUTCOMES.iter().zip(self.0).map(|(&(d, p), prob)| f64::from(d * p) * prob).sum()
    }

    pub fn direction_marginal(&self, x_dir: i8) -> f64 {
        self.get(x_dir, 1) + self.get(x_dir, -1)
    }

    pub fn polarization_marginal(&self, x_pol: i8) -> f64 {
        self.get(1, x_pol) + self.get(-1, x_pol)
    }
}

fn hadamard() -> Matrix2<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, h, -h)
}

/// BS₂ ⊗ (HWP·PBS): maps the σx eigenbasis of each qubit to its computational basis,
/// with `|0⟩` (transmitted port) read as `+1`.
pub fn analyzer() -> Matrix4<Complex64> {
    let h = hadamard();
    h.kronecker(&h)
}

/// `σx ⊗ σx` in the `(+H, +V, −H, −V)` basis.
pub fn o_xx() -> Matrix4<Complex64> {
    pauli::x().kronecker(&pauli::x())
}

pub fn born_probabilities(state: &PreparedState) -> JointProbabilities {
    let u = analyzer();
    let rotated = u * state.density() * u.adjoint();
    JointProbabilities([rotated[(0, 0)].re, rotated[(1, 1)].re, rotated[(2, 2)].re, rotated[(3, 3)].re])
}

/// Born probabilities of `Ψ(φ)` at fixed visibility written as
/// `A + B cos φ + C sin φ`. The form is exact because the prepared density
/// matrix is affine in `e^{±iφ}`, so three evaluations determine it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseResponse {
    a: [f64; 4],
    b: [f64; 4],
    c: [f64; 4],
}

impl PhaseResponse {
    pub fn new(visibility: f64) -> Result<Self, SimError> {
        let at = |phi: f64| prepare_state(phi, visibility).map(|s| born_probabilities(&s).0);
        let (p0, p1, p2) = (at(0.0)?, at(std::f64::consts::FRAC_PI_2)?, at(std::f64::consts::PI)?);
        let a = std::array::from_fn(|k| 0.5 * (p0[k] + p2[k]));
        let b = std::array::from_fn(|k| 0.5 * (p0[k] - p2[k]));
        let c = std::array::from_fn(|k| p1[k] - a[k]);
        Ok(PhaseResponse { a, b, c })
    }

    pub fn at(&self, phi: f64) -> JointProbabilities {
        let (sin, cos) = phi.sin_cos();
        JointProbabilities(std::array::from_fn(|k| self.a[k] + self.b[k] * cos + self.c[k] * sin))
    }
}

/// `v · e^{−σ²/2} · cos φ`.
pub fn expected_correlation(phi: f64, visibility: f64, sigma: f64) -> f64 {
    visibility * (-0.5 * sigma * sigma).exp() * phi.cos()
}
