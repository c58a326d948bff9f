//! Two-sector massless representation on a discretized lightlike orbit.
//!
//! Grid point `i` of the forward sector carries momentum `ω_i(1, n̂)` and grid
//! point `i` of the backward sector carries `−ω_i(1, n̂)`. Frequencies are
//! log-spaced, `ω_i = ω_min · rⁱ`, so boosts along `n̂` by multiples of `ln r`
//! are index shifts. Amplitudes absorb the square root of the orbit measure,
//! which makes unitarity a plain ℓ² statement.

mod axial;
mod json;
mod ops;

use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lorentz::{Direction, FourVector};

pub use axial::{check_covariance, conjugate_axial, AxialElement, DiscreteOp};
pub use ops::{make_epsilon_eigenstate, BoostMode, BoostOutcome, EigenOutcome, LEAK_WARNING_THRESHOLD};

#[derive(Debug, Error, PartialEq)]
pub enum RepError {
    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} amplitudes, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rapidity {chi} is not a multiple of the grid step ln r = {step}; enable interpolation to allow it")]
    NonLatticeRapidity { chi: f64, step: f64 },
    #[error("Λ∞ direction (θ={theta}, φ={phi}) does not match the grid direction")]
    DirectionMismatch { theta: f64, phi: f64 },
    #[error("states live on different grids")]
    GridMismatch,
    #[error("cannot normalize a zero wavefunction")]
    ZeroWavefunction,
    #[error("element is not in the axial subgroup of the grid direction: {0}")]
    NotAxial(String),
    #[error("epsilon must be +1 or -1, got {0}")]
    InvalidEpsilon(i64),
    #[error("malformed state document: {0}")]
    Json(String),
}

/// The sign `ε = ±1` labelling a doublet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn value(self) -> f64 {
        match self {
            Epsilon::Plus => 1.0,
            Epsilon::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Epsilon {
        match self {
            Epsilon::Plus => Epsilon::Minus,
            Epsilon::Minus => Epsilon::Plus,
        }
    }
}

impl TryFrom<i64> for Epsilon {
    type Error = RepError;

    fn try_from(v: i64) -> Result<Self, RepError> {
        match v {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            other => Err(RepError::InvalidEpsilon(other)),
        }
    }
}

impl From<Epsilon> for i64 {
    fn from(e: Epsilon) -> i64 {
        match e {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }
}

/// The intertwiner `C` in `Ū(Λ∞)`, diagonal in the grid basis with `±1` entries.
#[derive(Clone, Debug, PartialEq)]
pub enum SectorInvolution {
    Uniform(Epsilon),
    PerPoint(Vec<Epsilon>),
}

impl SectorInvolution {
    pub fn identity() -> Self {
        SectorInvolution::Uniform(Epsilon::Plus)
    }

    pub fn sign(&self, i: usize) -> f64 {
        match self {
            SectorInvolution::Uniform(e) => e.value(),
            SectorInvolution::PerPoint(v) => v[i].value(),
        }
    }

    fn check_len(&self, n: usize) -> Result<(), RepError> {
        match self {
            SectorInvolution::PerPoint(v) if v.len() != n => {
                Err(RepError::LengthMismatch { expected: n, got: v.len() })
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sector {
    Forward,
    Backward,
}

/// Log-spaced positive frequencies along a fixed direction, with an integer helicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    ratio: f64,
    count: usize,
    direction: Direction,
    helicity: i32,
}

impl FrequencyGrid {
    pub fn new(
        omega_min: f64,
        ratio: f64,
        count: usize,
        direction: Direction,
        helicity: i32,
    ) -> Result<Self, RepError> {
        if !(omega_min.is_finite() && omega_min > 0.0) {
            return Err(RepError::InvalidGrid(format!("omega_min must be positive, got {omega_min}")));
        }
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(RepError::InvalidGrid(format!("ratio must exceed 1, got {ratio}")));
        }
        if count == 0 {
            return Err(RepError::InvalidGrid("count must be at least 1".into()));
        }
        if !(direction.theta.is_finite() && direction.phi.is_finite()) {
            return Err(RepError::InvalidGrid("direction angles must be finite".into()));
        }
        Ok(FrequencyGrid { omega_min, ratio, count, direction, helicity })
    }

    /// `count` points from `ω = 1` with ratio `2^(1/4)` along `ẑ`.
    pub fn along_z(count: usize, helicity: i32) -> Result<Self, RepError> {
        Self::new(1.0, 2f64.powf(0.25), count, Direction::Z, helicity)
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn helicity(&self) -> i32 {
        self.helicity
    }

    /// Rapidity of a one-step boost, `ln r`.
    pub fn log_ratio(&self) -> f64 {
        self.ratio.ln()
    }

    pub fn omega(&self, i: usize) -> f64 {
        self.omega_min * self.ratio.powi(i as i32)
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.omega(i)).collect()
    }

    pub fn momentum(&self, sector: Sector, i: usize) -> FourVector {
        let p = FourVector::lightlike(self.omega(i), self.direction);
        match sector {
            Sector::Forward => p,
            Sector::Backward => -p,
        }
    }
}

/// A wavefunction `Ψ = (ψ_fwd, ψ_bwd)` on `H_fwd ⊕ H_bwd`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubletState {
    grid: FrequencyGrid,
    fwd: Vec<Complex64>,
    bwd: Vec<Complex64>,
}

impl DoubletState {
    pub fn new(grid: FrequencyGrid, fwd: Vec<Complex64>, bwd: Vec<Complex64>) -> Result<Self, RepError> {
        for v in [&fwd, &bwd] {
            if v.len() != grid.len() {
                return Err(RepError::LengthMismatch { expected: grid.len(), got: v.len() });
            }
        }
        Ok(DoubletState { grid, fwd, bwd })
    }

    pub fn zero(grid: FrequencyGrid) -> Self {
        let n = grid.len();
        DoubletState { grid, fwd: vec![Complex64::ZERO; n], bwd: vec![Complex64::ZERO; n] }
    }

    /// `(ψ, 0)`.
    pub fn forward_only(grid: FrequencyGrid, psi: Vec<Complex64>) -> Result<Self, RepError> {
        let zeros = vec![Complex64::ZERO; psi.len()];
        Self::new(grid, psi, zeros)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn forward(&self) -> &[Complex64] {
        &self.fwd
    }

    pub fn backward(&self) -> &[Complex64] {
        &self.bwd
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    pub fn into_parts(self) -> (FrequencyGrid, Vec<Complex64>, Vec<Complex64>) {
        (self.grid, self.fwd, self.bwd)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.fwd.iter().chain(&self.bwd).map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &DoubletState) -> Result<Complex64, RepError> {
        if self.len() != other.len() {
            return Err(RepError::GridMismatch);
        }
        Ok(self.fwd.iter().zip(&other.fwd).chain(self.bwd.iter().zip(&other.bwd)).map(|(a, b)| a.conj() * b).sum())
    }

    /// ℓ² distance to `other`.
    pub fn distance(&self, other: &DoubletState) -> f64 {
        self.fwd
            .iter()
            .zip(&other.fwd)
            .chain(self.bwd.iter().zip(&other.bwd))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> DoubletState {
        DoubletState {
            grid: self.grid,
            fwd: self.fwd.iter().map(|c| c * factor).collect(),
            bwd: self.bwd.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn normalized(&self) -> Result<DoubletState, RepError> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(RepError::ZeroWavefunction);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Per-point coefficients `(c₊, c₋)` with `Ψ = Σᵢ c₊ᵢ Ψ₊⁽ⁱ⁾ + c₋ᵢ Ψ₋⁽ⁱ⁾`,
    /// where `Ψ_ε⁽ⁱ⁾ = (eᵢ, ε eᵢ)/√2`.
    pub fn epsilon_components(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = self.fwd.iter().zip(&self.bwd).map(|(f, b)| (f + b) * s).collect();
        let minus = self.fwd.iter().zip(&self.bwd).map(|(f, b)| (f - b) * s).collect();
        (plus, minus)
    }

    pub fn from_epsilon_components(
        grid: FrequencyGrid,
        plus: &[Complex64],
        minus: &[Complex64],
    ) -> Result<DoubletState, RepError> {
        if plus.len() != minus.len() {
            return Err(RepError::LengthMismatch { expected: plus.len(), got: minus.len() });
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let fwd = plus.iter().zip(minus).map(|(p, m)| (p + m) * s).collect();
        let bwd = plus.iter().zip(minus).map(|(p, m)| (p - m) * s).collect();
        DoubletState::new(grid, fwd, bwd)
    }

    /// Random normalized state with Gaussian amplitudes supported on `support`
    /// in both sectors.
    pub fn random<R: Rng + ?Sized>(grid: FrequencyGrid, support: Range<usize>, rng: &mut R) -> DoubletState {
        let n = grid.len();
        let mut draw = |i: usize| {
            if support.contains(&i) {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            } else {
                Complex64::ZERO
            }
        };
        let fwd: Vec<_> = (0..n).map(&mut draw).collect();
        let bwd: Vec<_> = (0..n).map(&mut draw).collect();
        let s = DoubletState { grid, fwd, bwd };
        s.normalized().unwrap_or(s)
    }
}

/// Random normalized single-sector wavefunction of length `n`.
pub fn random_wavefunction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> =
        (0..n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}
