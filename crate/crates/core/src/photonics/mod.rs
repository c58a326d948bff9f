//! Monte Carlo model of the single-photon interferometer that prepares
//! `|Ψ(φ)⟩ = (|+⟩|H⟩ + e^{iφ}|−⟩|V⟩)/√2` and measures `σx ⊗ σx`.
//!
//! Detectors: `D₁ ↔ (+,+)`, `D₂ ↔ (+,−)`, `D₃ ↔ (−,+)`, `D₄ ↔ (−,−)`. The first
//! label is the direction port of BS₂, the second the PBS exit (transmitted `+`,
//! reflected `−`).

mod state;
mod sweep;
mod trials;

use thiserror::Error;

pub use state::{
    analyzer, born_probabilities, expected_correlation, o_xx, outcome_index, prepare_state, psi_phi,
    JointProbabilities, PhaseResponse, PreparedState, OUTCOMES,
};
pub use sweep::{
    fit_cosine, phase_grid, read_csv, sweep_phase, sweep_phase_with_workers, write_csv, CosineFit, SweepRow,
    CSV_COLUMNS,
};
#[cfg(feature = "parallel")]
pub use trials::run_trials_parallel;
pub use trials::{
    estimate_exx, run_trials, run_trials_sequential, run_trials_with_workers, with_workers, Estimate, ExperimentConfig,
    TrialTally, BLOCK_TRIALS, STREAM_DERIVATION,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid value for `{key}`: {reason}")]
    InvalidConfig { key: &'static str, reason: String },
    #[error("no coincidences recorded ({discarded} trials discarded); E_XX is undefined")]
    NoCoincidences { discarded: u64 },
    #[error("empty phase list")]
    EmptySweep,
    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
    #[error("csv: {0}")]
    Csv(String),
}
