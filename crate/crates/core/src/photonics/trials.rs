//! Monte Carlo photon counting with loss, dark counts and phase jitter.
//!
//! Trials are cut into blocks of [`BLOCK_TRIALS`]. Block `b` draws from a
//! ChaCha8 generator seeded with the run seed on stream `b`, so a tally does not
//! depend on how many workers process the blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::state::{born_probabilities, prepare_state, JointProbabilities, PhaseResponse};
use super::SimError;

pub const BLOCK_TRIALS: u64 = 65_536;

/// Human-readable form of the stream rule, recorded in run manifests.
pub const STREAM_DERIVATION: &str =
    "ChaCha8Rng::seed_from_u64(seed) with set_stream(block), block = trial_index / 65536; sweep point i uses seed XOR i";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Interferometric phase φ (rad).
    #[serde(rename = "phi")]
    pub phase: f64,
    pub visibility: f64,
    /// Uniform efficiency η of D₁–D₄.
    #[serde(rename = "eta")]
    pub detector_efficiency: f64,
    /// Probability that a given detector fires spuriously in a trial.
    #[serde(rename = "dark")]
    pub dark_count_prob: f64,
    /// Standard deviation of per-trial Gaussian phase jitter (rad).
    #[serde(rename = "sigma")]
    pub phase_noise_sigma: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            phase: 0.0,
            visibility: 1.0,
            detector_efficiency: 1.0,
            dark_count_prob: 0.0,
            phase_noise_sigma: 0.0,
            trials: 100_000,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn ideal(phase: f64, trials: u64, seed: u64) -> Self {
        ExperimentConfig { phase, trials, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |key: &'static str, reason: String| Err(SimError::InvalidConfig { key, reason });
        if !self.phase.is_finite() {
            return bad("phi", "must be finite".into());
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return bad("visibility", format!("{} not in [0, 1]", self.visibility));
        }
        if !(0.0..=1.0).contains(&self.detector_efficiency) {
            return bad("eta", format!("{} not in [0, 1]", self.detector_efficiency));
        }
        if !(0.0..1.0).contains(&self.dark_count_prob) {
            return bad("dark", format!("{} not in [0, 1)", self.dark_count_prob));
        }
        if !(self.phase_noise_sigma >= 0.0 && self.phase_noise_sigma.is_finite()) {
            return bad("sigma", format!("{} must be a finite non-negative angle", self.phase_noise_sigma));
        }
        if self.trials == 0 {
            return bad("trials", "must be positive".into());
        }
        Ok(())
    }

    fn blocks(&self) -> u64 {
        self.trials.div_ceil(BLOCK_TRIALS)
    }
}

/// Joint-click counts in detector order `(+,+), (+,−), (−,+), (−,−)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialTally {
    pub counts: [u64; 4],
    /// No-click and multi-click trials.
    pub discarded: u64,
}

impl TrialTally {
    pub fn kept(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trials(&self) -> u64 {
        self.kept() + self.discarded
    }

    pub fn merge(mut self, other: TrialTally) -> TrialTally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.discarded += other.discarded;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub e_xx: f64,
    pub stderr: f64,
}

/// `Ê = Σ x_d x_p n(x_d, x_p) / Σ n` with `stderr = √((1 − Ê²)/Σ n)`.
pub fn estimate_exx(t: &TrialTally) -> Result<Estimate, SimError> {
    let kept = t.kept();
    if kept == 0 {
        return Err(SimError::NoCoincidences { discarded: t.discarded });
    }
    let [pp, pm, mp, mm] = t.counts;
    let signed = (pp + mm) as f64 - (pm + mp) as f64;
    let n = kept as f64;
    let e_xx = signed / n;
    let stderr = ((1.0 - e_xx * e_xx).max(0.0) / n).sqrt();
    Ok(Estimate { e_xx, stderr })
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn sample_outcome(probs: &JointProbabilities, u: f64) -> usize {
    let mut acc = 0.0;
    for (k, p) in probs.0.iter().enumerate().take(3) {
        acc += p;
        if u < acc {
            return k;
        }
    }
    3
}

/// Outcome law of a run: fixed without jitter, otherwise re-evaluated per trial.
enum Law {
    Fixed(JointProbabilities),
    Jittered(Normal<f64>, PhaseResponse),
}

impl Law {
    fn new(config: &ExperimentConfig) -> Law {
        if config.phase_noise_sigma > 0.0 {
            Law::Jittered(
                Normal::new(0.0, config.phase_noise_sigma).expect("validated sigma"),
                PhaseResponse::new(config.visibility).expect("validated visibility"),
            )
        } else {
            Law::Fixed(born_probabilities(
                &prepare_state(config.phase, config.visibility).expect("validated visibility"),
            ))
        }
    }
}

fn run_block(config: &ExperimentConfig, law: &Law, block: u64) -> TrialTally {
    let mut rng = block_rng(config.seed, block);
    let start = block * BLOCK_TRIALS;
    let end = (start + BLOCK_TRIALS).min(config.trials);
    let mut tally = TrialTally::default();
    for _ in start..end {
        let jittered;
        let probs = match law {
            Law::Fixed(p) => p,
            Law::Jittered(normal, response) => {
                jittered = response.at(config.phase + normal.sample(&mut rng));
                &jittered
            }
        };
        let outcome = sample_outcome(probs, rng.random::<f64>());
        let detected = rng.random::<f64>() < config.detector_efficiency;
        let mut fired = [false; 4];
        if detected {
            fired[outcome] = true;
        }
        for f in &mut fired {
            if rng.random::<f64>() < config.dark_count_prob {
                *f = true;
            }
        }
        let mut clicks = fired.iter().enumerate().filter(|(_, f)| **f);
        match (clicks.next(), clicks.next()) {
            (Some((k, _)), None) => tally.counts[k] += 1,
            _ => tally.discarded += 1,
        }
    }
    tally
}

/// Single-threaded reference path.
pub fn run_trials_sequential(config: &ExperimentConfig) -> Result<TrialTally, SimError> {
    config.validate()?;
    let law = Law::new(config);
    Ok((0..config.blocks()).map(|b| run_block(config, &law, b)).fold(TrialTally::default(), TrialTally::merge))
}

/// Blocks distributed over the current rayon pool.
#[cfg(feature = "parallel")]
pub fn run_trials_parallel(config: &ExperimentConfig) -> Result<TrialTally, SimError> {
    use rayon::prelude::*;
    config.validate()?;
    let law = Law::new(config);
    Ok((0..config.blocks())
        .into_par_iter()
        .map(|b| run_block(config, &law, b))
        .reduce(TrialTally::default, TrialTally::merge))
}

/// Runs every trial of `config`, in parallel when the `parallel` feature is on.
pub fn run_trials(config: &ExperimentConfig) -> Result<TrialTally, SimError> {
    #[cfg(feature = "parallel")]
    {
        run_trials_parallel(config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_sequential(config)
    }
}

/// Runs `f` on a dedicated pool of `workers` threads. Without the `parallel`
/// feature the worker count is ignored.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T, SimError> + Send) -> Result<T, SimError> {
    if workers == 0 {
        return Err(SimError::InvalidConfig { key: "workers", reason: "must be positive".into() });
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SimError::ThreadPool(e.to_string()))?;
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

pub fn run_trials_with_workers(config: &ExperimentConfig, workers: usize) -> Result<TrialTally, SimError> {
    with_workers(workers, || run_trials(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn estimator_examples() {
        let perfect = TrialTally { counts: [500, 0, 0, 500], discarded: 0 };
        assert_eq!(estimate_exx(&perfect).unwrap(), Estimate { e_xx: 1.0, stderr: 0.0 });
        let anti = TrialTally { counts: [0, 500, 500, 0], discarded: 3 };
        assert_eq!(estimate_exx(&anti).unwrap().e_xx, -1.0);
        let flat = TrialTally { counts: [250; 4], discarded: 0 };
        let e = estimate_exx(&flat).unwrap();
        assert_eq!(e.e_xx, 0.0);
        assert!((e.stderr - 1.0 / 1000f64.sqrt()).abs() < 1e-15);
        let empty = TrialTally { counts: [0; 4], discarded: 10 };
        assert_eq!(estimate_exx(&empty), Err(SimError::NoCoincidences { discarded: 10 }));
    }

    #[test]
    fn config_validation_points_at_key() {
        let mut c = ExperimentConfig::ideal(0.0, 10, 1);
        c.trials = 0;
        assert!(matches!(c.validate(), Err(SimError::InvalidConfig { key: "trials", .. })));
        let c = ExperimentConfig { dark_count_prob: 1.0, ..ExperimentConfig::ideal(0.0, 10, 1) };
        assert!(matches!(c.validate(), Err(SimError::InvalidConfig { key: "dark", .. })));
        let c = ExperimentConfig { detector_efficiency: 1.2, ..ExperimentConfig::ideal(0.0, 10, 1) };
        assert!(matches!(c.validate(), Err(SimError::InvalidConfig { key: "eta", .. })));
        let c = ExperimentConfig { phase_noise_sigma: -1.0, ..ExperimentConfig::ideal(0.0, 10, 1) };
        assert!(matches!(c.validate(), Err(SimError::InvalidConfig { key: "sigma", .. })));
    }

    #[test]
    fn zero_efficiency_discards_everything() {
        let c = ExperimentConfig { detector_efficiency: 0.0, ..ExperimentConfig::ideal(0.0, 5000, 9) };
        let t = run_trials(&c).unwrap();
        assert_eq!(t.counts, [0; 4]);
        assert_eq!(t.discarded, 5000);
    }

    #[test]
    fn tally_accounts_for_every_trial() {
        let c = ExperimentConfig {
            detector_efficiency: 0.7,
            dark_count_prob: 0.05,
            phase_noise_sigma: 0.3,
            ..ExperimentConfig::ideal(1.0, 100_003, 4)
        };
        assert_eq!(run_trials(&c).unwrap().trials(), 100_003);
    }

    #[test]
    fn ideal_eigenstates_never_anticorrelate() {
        let t = run_trials(&ExperimentConfig::ideal(0.0, 20_000, 1)).unwrap();
        assert_eq!(t.counts[1] + t.counts[2], 0);
        let t = run_trials(&ExperimentConfig::ideal(PI, 20_000, 1)).unwrap();
        assert_eq!(t.counts[0] + t.counts[3], 0);
    }

    #[test]
    fn same_seed_same_tally() {
        let c = ExperimentConfig {
            dark_count_prob: 0.01,
            phase_noise_sigma: 0.2,
            ..ExperimentConfig::ideal(0.4, 150_000, 77)
        };
        assert_eq!(run_trials(&c).unwrap(), run_trials(&c).unwrap());
        assert_eq!(run_trials_sequential(&c).unwrap(), run_trials_with_workers(&c, 3).unwrap());
    }

    #[test]
    fn config_json_uses_flag_names() {
        let c = ExperimentConfig::ideal(0.5, 10, 3);
        let v = serde_json::to_value(c).unwrap();
        for key in ["phi", "visibility", "eta", "dark", "sigma", "trials", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
