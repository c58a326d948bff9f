//! Phase sweeps, CSV emission and the `a·cos φ` fit.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::state::expected_correlation;
use super::trials::{estimate_exx, run_trials, with_workers, ExperimentConfig, TrialTally};
use super::SimError;

pub const CSV_COLUMNS: [&str; 11] =
    ["phi_rad", "trials", "kept", "discarded", "n_pp", "n_pm", "n_mp", "n_mm", "e_xx", "stderr", "expected"];

/// One CSV row. `e_xx` and `stderr` are empty when nothing was kept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub phi_rad: f64,
    pub trials: u64,
    pub kept: u64,
    pub discarded: u64,
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub e_xx: Option<f64>,
    pub stderr: Option<f64>,
    pub expected: f64,
}

impl SweepRow {
    pub fn from_tally(config: &ExperimentConfig, tally: &TrialTally) -> Self {
        let est = estimate_exx(tally).ok();
        let [n_pp, n_pm, n_mp, n_mm] = tally.counts;
        SweepRow {
            phi_rad: config.phase,
            trials: tally.trials(),
            kept: tally.kept(),
            discarded: tally.discarded,
            n_pp,
            n_pm,
            n_mp,
            n_mm,
            e_xx: est.map(|e| e.e_xx),
            stderr: est.map(|e| e.stderr),
            expected: expected_correlation(config.phase, config.visibility, config.phase_noise_sigma),
        }
    }

    pub fn tally(&self) -> TrialTally {
        TrialTally { counts: [self.n_pp, self.n_pm, self.n_mp, self.n_mm], discarded: self.discarded }
    }
}

/// `points` equally spaced phases covering `[0, 2π]` inclusive.
pub fn phase_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| TAU * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Point `i` runs with phase `phis[i]` and seed `config.seed ^ i`.
pub fn sweep_phase(phis: &[f64], config: &ExperimentConfig) -> Result<Vec<SweepRow>, SimError> {
    if phis.is_empty() {
        return Err(SimError::EmptySweep);
    }
    phis.iter()
        .enumerate()
        .map(|(i, &phase)| {
            let point = ExperimentConfig { phase, seed: config.seed ^ i as u64, ..*config };
            let tally = run_trials(&point)?;
            Ok(SweepRow::from_tally(&point, &tally))
        })
        .collect()
}

pub fn sweep_phase_with_workers(
    phis: &[f64],
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<SweepRow>, SimError> {
    with_workers(workers, || sweep_phase(phis, config))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), SimError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| SimError::Csv(e.to_string()))?;
    }
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(|e| SimError::Csv(e.to_string()))?;
    }
    w.flush().map_err(|e| SimError::Csv(e.to_string()))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>, SimError> {
    csv::Reader::from_reader(input).deserialize().collect::<Result<_, _>>().map_err(|e| SimError::Csv(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CosineFit {
    pub amplitude: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Weighted least squares for `Ê(φ) = a cos φ`, one parameter, with the per-point
/// standard errors propagated: `a = Σ Êᵢ cᵢ / Σ cᵢ²`, `σ_a = √(Σ cᵢ² σᵢ²) / Σ cᵢ²`.
/// Rows without coincidences are skipped.
pub fn fit_cosine(rows: &[SweepRow]) -> Option<CosineFit> {
    let mut num = 0.0;
    let mut den = 0.0;
    let mut var = 0.0;
    let mut points = 0;
    for row in rows {
        let (Some(e), Some(s)) = (row.e_xx, row.stderr) else { continue };
        let c = row.phi_rad.cos();
        num += e * c;
        den += c * c;
        var += c * c * s * s;
        points += 1;
    }
    (den > 0.0).then(|| CosineFit { amplitude: num / den, stderr: var.sqrt() / den, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_endpoints() {
        let g = phase_grid(17);
        assert_eq!(g.len(), 17);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[16], TAU);
        assert!((g[8] - PI).abs() < 1e-15);
        assert_eq!(phase_grid(1), vec![0.0]);
    }

    #[test]
    fn header_order() {
        let mut buf = Vec::new();
        let rows = sweep_phase(&[0.0], &ExperimentConfig::ideal(0.0, 100, 1)).unwrap();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn empty_estimate_leaves_blank_cells() {
        let c = ExperimentConfig { detector_efficiency: 0.0, ..ExperimentConfig::ideal(0.0, 100, 1) };
        let rows = sweep_phase(&[0.0], &c).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "0.0,100,0,100,0,0,0,0,,,1.0");
        assert_eq!(read_csv(text.as_bytes()).unwrap(), rows);
    }

    #[test]
    fn sweep_seeds_differ_per_point() {
        let c = ExperimentConfig::ideal(0.0, 2000, 5);
        let rows = sweep_phase(&[PI / 2.0, PI / 2.0], &c).unwrap();
        assert_ne!(rows[0].tally(), rows[1].tally());
    }

    #[test]
    fn fit_recovers_exact_cosine() {
        let rows: Vec<SweepRow> = phase_grid(9)
            .into_iter()
            .map(|phi| SweepRow {
                phi_rad: phi,
                trials: 1,
                kept: 1,
                discarded: 0,
                n_pp: 0,
                n_pm: 0,
                n_mp: 0,
                n_mm: 0,
                e_xx: Some(0.7 * phi.cos()),
                stderr: Some(0.01),
                expected: 0.0,
            })
            .collect();
        let fit = fit_cosine(&rows).unwrap();
        assert!((fit.amplitude - 0.7).abs() < 1e-14);
        assert_eq!(fit.points, 9);
    }
}
