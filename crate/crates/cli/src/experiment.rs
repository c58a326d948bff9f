//! Configuration resolution, run manifests and output for `experiment run|sweep`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use anyhow::{bail, Context, Result};
use clap::Args;
use extpoincare::photonics::{
    fit_cosine, phase_grid, sweep_phase_with_workers, write_csv, CosineFit, ExperimentConfig, SweepRow,
    STREAM_DERIVATION,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{emit, Format, Global};

#[derive(Args, Debug, Clone, Default)]
pub struct ExperimentFlags {
    /// JSON file with flat keys named after the flags; a run manifest is also accepted
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Interferometric phase φ in radians
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub visibility: Option<f64>,
    /// Detector efficiency η
    #[arg(long)]
    pub eta: Option<f64>,
    /// Dark-click probability per detector per trial
    #[arg(long)]
    pub dark: Option<f64>,
    /// Gaussian phase-jitter standard deviation (rad)
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Every key a config file may set.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    phi: Option<f64>,
    visibility: Option<f64>,
    eta: Option<f64>,
    dark: Option<f64>,
    sigma: Option<f64>,
    trials: Option<u64>,
    seed: Option<u64>,
    points: Option<usize>,
    workers: Option<usize>,
}

fn load_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("malformed JSON in {}", path.display()))?;
    if let Some(inner) = value.get("config").filter(|_| value.get("command").is_some()) {
        value = inner.clone();
    }
    serde_json::from_value(value).with_context(|| format!("invalid key in {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub points: usize,
    pub workers: usize,
}

pub fn resolve(flags: &ExperimentFlags, seed: Option<u64>, points: Option<usize>) -> Result<Resolved> {
    let file = match &flags.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    let d = ExperimentConfig::default();
    let config = ExperimentConfig {
        phase: flags.phi.or(file.phi).unwrap_or(d.phase),
        visibility: flags.visibility.or(file.visibility).unwrap_or(d.visibility),
        detector_efficiency: flags.eta.or(file.eta).unwrap_or(d.detector_efficiency),
        dark_count_prob: flags.dark.or(file.dark).unwrap_or(d.dark_count_prob),
        phase_noise_sigma: flags.sigma.or(file.sigma).unwrap_or(d.phase_noise_sigma),
        trials: flags.trials.or(file.trials).unwrap_or(d.trials),
        seed: seed.or(file.seed).unwrap_or(d.seed),
    };
    config.validate()?;
    let points = points.or(file.points).unwrap_or(17);
    if points == 0 {
        bail!("invalid value for `points`: must be positive");
    }
    let workers = flags.workers.or(file.workers).unwrap_or_else(default_workers);
    if workers == 0 {
        bail!("invalid value for `workers`: must be positive");
    }
    Ok(Resolved { config, points, workers })
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub timestamp: String,
    pub seed: u64,
    pub seed_derivation: &'static str,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<CosineFit>,
}

fn manifest(command: &str, resolved: &Resolved, fit: Option<CosineFit>) -> RunManifest {
    let mut config = serde_json::to_value(resolved.config).expect("config serializes");
    if command == "experiment sweep" {
        config["points"] = json!(resolved.points);
    }
    RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        timestamp: humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
        seed: resolved.config.seed,
        seed_derivation: STREAM_DERIVATION,
        config,
        fit,
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

pub fn execute(command: &str, flags: &ExperimentFlags, points: Option<usize>, global: &Global) -> Result<()> {
    let resolved = resolve(flags, global.seed, points)?;
    if let (Some(out), Some(cfg)) = (&global.out, &flags.config) {
        if same_file(out, cfg) {
            bail!("--out {} would overwrite the config file", out.display());
        }
    }
    let phis = if command == "experiment run" { vec![resolved.config.phase] } else { phase_grid(resolved.points) };
    let rows = sweep_phase_with_workers(&phis, &resolved.config, resolved.workers)?;
    for row in rows.iter().filter(|r| r.e_xx.is_none()) {
        eprintln!(
            "warning: no coincidences at phi_rad={} ({} of {} trials discarded); e_xx and stderr left empty",
            row.phi_rad, row.discarded, row.trials
        );
    }
    let fit = (command == "experiment sweep").then(|| fit_cosine(&rows)).flatten();
    if let Some(f) = fit {
        eprintln!("fit E_XX = a·cos φ: a = {:.6} ± {:.6} over {} points", f.amplitude, f.stderr, f.points);
    }
    let manifest = manifest(command, &resolved, fit);
    let manifest_json = serde_json::to_string_pretty(&manifest)?;

    match global.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            emit(global.out.as_deref(), &csv_bytes(&rows)?)?;
            match &global.out {
                Some(out) => fs::write(manifest_path(out), manifest_json + "\n")
                    .with_context(|| format!("writing manifest next to {}", out.display()))?,
                None => eprintln!("{manifest_json}"),
            }
        }
        Format::Json => {
            let doc = json!({ "manifest": manifest, "rows": rows });
            emit(global.out.as_deref(), (serde_json::to_string_pretty(&doc)? + "\n").as_bytes())?;
        }
    }
    Ok(())
}

fn csv_bytes(rows: &[SweepRow]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(buf)
}
