mod experiment;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use extpoincare::checks::{bell_suite, group_suite, rep_suite, Report};
use extpoincare::lorentz::{Convention, Direction, FourVector};
use extpoincare::orbit::{z_orbit_in, OrbitClass};

use experiment::ExperimentFlags;

#[derive(Parser, Debug)]
#[command(name = "extpoincare", version, about = "Extended Poincaré group checks and interferometer simulation")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Global {
    /// Master seed for every random draw
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the primary output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Matrix used for Λ∞
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Momentum)]
    pub convention: ConventionArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ConventionArg {
    #[default]
    Momentum,
    Coordinate,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Momentum => Convention::Momentum,
            ConventionArg::Coordinate => Convention::Coordinate,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the group invariant suite
    GroupCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Images of a four-vector under Z and their orbit classes
    Orbit {
        #[arg(allow_negative_numbers = true)]
        p0: f64,
        #[arg(allow_negative_numbers = true)]
        p1: f64,
        #[arg(allow_negative_numbers = true)]
        p2: f64,
        #[arg(allow_negative_numbers = true)]
        p3: f64,
        /// Polar angle of the Λ∞ axis
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Azimuth of the Λ∞ axis
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Run the doublet-representation invariant suite
    RepCheck {
        #[arg(long, default_value_t = 24)]
        grid_size: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        helicity: i32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Run the two-qubit equivalence suite
    BellCheck {
        #[arg(long, default_value_t = 8)]
        grid_size: usize,
    },
    /// Monte Carlo interferometer runs
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Single phase setting
    Run {
        #[command(flatten)]
        flags: ExperimentFlags,
    },
    /// Equally spaced phases over [0, 2π]
    Sweep {
        #[command(flatten)]
        flags: ExperimentFlags,
        #[arg(long)]
        points: Option<usize>,
    },
}

pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn report_csv(report: &Report) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "passed", "max_deviation", "tolerance", "note"])?;
    for c in &report.checks {
        w.write_record([
            c.name.clone(),
            c.passed.to_string(),
            c.max_deviation.to_string(),
            c.tolerance.to_string(),
            c.note.clone().unwrap_or_default(),
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Text to stdout by default; `--format` selects a machine-readable form, and
/// `--out` always receives the JSON report unless CSV is requested.
fn emit_report(report: &Report, global: &Global) -> Result<()> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    match (global.format, &global.out) {
        (Some(Format::Csv), out) => emit(out.as_deref(), &report_csv(report)?),
        (Some(Format::Json), None) => emit(None, json.as_bytes()),
        (None, None) => emit(None, report.render_text().as_bytes()),
        (_, Some(out)) => {
            print!("{}", report.render_text());
            emit(Some(out), json.as_bytes())
        }
    }
}

fn orbit(p: FourVector, direction: Direction, global: &Global) -> Result<()> {
    let images = z_orbit_in(&p, direction, global.convention.into());
    if images.iter().all(|o| o.class == OrbitClass::Zero) {
        eprintln!("warning: p = 0 is a fixed point of every element; its orbit is the zero class");
    }
    let bytes = match global.format {
        Some(Format::Json) => {
            let doc = serde_json::json!({
                "p": p,
                "theta": direction.theta,
                "phi": direction.phi,
                "convention": Convention::from(global.convention),
                "images": images,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["z", "p0", "p1", "p2", "p3", "class"])?;
            for o in &images {
                let a = o.image.to_array().map(|x| x + 0.0);
                w.write_record([
                    o.z.label().to_string(),
                    a[0].to_string(),
                    a[1].to_string(),
                    a[2].to_string(),
                    a[3].to_string(),
                    o.class.name().to_string(),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        None => {
            let mut s = format!("{:<6} {:>12} {:>12} {:>12} {:>12}  class\n", "z", "p0", "p1", "p2", "p3");
            for o in &images {
                // `+ 0.0` prints negative zero as zero
                let a = o.image.to_array().map(|x| x + 0.0);
                s += &format!(
                    "{:<6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}  {}\n",
                    o.z.label(),
                    a[0],
                    a[1],
                    a[2],
                    a[3],
                    o.class
                );
            }
            s
        }
    };
    emit(global.out.as_deref(), bytes.as_bytes())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let seed = g.seed.unwrap_or(1);
    match cli.command {
        Command::GroupCheck { samples } => emit_report(&group_suite(g.convention.into(), samples, seed)?, g),
        Command::Orbit { p0, p1, p2, p3, theta, phi } => {
            orbit(FourVector::new(p0, p1, p2, p3), Direction::new(theta, phi), g)
        }
        Command::RepCheck { grid_size, helicity, trials } => {
            emit_report(&rep_suite(grid_size, helicity, trials, seed)?, g)
        }
        Command::BellCheck { grid_size } => emit_report(&bell_suite(grid_size, seed)?, g),
        Command::Experiment(ExperimentCommand::Run { flags }) => experiment::execute("experiment run", &flags, None, g),
        Command::Experiment(ExperimentCommand::Sweep { flags, points }) => {
            experiment::execute("experiment sweep", &flags, points, g)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
