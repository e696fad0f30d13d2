//! `blackstart` — black-start transformer energization simulator.
//!
//! Subcommands:
//! * `simulate` — run one scenario file, write waveforms.csv,
//!   trajectory.csv, and metrics.json into the output directory.
//! * `compare` — run the built-in method-comparison matrix, write
//!   comparison.csv and summary.txt, print the summary.
//! * `sweep-residual` — sweep the residual-flux magnitude for one profile,
//!   write sweep.csv.
//!
//! Exit codes: 0 success, 2 schema/usage error, 3 numerical divergence,
//! 1 anything else. `BLACKSTART_THREADS` caps scenario parallelism.

mod output;
mod scenario_file;

use blackstart::compare::{build_comparison, CompareConfig};
use blackstart::frames::AlphaBeta;
use blackstart::{run, run_batch, Scenario, SimError, SystemParams};
use clap::{Parser, Subcommand};
use scenario_file::{parse_scenario, profile_from_tag};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_SCHEMA: u8 = 2;
const EXIT_DIVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "blackstart", version, about = "Black-start transformer energization simulator")]
struct Cli {
    /// Seed for the randomized residual directions in `compare`'s
    /// demagnetization rows.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and write its waveforms and metrics.
    Simulate {
        /// Scenario JSON file.
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Connect the inverter straight to the transformer, overriding
        /// the scenario's filter section.
        #[arg(long)]
        no_filter: bool,
    },
    /// Run the built-in comparison of all methods and residual cases.
    Compare {
        #[arg(long)]
        out: PathBuf,
        /// Skip the filtered runs (no surge column).
        #[arg(long)]
        no_filter: bool,
    },
    /// Sweep residual-flux magnitude from zero to the knee for one profile.
    SweepResidual {
        /// Profile tag: hard | ultrafast | spiral.
        #[arg(long)]
        profile: String,
        /// Number of sweep points (>= 2).
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_filter: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { scenario, out, no_filter } => simulate(&scenario, &out, no_filter),
        Command::Compare { out, no_filter } => compare(&out, no_filter, cli.seed),
        Command::SweepResidual { profile, points, out, no_filter } => {
            sweep_residual(&profile, points, &out, no_filter)
        }
    };
    match code {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { message, exit }) => {
            eprintln!("error: {message}");
            ExitCode::from(exit)
        }
    }
}

struct CliError {
    message: String,
    exit: u8,
}

impl CliError {
    fn schema(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit: EXIT_SCHEMA }
    }

    fn other(message: impl Into<String>) -> Self {
        Self { message: message.into(), exit: 1 }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::other(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let exit = match e {
            SimError::NumericalDivergence { .. } => EXIT_DIVERGENCE,
            _ => 1,
        };
        Self { message: e.to_string(), exit }
    }
}

fn simulate(scenario_path: &Path, out: &Path, no_filter: bool) -> Result<(), CliError> {
    let text = std::fs::read_to_string(scenario_path)
        .map_err(|e| CliError::other(format!("cannot read {}: {e}", scenario_path.display())))?;
    let (scenario, resolved) =
        parse_scenario(&text, no_filter).map_err(|e| CliError::schema(e.to_string()))?;

    let result = run(&scenario)?;

    std::fs::create_dir_all(out)?;
    output::write_waveforms(&out.join("waveforms.csv"), &result.series)?;
    output::write_trajectory(&out.join("trajectory.csv"), &result.series)?;
    output::write_metrics(&out.join("metrics.json"), &result, &resolved)?;

    println!(
        "{}: peak i_pcc {:.4} pu, peak i_inv {:.4} pu, flux offset {:.5} Wb, start-up {}",
        result.metrics.method,
        result.metrics.peak_i_pcc_pu,
        result.metrics.peak_i_inv_pu,
        result.metrics.flux_dc_offset_wb,
        result
            .metrics
            .startup_time_s
            .map_or("not reached".to_string(), |t| format!("{:.3} ms", 1e3 * t)),
    );
    Ok(())
}

fn compare(out: &Path, no_filter: bool, seed: u64) -> Result<(), CliError> {
    let mut cfg = CompareConfig::bench();
    cfg.no_filter = no_filter;
    cfg.seed = seed;
    let rows = build_comparison(&cfg);

    std::fs::create_dir_all(out)?;
    output::write_comparison(&out.join("comparison.csv"), &rows)?;
    let summary = output::comparison_summary(&rows);
    output::write_text(&out.join("summary.txt"), &summary)?;
    print!("{summary}");

    let failures: Vec<&str> = rows
        .iter()
        .filter(|r| r.error.is_some())
        .map(|r| r.method)
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::other(format!(
            "{} comparison run(s) failed; see comparison.csv",
            failures.len()
        )))
    }
}

fn sweep_residual(
    profile_tag: &str,
    points: usize,
    out: &Path,
    no_filter: bool,
) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::schema(format!(
            "--points must be at least 2, got {points}"
        )));
    }
    let params = SystemParams::default_5kva();
    let profile =
        profile_from_tag(profile_tag, &params).map_err(|e| CliError::schema(e.to_string()))?;

    let base = Scenario::bench(profile);
    let knee = base.core.lambda_knee;
    let scenarios: Vec<Scenario> = (0..points)
        .map(|k| {
            let mut sc = base.clone();
            if no_filter {
                sc.filter = None;
            }
            // Magnitude from 0 to the knee, direction fixed along alpha.
            sc.residual = AlphaBeta::new(knee * k as f64 / (points - 1) as f64, 0.0);
            sc
        })
        .collect();

    let mut rows = Vec::with_capacity(points);
    for (sc, res) in scenarios.iter().zip(run_batch(&scenarios)) {
        let res = res?;
        rows.push((
            sc.residual.magnitude(),
            res.metrics.peak_i_pcc_pu,
            res.metrics.flux_dc_offset_wb,
        ));
    }

    std::fs::create_dir_all(out)?;
    output::write_sweep(&out.join("sweep.csv"), &rows)?;
    println!(
        "{profile_tag}: swept {points} residual points up to {knee:.4} Wb -> {}",
        out.join("sweep.csv").display()
    );
    Ok(())
}
