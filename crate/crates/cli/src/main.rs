//! `trispin`: command-line front end for the donor-spin CNOT toolkit.
//!
//! Exit codes: 0 success (a non-converged optimization is still data),
//! 2 configuration error, 3 I/O error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use trispin_core::{Axis, StrainMode};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

#[derive(Parser)]
#[command(
    name = "trispin",
    version,
    about = "Donor-spin CNOT toolkit: exchange statistics, drive spectra, \
             pulse optimization, scheduling, and protocol verification"
)]
struct Cli {
    /// Run-configuration JSON file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// RNG seed (overrides the run config)
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads for sweeps and Monte-Carlo estimates
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Output directory (created if missing)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    #[value(name = "100")]
    Axis100,
    #[value(name = "110")]
    Axis110,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Axis100 => Axis::Axis100,
            AxisArg::Axis110 => Axis::Axis110,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strained,
    Unstrained,
}

impl From<ModeArg> for StrainMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strained => StrainMode::Strained,
            ModeArg::Unstrained => StrainMode::Unstrained,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exchange-strength distribution over the 15 placement classes
    ExchangeDist {
        /// Nominal donor separation in nm
        #[arg(long)]
        separation_nm: f64,
        /// Inter-donor crystal axis
        #[arg(long, value_enum, default_value = "100")]
        axis: AxisArg,
        /// Substrate strain mode
        #[arg(long, value_enum, default_value = "strained")]
        mode: ModeArg,
    },
    /// Transition table of the gate-time drift Hamiltonian
    Spectrum {
        #[arg(long)]
        j_tc_mhz: f64,
        #[arg(long)]
        j_cc_mhz: f64,
    },
    /// Optimize a CNOT pulse for one exchange pair
    Grape {
        #[arg(long)]
        j_tc_mhz: f64,
        #[arg(long)]
        j_cc_mhz: f64,
    },
    /// Optimize over the full 15 x 15 exchange grid (long-running)
    Sweep {
        /// Target-coupler donor separation in nm
        #[arg(long)]
        separation_tc_nm: f64,
        /// Coupler-control donor separation in nm
        #[arg(long)]
        separation_cc_nm: f64,
        #[arg(long, value_enum, default_value = "100")]
        axis: AxisArg,
        #[arg(long, value_enum, default_value = "strained")]
        mode: ModeArg,
    },
    /// Conflict-graph schedule from per-triple frequency sets
    Schedule {
        /// JSON file holding a list of per-triple frequency lists (MHz)
        #[arg(long, value_name = "PATH")]
        spectra: PathBuf,
        /// Frequencies closer than this collide
        #[arg(long, default_value_t = 1.0)]
        tolerance_mhz: f64,
        /// Collisions closer than this are driven by one broadband pulse
        /// and do not conflict (0 disables)
        #[arg(long, default_value_t = 0.0)]
        broadband_mhz: f64,
    },
    /// Monte-Carlo parallelism estimate on random conflict graphs
    Estimate {
        /// Number of triples
        #[arg(long)]
        n: usize,
        /// Pairwise collision probability
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run the six-step protocol and check the CNOT truth table
    ProtocolVerify {
        /// Pulse JSON file; omitted = ideal gate
        #[arg(long, value_name = "PATH")]
        pulse: Option<PathBuf>,
        /// Target-coupler exchange the pulse was optimized for
        #[arg(long, default_value_t = 20.0)]
        j_tc_mhz: f64,
        /// Coupler-control exchange the pulse was optimized for
        #[arg(long, default_value_t = 5.0)]
        j_cc_mhz: f64,
        /// Micro-steps per pulse segment during verification
        #[arg(long, default_value_t = 20)]
        micro_steps: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        // ignore the error if a pool already exists (e.g. repeated in-process use)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    let settings = config::resolve(cli.config.as_deref(), cli.seed, cli.out.as_deref())?;
    std::fs::create_dir_all(&settings.out_dir).map_err(|e| {
        CliError::Io(format!("cannot create output directory {}: {e}", settings.out_dir.display()))
    })?;

    match cli.command {
        Command::ExchangeDist { separation_nm, axis, mode } => {
            commands::exchange_dist(&settings, separation_nm, axis.into(), mode.into())
        }
        Command::Spectrum { j_tc_mhz, j_cc_mhz } => {
            commands::spectrum(&settings, j_tc_mhz, j_cc_mhz)
        }
        Command::Grape { j_tc_mhz, j_cc_mhz } => commands::grape(&settings, j_tc_mhz, j_cc_mhz),
        Command::Sweep { separation_tc_nm, separation_cc_nm, axis, mode } => {
            commands::sweep(&settings, separation_tc_nm, separation_cc_nm, axis.into(), mode.into())
        }
        Command::Schedule { spectra, tolerance_mhz, broadband_mhz } => {
            commands::schedule(&settings, &spectra, tolerance_mhz, broadband_mhz)
        }
        Command::Estimate { n, p, trials } => commands::estimate(&settings, n, p, trials),
        Command::ProtocolVerify { pulse, j_tc_mhz, j_cc_mhz, micro_steps } => {
            commands::protocol_verify(&settings, pulse.as_deref(), j_tc_mhz, j_cc_mhz, micro_steps)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(3)
        }
    }
}
