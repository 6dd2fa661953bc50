//! Command-line front end: subcommands, run configuration and output
//! formats for the cavity-mediated gate simulator.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod reference;

use config::{Format, Mode, NRange, Overrides, RunConfig, Settings};
use error::{CliError, EXIT_CONFIG, EXIT_OK, EXIT_VERIFICATION};

#[derive(Debug, Parser)]
#[command(name = "cavqed", version, about = "Simulate and check cavity-mediated non-local two-qubit gates")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Run configuration (TOML, or JSON with a .json extension).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Hamiltonian of the cavity-interaction step.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Atom-cavity detuning in units of the coupling.
    #[arg(long, global = true, env = "CAVQED_DELTA")]
    pub delta: Option<f64>,
    /// Atomic decay rate.
    #[arg(long, global = true, env = "CAVQED_GAMMA")]
    pub gamma: Option<f64>,
    /// Cavity decay rate.
    #[arg(long, global = true, env = "CAVQED_KAPPA")]
    pub kappa: Option<f64>,
    /// Atom-cavity coupling (sets the unit of all rates).
    #[arg(long, global = true, env = "CAVQED_OMEGA_C")]
    pub omega_c: Option<f64>,
    /// Maximum integrator step.
    #[arg(long, global = true, env = "CAVQED_DT")]
    pub dt: Option<f64>,
    /// Population allowed in the highest photon level.
    #[arg(long, global = true, env = "CAVQED_LEAKAGE_TOL")]
    pub leakage_tol: Option<f64>,
    /// Highest cavity photon number kept.
    #[arg(long, global = true, env = "CAVQED_N_MAX")]
    pub n_max: Option<usize>,
    /// Include full state vectors in JSON output.
    #[arg(long, global = true)]
    pub dump_states: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the C-Sign gate on all four basis inputs and check every step.
    TruthTable {
        /// Amplitude tolerance (default 1e-8 effective, 1e-2 otherwise).
        #[arg(long, env = "CAVQED_TOL")]
        tol: Option<f64>,
    },
    /// Gate fidelity under atomic and cavity decay.
    Fidelity {
        /// Recompute the published seven-point table and diff against it.
        #[arg(long, conflicts_with = "experimental")]
        paper_grid: bool,
        /// Evaluate the reference experimental cavity.
        #[arg(long)]
        experimental: bool,
    },
    /// Extra operations for a gate between the ends of an N-qubit chain.
    Cost {
        /// Register size or inclusive range, e.g. 10 or 3..12.
        #[arg(long, env = "CAVQED_N")]
        n: Option<NRange>,
        /// Error-correcting operations per fault-tolerant CNOT.
        #[arg(long, env = "CAVQED_FAULT_FACTOR")]
        fault_factor: Option<u64>,
    },
    /// Circuit identities and dynamics-vs-closed-form checks.
    Verify {
        /// Also check entangled-pair preparation.
        #[arg(long)]
        bell: bool,
        /// Offset the simulated coupling by a seeded random amount.
        #[arg(long, hide = true, value_name = "SEED")]
        perturb: Option<u64>,
    },
    /// Prepare an entangled pair from |e g> and compare with the ideal state.
    Bell {
        /// Input state JSON (default |e g> with the cavity empty).
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
        /// Write per-step t,norm,leakage CSV here.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Run the decomposed Toffoli gate on a basis input.
    Toffoli {
        /// Input bits for (control 1, control 2, target), e.g. 110.
        #[arg(long, default_value = "111")]
        input: String,
    },
}

/// Report body plus whether every check in it passed.
#[derive(Debug)]
pub struct Report {
    pub body: String,
    pub passed: bool,
    /// Short description of what failed.
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Report { body, passed: true, failure: None }
    }

    pub fn checked(body: String, failure: Option<String>) -> Self {
        Report { body, passed: failure.is_none(), failure }
    }
}

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let file = match &cli.common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let c = &cli.common;
    let (n, fault_factor) = match &cli.command {
        Command::Cost { n, fault_factor } => (*n, *fault_factor),
        _ => (None, None),
    };
    Settings::resolve(
        file,
        Overrides {
            format: c.format,
            out: c.out.clone(),
            mode: c.mode,
            omega_c: c.omega_c,
            delta: c.delta,
            kappa: c.kappa,
            gamma: c.gamma,
            dt: c.dt,
            leakage_tol: c.leakage_tol,
            n_max: c.n_max,
            dump_states: c.dump_states,
            n,
            fault_factor,
        },
    )
}

/// Parses arguments, runs the command and writes its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let s = settings(cli)?;
    let report = match &cli.command {
        Command::TruthTable { tol } => commands::truth_table(&s, *tol)?,
        Command::Fidelity { paper_grid, experimental } => commands::fidelity(&s, *paper_grid, *experimental)?,
        Command::Cost { .. } => commands::cost(&s)?,
        Command::Verify { bell, perturb } => commands::verify(&s, *bell, *perturb)?,
        Command::Bell { state, trace } => commands::bell(&s, state.as_deref(), trace.as_deref())?,
        Command::Toffoli { input } => commands::toffoli(&s, input)?,
    };
    match &s.out {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| CliError::io(path.display(), e))?,
        None => print!("{}", report.body),
    }
    Ok(report)
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    match execute(&cli) {
        Ok(report) if report.passed => ExitCode::from(EXIT_OK),
        Ok(report) => {
            eprintln!("FAILED: {}", report.failure.unwrap_or_default());
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
