//! `superatom`: spectra, eigenmodes, fits and figure sweeps for emitter
//! arrays in a waveguide.
//!
//! Exit status is 0 on success, 1 when a verification or analysis step
//! fails, and 2 for any configuration problem.

mod error;
mod input;
mod output;

mod eigen;
mod fit;
mod scenario;
mod spectrum;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "superatom", version, about, long_about = None)]
struct Cli {
    /// Output file; standard output when omitted
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads (0 uses every available core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Leave out the metadata block and the run timestamp
    #[arg(long, global = true)]
    no_meta: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmission and reflection over a probe grid
    Spectrum {
        #[command(flatten)]
        model: input::ModelArgs,
        #[command(flatten)]
        grid: input::GridArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Resolvent)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Markov)]
        convention: ConventionArg,
    },
    /// Run a scenario file and emit the long-form table plus analysis
    Sweep {
        /// Scenario specification (JSON)
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        #[command(flatten)]
        overrides: ScenarioOverrides,
    },
    /// Collective modes of the effective Hamiltonian
    Eigen {
        #[command(flatten)]
        model: input::ModelArgs,
    },
    /// Fit a single-qubit Lorentzian to a complex transmission trace
    Fit {
        /// Spectrum file written by `superatom spectrum` (CSV or JSON)
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
    },
    /// Regenerate one of the built-in figure sweeps
    Scenario {
        /// fig2, fig3, fig3_gradient, fig4, fig5 or smfig_s4
        name: String,
        #[command(flatten)]
        overrides: ScenarioOverrides,
    },
    /// Cross-check the resolvent against the transfer matrix
    Verify {
        #[command(flatten)]
        model: input::ModelArgs,
        #[command(flatten)]
        grid: input::GridArgs,
        /// Phase convention of the transfer-matrix side
        #[arg(long, value_enum, default_value_t = ConventionArg::Markov)]
        convention: ConventionArg,
    },
}

#[derive(Args)]
struct ScenarioOverrides {
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Resolvent,
    Modes,
    Tmatrix,
}

impl From<MethodArg> for superatom::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Resolvent => superatom::Method::Resolvent,
            MethodArg::Modes => superatom::Method::Modes,
            MethodArg::Tmatrix => superatom::Method::TransferMatrix,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Markov,
    Dispersive,
}

impl From<ConventionArg> for superatom::PhaseConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Markov => superatom::PhaseConvention::Markov,
            ConventionArg::Dispersive => superatom::PhaseConvention::Dispersive,
        }
    }
}

/// Where and how results are written.
pub struct Sink {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub meta: Option<output::Meta>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    let sink = Sink {
        out: cli.out,
        format: cli.format,
        meta: (!cli.no_meta).then(|| output::Meta::now(rayon::current_num_threads())),
    };

    match cli.command {
        Command::Spectrum {
            model,
            grid,
            method,
            convention,
        } => spectrum::run(&model, &grid, method.into(), convention.into(), &sink),
        Command::Sweep { config, overrides } => {
            let spec = input::read_scenario(&config)?;
            scenario::run(spec, &overrides, &sink)
        }
        Command::Eigen { model } => eigen::run(&model, &sink),
        Command::Fit { config } => fit::run(&config, &sink),
        Command::Scenario { name, overrides } => {
            let spec = superatom::scenarios::figure(&name)?;
            scenario::run(spec, &overrides, &sink)
        }
        Command::Verify {
            model,
            grid,
            convention,
        } => verify::run(&model, &grid, convention.into(), &sink),
    }
}
