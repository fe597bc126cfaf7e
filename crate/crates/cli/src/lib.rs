//! Command-line front end: single levels, shell tables, oracle sweeps and
//! reference comparisons.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use yukawa_core::spectra::{DEFAULT_DELTA0, DEFAULT_HARTREE_TO_EV};
use yukawa_core::{Order, QuantumState, ScreeningLaw, ScreeningModel, Shell, Source, UnitSystem};

pub mod commands;
pub mod output;
pub mod zlist;

pub use commands::Output;

#[derive(Debug, Parser)]
#[command(name = "yukawa", version, about = "Energy levels of neutral atoms in a screened Coulomb (Yukawa) potential")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Highest perturbative order included (0-3)
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=3))]
    order: u8,

    /// Screening coefficient; 0 gives the pure Coulomb problem
    #[arg(long, global = true, default_value_t = DEFAULT_DELTA0)]
    delta0: f64,

    #[arg(long, global = true, value_enum, default_value_t = Screening::FermiAmaldi)]
    screening: Screening,

    /// eV per Hartree used for keV output
    #[arg(long = "hartree-ev", global = true, default_value_t = DEFAULT_HARTREE_TO_EV)]
    hartree_ev: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Screening {
    #[value(name = "thomas_fermi")]
    ThomasFermi,
    #[value(name = "fermi_amaldi")]
    FermiAmaldi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-order energy breakdown of one level
    Level {
        #[arg(long)]
        z: u32,
        #[arg(long, conflicts_with = "shell")]
        n: Option<u32>,
        #[arg(long, conflicts_with = "shell")]
        l: Option<u32>,
        /// Shell label (E00, E01, E10, E11) instead of --n/--l
        #[arg(long)]
        shell: Option<Shell>,
    },
    /// Energies of one shell over a list of atoms
    Table {
        #[arg(long)]
        shell: Shell,
        /// Z list, e.g. `14`, `3,9,29`, `3..20`, `3..84:paper`, `paper`
        #[arg(long)]
        z: String,
        /// Reference CSV for the reference_kev column
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Compare perturbative energies with the direct numerical eigensolver
    Verify {
        /// Z list; `paper` selects the K-shell table atoms
        #[arg(long)]
        z: String,
        /// Level as `n,l`; repeatable
        #[arg(long = "state", value_parser = parse_state, default_value = "0,0")]
        states: Vec<QuantumState>,
    },
    /// Check computed energies against a reference table
    Compare {
        #[arg(long)]
        shell: Shell,
        /// Reference CSV; defaults to the bundled table for the shell
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Maximum accepted relative difference
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        /// Reference column to compare against
        #[arg(long, default_value = "present_work")]
        source: Source,
        /// Restrict to these Z (default: every Z in the reference column)
        #[arg(long)]
        z: Option<String>,
    },
}

fn parse_state(s: &str) -> Result<QuantumState, String> {
    let (n, l) = s.split_once(',').ok_or_else(|| format!("expected n,l, got '{s}'"))?;
    let parse = |v: &str| v.trim().parse::<u32>().map_err(|_| format!("invalid quantum number '{v}'"));
    Ok(QuantumState::new(parse(n)?, parse(l)?))
}

pub struct RunConfig {
    pub model: ScreeningModel,
    pub units: UnitSystem,
    pub order: Order,
    pub format: Format,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig, String> {
        let law = match self.screening {
            Screening::ThomasFermi => ScreeningLaw::ThomasFermi,
            Screening::FermiAmaldi => ScreeningLaw::FermiAmaldi,
        };
        Ok(RunConfig {
            model: ScreeningModel::new(law, self.delta0).map_err(|e| e.to_string())?,
            units: UnitSystem::new(self.hartree_ev).map_err(|e| e.to_string())?,
            order: Order::try_from(self.order).map_err(|e| e.to_string())?,
            format: self.format,
        })
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments; printed with usage.
    Usage(String),
    /// Unreadable or invalid input files.
    Input(String),
    Tolerance,
    NonConvergence,
}

/// Runs one invocation and returns its exit code with the collected output:
/// 0 success, 1 tolerance failure, 2 usage or input error, 3 oracle
/// non-convergence.
pub fn run<I, T>(args: I) -> (u8, Output)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = Output::default();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            if e.use_stderr() {
                if !text.contains("Usage:") {
                    text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
                }
                out.stderr = text;
            } else {
                out.stdout = text;
            }
            return (u8::try_from(e.exit_code()).unwrap_or(2), out);
        }
    };
    let result = cli.config.resolve().map_err(Failure::Usage).and_then(|config| match cli.command {
        Command::Level { z, n, l, shell } => {
            let state = shell.map_or(QuantumState::new(n.unwrap_or(0), l.unwrap_or(0)), Shell::state);
            commands::level(&config, z, state, &mut out)
        }
        Command::Table { shell, z, reference } => commands::table(&config, shell, &z, reference.as_deref(), &mut out),
        Command::Verify { z, states } => commands::verify(&config, &z, &states, &mut out),
        Command::Compare { shell, reference, tolerance, source, z } => {
            commands::compare(&config, shell, reference.as_deref(), tolerance, source, z.as_deref(), &mut out)
        }
    });
    let code = match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            out.stderr.push_str(&Cli::command().error(ErrorKind::InvalidValue, msg).render().to_string());
            2
        }
        Err(Failure::Input(msg)) => {
            out.stderr.push_str(&format!("error: {msg}\n"));
            2
        }
        Err(Failure::Tolerance) => 1,
        Err(Failure::NonConvergence) => 3,
    };
    (code, out)
}
