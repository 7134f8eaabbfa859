//! Command-line front end for the `atomic-mirror` library: parameter
//! resolution, parallel grid sweeps and table emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod table;

use std::io::Write;

use thiserror::Error;

use args::{Cli, Command, OutputArgs};
use config::ConfigFile;
use table::{Format, Table, TableError};

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_VALIDATION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(atomic_mirror::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("output: {0}")]
    Output(#[from] TableError),
}

impl From<atomic_mirror::Error> for CliError {
    fn from(e: atomic_mirror::Error) -> Self {
        match e {
            atomic_mirror::Error::SingularSystem { .. } => CliError::Numeric(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Output(_) => 1,
        }
    }
}

fn emit(
    table: &Table,
    output: &OutputArgs,
    config: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let cfg = ConfigFile::load(config)?;
    let format = match output.format {
        Some(f) => f,
        None => match cfg.get::<String>("format")? {
            None => Format::Csv,
            Some(s) => <Format as clap::ValueEnum>::from_str(&s, false)
                .map_err(|_| CliError::Config(format!("unknown format {s:?}")))?,
        },
    };
    let text = table.render(format)?;
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(TableError::from)?,
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(TableError::from)?,
    }
    Ok(())
}

/// Table produced by a table-emitting subcommand (all but `validate`).
pub fn table_for(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::SpectrumApprox(a) => commands::spectrum_approx(a),
        Command::Bandwidth(a) => commands::bandwidth(a),
        Command::Bands(a) => commands::bands(a),
        Command::Convergence(a) => commands::convergence(a),
        Command::Disorder(a) => commands::disorder(a),
        Command::Loss(a) => commands::loss(a),
        Command::Validate(_) => Err(CliError::Config(
            "validate produces a report, not a table".into(),
        )),
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    let (output, config) = match command {
        Command::Spectrum(a) | Command::SpectrumApprox(a) => (&a.output, &a.model.config),
        Command::Bandwidth(a) => (&a.output, &a.model.config),
        Command::Bands(a) => (&a.output, &a.model.config),
        Command::Convergence(a) => (&a.output, &a.model.config),
        Command::Disorder(a) => (&a.output, &a.model.config),
        Command::Loss(a) => (&a.output, &a.model.config),
        Command::Validate(a) => {
            let outcomes = commands::validate(a)?;
            for o in &outcomes {
                println!("{o}");
            }
            let failed: Vec<&str> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.name)
                .collect();
            return if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(failed.join(", ")))
            };
        }
    };
    emit(&table_for(command)?, output, config.as_deref())
}

/// Runs one parsed invocation, on a dedicated pool when `--threads` is given.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.threads {
        None => dispatch(&cli.command),
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| dispatch(&cli.command)),
    }
}
