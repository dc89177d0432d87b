//! `lexshift` command-line interface.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use lexshift_core::corpus::{load_jsonl_with, Dataset, LoadOptions};

pub mod commands;
pub mod config;
pub mod output;

use config::GlobalArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] lexshift_core::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lexshift",
    version,
    about = "Summarization dataset difficulty, cross-domain overlap and LD-Gain prediction"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compression ratio, abstraction level and learning difficulty per dataset.
    Analyze(commands::analyze::AnalyzeArgs),
    /// Cross-domain word overlap between source and target datasets.
    Overlap(commands::overlap::OverlapArgs),
    /// Fit LD-Gain = beta0 + beta1 * gamma by least squares.
    Fit(commands::fit::FitArgs),
    /// Predict fine-tuned ROUGE from a fitted model.
    Predict(commands::predict::PredictArgs),
    /// Split a training set into chunks and report per-chunk overlap.
    Chunk(commands::chunk::ChunkArgs),
}

/// A dataset argument: `PATH` or `NAME=PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetArg {
    pub name: Option<String>,
    pub path: PathBuf,
}

impl std::str::FromStr for DatasetArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err("empty dataset argument".into());
        }
        match s.split_once('=') {
            Some((name, path)) if !name.is_empty() && !name.contains('/') && !path.is_empty() => {
                Ok(DatasetArg {
                    name: Some(name.to_owned()),
                    path: PathBuf::from(path),
                })
            }
            _ => Ok(DatasetArg {
                name: None,
                path: PathBuf::from(s),
            }),
        }
    }
}

pub(crate) fn load_dataset(arg: &DatasetArg, global: &GlobalArgs) -> Result<Dataset, CliError> {
    let opts = LoadOptions {
        skip_degenerate: global.skip_degenerate,
        name: arg.name.clone(),
        domain_label: None,
    };
    Ok(load_jsonl_with(&arg.path, &global.tokenizer(), &opts)?)
}

pub(crate) fn load_datasets(
    args: &[DatasetArg],
    global: &GlobalArgs,
) -> Result<Vec<Dataset>, CliError> {
    args.iter().map(|a| load_dataset(a, global)).collect()
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze::run(a, &cli.global, stdout),
        Command::Overlap(a) => commands::overlap::run(a, &cli.global, stdout),
        Command::Fit(a) => commands::fit::run(a, &cli.global, stdout),
        Command::Predict(a) => commands::predict::run(a, &cli.global, stdout),
        Command::Chunk(a) => commands::chunk::run(a, &cli.global, stdout),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    1
                }
            };
        }
    };

    let result = match cli.global.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                pool.install(|| execute(&cli, &mut buf)).and_then(|()| {
                    stdout
                        .write_all(&buf)
                        .map_err(|e| CliError::Internal(format!("stdout: {e}")))
                })
            }
            Err(e) => Err(CliError::Internal(e.to_string())),
        },
        None => execute(&cli, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
