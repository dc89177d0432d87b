use std::io::Write;

use clap::Args;
use serde::Serialize;

use lexshift_core::metrics::{cross_domain_overlap, OverlapResult};

use crate::config::{GlobalArgs, OutputFormat};
use crate::output::{csv_artifact, emit, json_artifact, percent};
use crate::{load_datasets, CliError, DatasetArg};

#[derive(Debug, Args)]
pub struct OverlapArgs {
    /// Source (training) datasets as PATH or NAME=PATH.
    #[arg(long, required = true, num_args = 1..)]
    pub sources: Vec<DatasetArg>,
    /// Target (test) datasets as PATH or NAME=PATH.
    #[arg(long, required = true, num_args = 1..)]
    pub targets: Vec<DatasetArg>,
}

#[derive(Serialize)]
struct Body<'a> {
    gamma_display: String,
    #[serde(flatten)]
    result: &'a OverlapResult,
}

pub fn overlap(args: &OverlapArgs, global: &GlobalArgs) -> Result<OverlapResult, CliError> {
    let sources = load_datasets(&args.sources, global)?;
    let targets = load_datasets(&args.targets, global)?;
    Ok(cross_domain_overlap(&sources, &targets, global.scope)?)
}

pub fn run(
    args: &OverlapArgs,
    global: &GlobalArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let result = overlap(args, global)?;
    let config = global.run_config(OutputFormat::Json);
    let text = match config.output_format {
        OutputFormat::Json => json_artifact(
            &config,
            &Body {
                gamma_display: percent(result.gamma),
                result: &result,
            },
        )?,
        OutputFormat::Csv => csv_artifact(&config, |w| {
            w.write_record(["source", "target", "overlap"])?;
            for (i, s) in result.sources.iter().enumerate() {
                for (j, t) in result.targets.iter().enumerate() {
                    w.write_record([s.as_str(), t.as_str(), &percent(result.per_pair[i][j])])?;
                }
            }
            w.write_record(["gamma", "", &percent(result.gamma)])?;
            Ok(())
        })?,
    };
    emit(&text, global.out.as_deref(), stdout)
}
