use std::io::Write;

use clap::Args;
use serde::Serialize;

use lexshift_core::corpus::DatasetSummary;
use lexshift_core::metrics::DifficultyReport;

use crate::config::{GlobalArgs, OutputFormat};
use crate::output::{csv_artifact, emit, fmt2, json_artifact};
use crate::{load_datasets, CliError, DatasetArg};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Datasets as PATH or NAME=PATH (JSONL).
    #[arg(required = true)]
    pub datasets: Vec<DatasetArg>,
}

#[derive(Debug, Serialize)]
pub struct DatasetAnalysis {
    pub summary: DatasetSummary,
    pub difficulty: DifficultyReport,
    pub skipped_degenerate: usize,
}

#[derive(Serialize)]
struct Body<'a> {
    datasets: &'a [DatasetAnalysis],
}

pub fn analyze(args: &AnalyzeArgs, global: &GlobalArgs) -> Result<Vec<DatasetAnalysis>, CliError> {
    load_datasets(&args.datasets, global)?
        .iter()
        .map(|ds| {
            Ok(DatasetAnalysis {
                summary: ds.summary(),
                difficulty: DifficultyReport::compute(ds, global.rouge, global.candidate)?,
                skipped_degenerate: ds.skipped_degenerate(),
            })
        })
        .collect()
}

pub fn run(
    args: &AnalyzeArgs,
    global: &GlobalArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let reports = analyze(args, global)?;
    let config = global.run_config(OutputFormat::Json);
    let text = match config.output_format {
        OutputFormat::Json => json_artifact(&config, &Body { datasets: &reports })?,
        OutputFormat::Csv => csv_artifact(&config, |w| {
            w.write_record([
                "name",
                "domain_label",
                "n_samples",
                "doc_words_total",
                "sum_words_total",
                "doc_words_avg",
                "sum_words_avg",
                "compression_ratio",
                "abstraction_level",
                "learning_difficulty",
            ])?;
            for r in &reports {
                let s = &r.summary;
                let d = &r.difficulty;
                w.write_record([
                    s.name.clone(),
                    s.domain_label.clone(),
                    s.n_samples.to_string(),
                    s.doc_words_total.to_string(),
                    s.sum_words_total.to_string(),
                    fmt2(s.doc_words_avg),
                    fmt2(s.sum_words_avg),
                    fmt2(d.alpha),
                    fmt2(d.beta),
                    fmt2(d.lambda()),
                ])?;
            }
            Ok(())
        })?,
    };
    emit(&text, global.out.as_deref(), stdout)
}
