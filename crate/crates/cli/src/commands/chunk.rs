use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use lexshift_core::chunker::{
    build_stages, export_stages, split_chunks, stage_overlap_report, ChunkPlan, ReportUnit, Stage,
    StageReport,
};
use lexshift_core::metrics::{fill_records, read_records};

use crate::config::{GlobalArgs, OutputFormat};
use crate::output::{csv_preamble, emit, json_artifact, write_file};
use crate::{load_dataset, load_datasets, CliError, DatasetArg};

#[derive(Debug, Args)]
pub struct ChunkArgs {
    /// Training set to split, PATH or NAME=PATH.
    #[arg(long)]
    pub dataset: DatasetArg,
    /// Number of chunks.
    #[arg(short = 'k', long = "chunks", default_value_t = 10)]
    pub k: usize,
    /// Target datasets to measure overlap against.
    #[arg(long, required = true, num_args = 1..)]
    pub targets: Vec<DatasetArg>,
    /// Report one column per chunk (default) or per cumulative stage.
    #[arg(long, default_value = "chunk")]
    pub unit: ReportUnit,
    /// Evaluation CSV whose sources name columns (chunk0.., stage0..); adds LD-Gain rows.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Write stage_00.jsonl, stage_01.jsonl, ... into this directory.
    #[arg(long)]
    pub export_stages: Option<PathBuf>,
    /// Write the chunk plan (sample ids only) as JSON.
    #[arg(long)]
    pub plan: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct ChunkOutput {
    pub plan: ChunkPlan,
    pub stages: Vec<Stage>,
    pub report: StageReport,
}

pub fn chunk(args: &ChunkArgs, global: &GlobalArgs) -> Result<ChunkOutput, CliError> {
    let dataset = load_dataset(&args.dataset, global)?;
    let targets = load_datasets(&args.targets, global)?;
    let plan = split_chunks(&dataset, args.k, global.seed, global.scope)?;
    let stages = build_stages(&plan);

    let records = match &args.records {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| lexshift_core::Error::Io {
                path: path.clone(),
                source: e,
            })?;
            let mut recs = read_records(file, global.gamma_unit)?;
            fill_records(&mut recs, &targets, global.fill_settings())?;
            Some(recs)
        }
        None => None,
    };
    let report = stage_overlap_report(
        &dataset,
        &plan,
        &targets,
        args.unit,
        global.scope,
        records.as_deref(),
    )?;
    if let Some(dir) = &args.export_stages {
        export_stages(&dataset, &plan, dir)?;
    }
    Ok(ChunkOutput {
        plan,
        stages,
        report,
    })
}

pub fn run(args: &ChunkArgs, global: &GlobalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let out = chunk(args, global)?;
    let config = global.run_config(OutputFormat::Csv);
    if let Some(path) = &args.plan {
        write_file(path, &json_artifact(&config, &out.plan)?)?;
    }
    let text = match config.output_format {
        OutputFormat::Json => json_artifact(&config, &out)?,
        OutputFormat::Csv => {
            let mut body = Vec::new();
            out.report.write_csv(&mut body)?;
            let mut text = csv_preamble(&config)?;
            text.push_str(&String::from_utf8(body).map_err(|e| CliError::Internal(e.to_string()))?);
            text
        }
    };
    emit(&text, global.out.as_deref(), stdout)
}
