use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use lexshift_core::metrics::{cross_domain_overlap, DifficultyReport, GammaUnit};
use lexshift_core::predict::{evaluate_fit, predict_rouge, LinearModel, Prediction};

use crate::commands::fit::{read_record_file, ModelFile};
use crate::config::{GlobalArgs, OutputFormat};
use crate::output::{csv_artifact, emit, json_artifact};
use crate::{load_dataset, load_datasets, CliError, DatasetArg};

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model JSON written by `fit`.
    #[arg(long)]
    pub model: PathBuf,
    /// Cross-domain overlap of the new pair, in --gamma-unit.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<String>,
    /// Learning difficulty coefficient of the target.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// ROUGE of the model before fine-tuning, percent points.
    #[arg(long, allow_negative_numbers = true)]
    pub base: Option<f64>,
    /// Training datasets used to compute gamma when --gamma is absent.
    #[arg(long, num_args = 1..)]
    pub sources: Vec<DatasetArg>,
    /// Target dataset used to compute gamma and lambda when they are absent.
    #[arg(long)]
    pub target: Option<DatasetArg>,
    /// Evaluation CSV; each row is predicted and compared with its fine-tuned score.
    #[arg(long, conflicts_with_all = ["gamma", "lambda", "base", "sources", "target"])]
    pub records: Option<PathBuf>,
    /// Datasets (NAME=PATH) used to fill missing gamma and lambda in --records.
    #[arg(long = "dataset", requires = "records")]
    pub datasets: Vec<DatasetArg>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictionRow {
    pub source: String,
    pub target: String,
    pub gamma: f64,
    pub lambda: f64,
    pub rouge_base: f64,
    #[serde(flatten)]
    pub prediction: Prediction,
    pub actual: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PredictionReport {
    pub predictions: Vec<PredictionRow>,
    pub mean_abs_error: Option<f64>,
}

pub fn read_model(path: &Path) -> Result<LinearModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| lexshift_core::Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    let file: ModelFile = serde_json::from_str(&text).map_err(lexshift_core::Error::from)?;
    let mut model = file.model;
    if model.gamma_unit == GammaUnit::Percent {
        model.beta1 *= 100.0;
        model.gamma_unit = GammaUnit::Fraction;
    }
    Ok(model)
}

fn missing(what: &str) -> CliError {
    CliError::Usage(format!(
        "{what} is required (give it directly, or via --sources/--target datasets)"
    ))
}

pub fn predict(args: &PredictArgs, global: &GlobalArgs) -> Result<PredictionReport, CliError> {
    let model = read_model(&args.model)?;

    if let Some(path) = &args.records {
        let records = read_record_file(path, &args.datasets, global)?;
        let eval = evaluate_fit(&model, &records)?;
        let predictions = eval
            .records
            .into_iter()
            .map(|r| PredictionRow {
                source: r.source,
                target: r.target,
                gamma: r.gamma,
                lambda: r.lambda,
                rouge_base: r.rouge_base,
                prediction: r.prediction,
                actual: Some(r.actual),
                residual: Some(r.residual),
            })
            .collect();
        return Ok(PredictionReport {
            predictions,
            mean_abs_error: Some(eval.mean_abs_error),
        });
    }

    let base = args.base.ok_or_else(|| missing("--base"))?;
    let target = args
        .target
        .as_ref()
        .map(|t| load_dataset(t, global))
        .transpose()?;
    let gamma = match &args.gamma {
        Some(cell) => global
            .gamma_unit
            .parse_cell(cell)
            .map_err(CliError::Usage)?,
        None => {
            let target = target.as_ref().ok_or_else(|| missing("--gamma"))?;
            if args.sources.is_empty() {
                return Err(missing("--gamma"));
            }
            let sources = load_datasets(&args.sources, global)?;
            cross_domain_overlap(&sources, std::slice::from_ref(target), global.scope)?.gamma
        }
    };
    let lambda = match (args.lambda, &target) {
        (Some(l), _) => l,
        (None, Some(t)) => DifficultyReport::compute(t, global.rouge, global.candidate)?.lambda(),
        (None, None) => return Err(missing("--lambda")),
    };
    let prediction = predict_rouge(&model, gamma, lambda, base)?;
    let source = args
        .sources
        .iter()
        .map(|s| {
            s.name.clone().unwrap_or_else(|| {
                s.path
                    .file_stem()
                    .map(|x| x.to_string_lossy().into_owned())
                    .unwrap_or_default()
            })
        })
        .collect::<Vec<_>>()
        .join("+");
    Ok(PredictionReport {
        predictions: vec![PredictionRow {
            source,
            target: target.map(|t| t.name).unwrap_or_default(),
            gamma,
            lambda,
            rouge_base: base,
            prediction,
            actual: None,
            residual: None,
        }],
        mean_abs_error: None,
    })
}

pub fn run(
    args: &PredictArgs,
    global: &GlobalArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let report = predict(args, global)?;
    let config = global.run_config(OutputFormat::Csv);
    let text = match config.output_format {
        OutputFormat::Json => json_artifact(&config, &report)?,
        OutputFormat::Csv => csv_artifact(&config, |w| {
            let with_actual = report.mean_abs_error.is_some();
            let mut header = vec![
                "source",
                "target",
                "gamma",
                "lambda",
                "rouge_base",
                "predicted",
                "band_lo",
                "band_hi",
            ];
            if with_actual {
                header.extend(["actual", "residual"]);
            }
            w.write_record(&header)?;
            for r in &report.predictions {
                let mut row = vec![
                    r.source.clone(),
                    r.target.clone(),
                    r.gamma.to_string(),
                    r.lambda.to_string(),
                    r.rouge_base.to_string(),
                    r.prediction.predicted.to_string(),
                    r.prediction.band_lo.to_string(),
                    r.prediction.band_hi.to_string(),
                ];
                if with_actual {
                    row.push(r.actual.map(|v| v.to_string()).unwrap_or_default());
                    row.push(r.residual.map(|v| v.to_string()).unwrap_or_default());
                }
                w.write_record(&row)?;
            }
            Ok(())
        })?,
    };
    emit(&text, global.out.as_deref(), stdout)
}
