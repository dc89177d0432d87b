use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use lexshift_core::metrics::{fill_records, read_records, AdaptationRecord, GammaUnit};
use lexshift_core::plot::{render_fit_svg, PlotOptions};
use lexshift_core::predict::{fit_ols, fit_points, FitPoint, LinearModel};

use crate::config::{GlobalArgs, OutputFormat};
use crate::output::{csv_artifact, emit, json_artifact, write_file, TOOL_NAME, TOOL_VERSION};
use crate::{load_datasets, CliError, DatasetArg};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with columns gamma,ld_gain.
    #[arg(long, conflicts_with = "records", required_unless_present = "records")]
    pub points: Option<PathBuf>,
    /// Evaluation CSV (source,target,[gamma],[lambda],rouge_base,rouge_finetuned).
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Datasets (NAME=PATH) used to fill missing gamma and lambda in --records.
    #[arg(long = "dataset")]
    pub datasets: Vec<DatasetArg>,
    /// Write an SVG of the points, fitted line and ±1σ band.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Skip plot output even when --svg is given.
    #[arg(long)]
    pub csv_only: bool,
    #[arg(long, default_value = "LD-Gain vs cross-domain overlap")]
    pub title: String,
}

/// Model file layout: the model's keys plus the points it was fitted on.
#[derive(Debug, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(flatten)]
    pub model: LinearModel,
    #[serde(default)]
    pub points: Vec<FitPoint>,
}

#[derive(Debug, Deserialize)]
struct PointRow {
    gamma: String,
    ld_gain: f64,
}

pub fn read_points(path: &Path, unit: GammaUnit) -> Result<Vec<FitPoint>, CliError> {
    let file = File::open(path).map_err(|e| lexshift_core::Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    rdr.deserialize::<PointRow>()
        .enumerate()
        .map(|(i, row)| {
            let row = row.map_err(lexshift_core::Error::from)?;
            let gamma = unit.parse_cell(&row.gamma).map_err(|message| {
                lexshift_core::Error::InvalidRecord {
                    index: i + 1,
                    message,
                }
            })?;
            Ok(FitPoint::new(gamma, row.ld_gain))
        })
        .collect()
}

pub fn read_record_file(
    path: &Path,
    datasets: &[DatasetArg],
    global: &GlobalArgs,
) -> Result<Vec<AdaptationRecord>, CliError> {
    let file = File::open(path).map_err(|e| lexshift_core::Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    let mut records = read_records(file, global.gamma_unit)?;
    if !datasets.is_empty() {
        let loaded = load_datasets(datasets, global)?;
        fill_records(&mut records, &loaded, global.fill_settings())?;
    }
    Ok(records)
}

pub fn fit(args: &FitArgs, global: &GlobalArgs) -> Result<ModelFile, CliError> {
    let points = match (&args.points, &args.records) {
        (Some(p), _) => read_points(p, global.gamma_unit)?,
        (None, Some(r)) => fit_points(&read_record_file(r, &args.datasets, global)?)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --points or --records is required".into(),
            ))
        }
    };
    let model = fit_ols(&points)?;
    Ok(ModelFile { model, points })
}

pub fn run(args: &FitArgs, global: &GlobalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let fitted = fit(args, global)?;
    let config = global.run_config(OutputFormat::Json);
    let text = match config.output_format {
        OutputFormat::Json => json_artifact(&config, &fitted)?,
        OutputFormat::Csv => csv_artifact(&config, |w| {
            let m = &fitted.model;
            w.write_record([
                "beta0",
                "beta1",
                "residual_std",
                "n_points",
                "r_squared",
                "gamma_unit",
            ])?;
            w.write_record([
                m.beta0.to_string(),
                m.beta1.to_string(),
                m.residual_std.to_string(),
                m.n_points.to_string(),
                m.r_squared.to_string(),
                m.gamma_unit.to_string(),
            ])?;
            Ok(())
        })?,
    };
    if let (Some(svg_path), false) = (&args.svg, args.csv_only) {
        let meta = format!(
            "{TOOL_NAME} {TOOL_VERSION} run_config: {}",
            serde_json::to_string(&config).map_err(|e| CliError::Internal(e.to_string()))?
        );
        let svg = render_fit_svg(
            &fitted.model,
            &fitted.points,
            &PlotOptions {
                title: args.title.clone(),
                metadata: Some(meta),
            },
        );
        write_file(svg_path, &svg)?;
    }
    emit(&text, global.out.as_deref(), stdout)
}
