//! Linear LD-Gain model over γ and ROUGE prediction for unseen domains.
//!
//! The model is `LD-Gain = beta0 + beta1 * gamma` with γ as a fraction. A
//! prediction divides the modelled LD-Gain by the target's λ to get a gain
//! and adds it to the base score. The band is ±1 residual standard deviation,
//! constant along the line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{AdaptationRecord, GammaUnit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub gamma: f64,
    pub ld_gain: f64,
}

impl FitPoint {
    pub fn new(gamma: f64, ld_gain: f64) -> Self {
        FitPoint { gamma, ld_gain }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub beta0: f64,
    pub beta1: f64,
    pub residual_std: f64,
    pub n_points: usize,
    pub r_squared: f64,
    /// Always [`GammaUnit::Fraction`]; recorded so a reader never has to guess the slope's unit.
    pub gamma_unit: GammaUnit,
}

impl LinearModel {
    /// A model with the given coefficients and no fitted data behind it.
    pub fn from_coefficients(beta0: f64, beta1: f64) -> Self {
        LinearModel {
            beta0,
            beta1,
            residual_std: 0.0,
            n_points: 0,
            r_squared: 1.0,
            gamma_unit: GammaUnit::Fraction,
        }
    }

    /// β₀ + β₁γ without range checks.
    pub fn eval(&self, gamma: f64) -> f64 {
        self.beta0 + self.beta1 * gamma
    }
}

/// Closed-form least squares on centred sums.
pub fn fit_ols(points: &[FitPoint]) -> Result<LinearModel> {
    let n = points.len();
    if n < 2 {
        return Err(Error::SingularFit(format!(
            "need at least 2 points, got {n}"
        )));
    }
    // Tested on the inputs, not on sxx: rounding in the mean leaves sxx
    // slightly positive for identical γ values.
    if points.iter().all(|p| p.gamma == points[0].gamma) {
        return Err(Error::SingularFit("all gamma values are identical".into()));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.gamma).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.ld_gain).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let dx = p.gamma - mean_x;
        let dy = p.ld_gain - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 || !sxx.is_finite() {
        return Err(Error::SingularFit("gamma variance underflows".into()));
    }
    let beta1 = sxy / sxx;
    let beta0 = mean_y - beta1 * mean_x;
    let ssr: f64 = points
        .iter()
        .map(|p| {
            let r = p.ld_gain - (beta0 + beta1 * p.gamma);
            r * r
        })
        .sum();
    let residual_std = if n > 2 {
        (ssr / (nf - 2.0)).sqrt()
    } else {
        0.0
    };
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    };
    Ok(LinearModel {
        beta0,
        beta1,
        residual_std,
        n_points: n,
        r_squared,
        gamma_unit: GammaUnit::Fraction,
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if (0.0..=1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::out_of_range(
            "gamma",
            format!("{gamma} (must be a fraction in [0, 1])"),
        ))
    }
}

pub fn predict_ld_gain(model: &LinearModel, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(model.eval(gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub ld_gain: f64,
    pub gain: f64,
    /// Predicted ROUGE in the base score's unit.
    pub predicted: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

/// Predicted ROUGE = base + (β₀ + β₁γ)/λ, with band ± residual_std/λ.
pub fn predict_rouge(
    model: &LinearModel,
    gamma: f64,
    lambda: f64,
    rouge_base: f64,
) -> Result<Prediction> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::out_of_range(
            "lambda",
            format!("{lambda} (must be > 0)"),
        ));
    }
    let ld_gain = predict_ld_gain(model, gamma)?;
    let gain = ld_gain / lambda;
    let predicted = rouge_base + gain;
    let half = model.residual_std / lambda;
    Ok(Prediction {
        ld_gain,
        gain,
        predicted,
        band_lo: predicted - half,
        band_hi: predicted + half,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordPrediction {
    pub source: String,
    pub target: String,
    pub gamma: f64,
    pub lambda: f64,
    pub rouge_base: f64,
    pub prediction: Prediction,
    pub actual: f64,
    /// actual − predicted, ROUGE points.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitEvaluation {
    pub mean_abs_error: f64,
    pub records: Vec<RecordPrediction>,
}

fn require_fields(index: usize, record: &AdaptationRecord) -> Result<(f64, f64)> {
    match (record.gamma, record.lambda) {
        (Some(g), Some(l)) => Ok((g, l)),
        (None, _) => Err(Error::InvalidRecord {
            index,
            message: format!(
                "{} -> {}: missing gamma",
                record.source_label(),
                record.target_name
            ),
        }),
        (_, None) => Err(Error::InvalidRecord {
            index,
            message: format!(
                "{} -> {}: missing lambda",
                record.source_label(),
                record.target_name
            ),
        }),
    }
}

/// (γ, LD-Gain) points of `records`; every record must carry γ and λ.
pub fn fit_points(records: &[AdaptationRecord]) -> Result<Vec<FitPoint>> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (g, l) = require_fields(i + 1, r)?;
            Ok(FitPoint::new(g, l * r.gain()))
        })
        .collect()
}

/// Predicts each holdout record and reports the mean absolute error in ROUGE points.
pub fn evaluate_fit(model: &LinearModel, holdout: &[AdaptationRecord]) -> Result<FitEvaluation> {
    if holdout.is_empty() {
        return Err(Error::EmptyDataset("holdout has no records".into()));
    }
    let records = holdout
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (gamma, lambda) = require_fields(i + 1, r)?;
            let prediction = predict_rouge(model, gamma, lambda, r.rouge_base)?;
            Ok(RecordPrediction {
                source: r.source_label(),
                target: r.target_name.clone(),
                gamma,
                lambda,
                rouge_base: r.rouge_base,
                prediction,
                actual: r.rouge_finetuned,
                residual: r.rouge_finetuned - prediction.predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mae = records.iter().map(|r| r.residual.abs()).sum::<f64>() / records.len() as f64;
    Ok(FitEvaluation {
        mean_abs_error: mae,
        records,
    })
}

/// Mean absolute ROUGE error when each record is predicted by a line fitted
/// on all the others.
pub fn leave_one_out_mae(records: &[AdaptationRecord]) -> Result<f64> {
    let points = fit_points(records)?;
    if points.len() < 3 {
        return Err(Error::SingularFit(
            "leave-one-out needs at least 3 records".into(),
        ));
    }
    let mut total = 0.0;
    for (i, record) in records.iter().enumerate() {
        let rest: Vec<FitPoint> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| *p)
            .collect();
        let model = fit_ols(&rest)?;
        let eval = evaluate_fit(&model, std::slice::from_ref(record))?;
        total += eval.mean_abs_error;
    }
    Ok(total / records.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_two_point_line() {
        let m = fit_ols(&[FitPoint::new(0.0, 0.0), FitPoint::new(1.0, 10.0)]).unwrap();
        assert_eq!(m.beta0, 0.0);
        assert_eq!(m.beta1, 10.0);
        assert_eq!(m.residual_std, 0.0);
        assert_eq!(m.r_squared, 1.0);
    }

    #[test]
    fn singular_and_short_inputs() {
        let same = [
            FitPoint::new(0.3, 1.0),
            FitPoint::new(0.3, 2.0),
            FitPoint::new(0.3, 5.0),
        ];
        assert!(matches!(fit_ols(&same), Err(Error::SingularFit(_))));
        // 3 × 0.05 does not average back to exactly 0.05.
        let inexact_mean = [
            FitPoint::new(0.05, 1.0),
            FitPoint::new(0.05, 7.0),
            FitPoint::new(0.05, 3.0),
        ];
        assert!(matches!(fit_ols(&inexact_mean), Err(Error::SingularFit(_))));
        assert!(fit_ols(&[FitPoint::new(0.1, 1.0)]).is_err());
        assert!(fit_ols(&[]).is_err());
    }

    #[test]
    fn predict_ld_gain_examples() {
        let m = LinearModel::from_coefficients(0.0, 10.0);
        assert_eq!(predict_ld_gain(&m, 0.5).unwrap(), 5.0);
        assert!(predict_ld_gain(&m, 1.5).is_err());
        assert!(predict_ld_gain(&m, -0.01).is_err());

        let line = fit_ols(&[FitPoint::new(0.01, 1.0), FitPoint::new(0.02, 2.0)]).unwrap();
        assert_relative_eq!(
            predict_ld_gain(&line, 0.03).unwrap(),
            3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn centroid_prediction() {
        let pts = [
            FitPoint::new(0.01, 3.0),
            FitPoint::new(0.04, -1.0),
            FitPoint::new(0.09, 7.0),
        ];
        let m = fit_ols(&pts).unwrap();
        let mean_g = pts.iter().map(|p| p.gamma).sum::<f64>() / 3.0;
        let mean_y = pts.iter().map(|p| p.ld_gain).sum::<f64>() / 3.0;
        assert_relative_eq!(m.eval(mean_g), mean_y, max_relative = 1e-12);
    }

    #[test]
    fn predict_rouge_examples() {
        let zero = LinearModel::from_coefficients(0.0, 0.0);
        assert_eq!(predict_rouge(&zero, 0.3, 12.0, 5.5).unwrap().predicted, 5.5);

        let m = LinearModel::from_coefficients(-100.0, 10000.0);
        let p = predict_rouge(&m, 0.05, 100.0, 5.0).unwrap();
        assert_relative_eq!(p.ld_gain, 400.0, max_relative = 1e-12);
        assert_relative_eq!(p.gain, 4.0, max_relative = 1e-12);
        assert_relative_eq!(p.predicted, 9.0, max_relative = 1e-12);
        assert_eq!(p.band_lo, p.band_hi);

        assert!(predict_rouge(&m, 0.05, 0.0, 5.0).is_err());
        assert!(predict_rouge(&m, 0.05, -3.0, 5.0).is_err());
    }

    #[test]
    fn band_scales_with_lambda() {
        let mut m = LinearModel::from_coefficients(1.0, 2.0);
        m.residual_std = 50.0;
        let p = predict_rouge(&m, 0.1, 25.0, 3.0).unwrap();
        assert_relative_eq!(p.band_hi - p.predicted, 2.0, max_relative = 1e-12);
        assert_relative_eq!(p.predicted - p.band_lo, 2.0, max_relative = 1e-12);
    }

    fn record(gamma: f64, lambda: f64, base: f64, finetuned: f64) -> AdaptationRecord {
        AdaptationRecord {
            source_names: vec!["S".into()],
            target_name: "T".into(),
            gamma: Some(gamma),
            lambda: Some(lambda),
            rouge_base: base,
            rouge_finetuned: finetuned,
        }
    }

    #[test]
    fn exact_fit_round_trip() {
        let r = record(0.04, 80.0, 5.0, 6.5);
        // Any line through (0.04, λ·gain) reproduces the record exactly.
        let target = 80.0 * r.gain();
        let m = LinearModel::from_coefficients(target - 2000.0 * 0.04, 2000.0);
        let p = predict_rouge(&m, 0.04, 80.0, 5.0).unwrap();
        assert!((p.predicted - 6.5).abs() < 1e-9);
    }

    #[test]
    fn evaluate_fit_single_record() {
        let m = LinearModel::from_coefficients(10.0, 1000.0);
        // LD-Gain = 10 + 1000·0.02 = 30; gain = 30/15 = 2; predicted = 4 + 2 = 6.
        let eval = evaluate_fit(&m, &[record(0.02, 15.0, 4.0, 7.25)]).unwrap();
        assert_relative_eq!(
            eval.records[0].prediction.predicted,
            6.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(eval.mean_abs_error, 1.25, max_relative = 1e-12);
        assert_relative_eq!(eval.records[0].residual, 1.25, max_relative = 1e-12);
    }

    #[test]
    fn evaluate_fit_errors() {
        let m = LinearModel::from_coefficients(0.0, 1.0);
        assert!(evaluate_fit(&m, &[]).is_err());
        let mut r = record(0.1, 2.0, 1.0, 1.0);
        r.lambda = None;
        assert!(matches!(
            evaluate_fit(&m, &[r]),
            Err(Error::InvalidRecord { index: 1, .. })
        ));
    }

    #[test]
    fn model_json_keys() {
        let m = LinearModel::from_coefficients(1.5, -2.0);
        let v = serde_json::to_value(&m).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(
            keys,
            [
                "beta0",
                "beta1",
                "gamma_unit",
                "n_points",
                "r_squared",
                "residual_std"
            ]
        );
        assert_eq!(v["gamma_unit"], "fraction");
    }
}
