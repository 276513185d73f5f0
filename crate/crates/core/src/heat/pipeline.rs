//! Training-partition extraction and the fitted-model file.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heat::constrained::solve_lambda_series;
use crate::heat::grid::{RodGrid, TemperatureSeries};
use crate::heat::regression::{regression_rows, RegressionRows};
use crate::stats::{design_with_intercept, diagnostics, fit_ols, flag_influential, DiagnosticsReport, FilterRules, RegressionFit};

/// Source regression `λ ≈ β₀ + β₁·D²(u)` with the span it was trained on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatModel {
    pub beta0: f64,
    pub beta1: f64,
    pub sigma2: f64,
    pub n: usize,
    pub k: usize,
    pub r2: f64,
    pub adj_r2: f64,
    /// First and last sample times (file time axis) used for training.
    pub training_span: [f64; 2],
    /// Rows removed as influential before the final fit.
    pub dropped: usize,
}

impl HeatModel {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: HeatModel = serde_json::from_str(text)
            .map_err(|e| Error::format(e.line(), format!("model file: {e}")))?;
        if !(m.beta0.is_finite() && m.beta1.is_finite()) {
            return Err(Error::InvalidParameter("model coefficients must be finite".into()));
        }
        Ok(m)
    }

    /// True when any of the epochs `[from, to]` (file time) lies inside the
    /// training span.
    pub fn overlaps(&self, from: f64, to: f64) -> bool {
        from <= self.training_span[1] && to >= self.training_span[0]
    }
}

/// Leading samples with file time ≤ `train_end`.
pub fn training_samples(series: &TemperatureSeries<f64>, train_end: f64) -> Result<usize> {
    let n = series.count_through(train_end - series.time_offset);
    if n < 2 {
        return Err(Error::InsufficientData {
            what: "samples up to the training end",
            needed: 2,
            got: n,
        });
    }
    Ok(n)
}

/// Regression rows over the training partition and the file-time span they cover.
pub fn training_rows(
    grid: &RodGrid<f64>,
    series: &TemperatureSeries<f64>,
    train_end: f64,
) -> Result<(RegressionRows<f64>, [f64; 2])> {
    let n = training_samples(series, train_end)?;
    let lambda = solve_lambda_series(grid, series, n)?;
    let rows = regression_rows(grid, &lambda, series.time_offset);
    let span = [series.time_offset, series.time(n - 1) + series.time_offset];
    Ok((rows, span))
}

/// Full-data fit, its diagnostics and the model actually saved.
#[derive(Clone, Debug)]
pub struct SourceFit {
    pub model: HeatModel,
    /// Fit over every training row; diagnostics refer to it.
    pub full_fit: RegressionFit<f64>,
    pub diagnostics: DiagnosticsReport<f64>,
    pub flagged: Vec<bool>,
}

/// Fits `λ ≈ β₀ + β₁·D²` and, when `drop_flagged`, refits without the rows
/// flagged by `rules`.
pub fn fit_source_model(
    rows: &RegressionRows<f64>,
    training_span: [f64; 2],
    rules: &FilterRules,
    drop_flagged: bool,
) -> Result<SourceFit> {
    let design = design_with_intercept(&[&rows.d2]);
    let full_fit = fit_ols(&design, &rows.lambda)?;
    let diagnostics = diagnostics(&full_fit, &design)?;
    let flagged = flag_influential(&diagnostics, rules);
    let dropped = flagged.iter().filter(|&&f| f).count();
    let fit = if drop_flagged && dropped > 0 {
        let keep: Vec<usize> = (0..rows.len()).filter(|&i| !flagged[i]).collect();
        let kept = rows.select(&keep);
        fit_ols(&design_with_intercept(&[&kept.d2]), &kept.lambda)?
    } else {
        full_fit.clone()
    };
    Ok(SourceFit {
        model: HeatModel {
            beta0: fit.coefficients[0],
            beta1: fit.coefficients[1],
            sigma2: fit.sigma2,
            n: fit.n,
            k: fit.k,
            r2: fit.r2,
            adj_r2: fit.adj_r2,
            training_span,
            dropped: if drop_flagged { dropped } else { 0 },
        },
        full_fit,
        diagnostics,
        flagged,
    })
}
