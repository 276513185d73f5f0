use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::io::fmt17;
use crate::linalg::Matrix;
use crate::scalar::Real;
use crate::stats::ols::{factor_design, RegressionFit};

/// Per-observation influence measures of a fit.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsReport<T> {
    pub leverage: Vec<T>,
    pub std_residual: Vec<T>,
    pub cooks_d: Vec<T>,
}

impl<T: Real> DiagnosticsReport<T> {
    pub fn len(&self) -> usize {
        self.leverage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leverage.is_empty()
    }
}

/// Leverage from the hat-matrix diagonal, internally standardized residuals,
/// and Cook's distance `r²·h / (K·(1 − h))`.
pub fn diagnostics<T: Real>(fit: &RegressionFit<T>, design: &Matrix<T>) -> Result<DiagnosticsReport<T>> {
    if design.rows() != fit.n || design.cols() != fit.k {
        return Err(Error::InvalidParameter("design does not match the fit".into()));
    }
    let leverage = factor_design(design)?.hat_diagonal();
    let sigma = fit.sigma2.sqrt();
    let kf = T::from_usize_lossy(fit.k);
    let mut std_residual = Vec::with_capacity(fit.n);
    let mut cooks_d = Vec::with_capacity(fit.n);
    for (i, (&h, &e)) in leverage.iter().zip(&fit.residuals).enumerate() {
        let one_minus = T::one() - h;
        if one_minus <= T::epsilon() * T::lit(16.0) {
            return Err(Error::DegenerateLeverage { index: i });
        }
        let r = if sigma == T::zero() {
            T::zero()
        } else {
            e / (sigma * one_minus.sqrt())
        };
        std_residual.push(r);
        cooks_d.push(r * r * h / (kf * one_minus));
    }
    Ok(DiagnosticsReport {
        leverage,
        std_residual,
        cooks_d,
    })
}

/// Thresholds for flagging influential points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterRules {
    /// Flag when |standardized residual| exceeds this.
    pub resid_thresh: f64,
    /// Flag when Cook's distance exceeds this; `None` means `4/N`.
    pub cook_thresh: Option<f64>,
}

impl Default for FilterRules {
    fn default() -> Self {
        FilterRules {
            resid_thresh: 3.0,
            cook_thresh: None,
        }
    }
}

/// Flags points that violate both thresholds.
pub fn flag_influential<T: Real>(report: &DiagnosticsReport<T>, rules: &FilterRules) -> Vec<bool> {
    let n = report.len();
    let cook = rules.cook_thresh.unwrap_or(4.0 / n as f64);
    report
        .std_residual
        .iter()
        .zip(&report.cooks_d)
        .map(|(&r, &d)| r.to_f64_lossy().abs() > rules.resid_thresh && d.to_f64_lossy() > cook)
        .collect()
}

/// Indices kept after removing flagged points.
pub fn filter_influential<T: Real>(report: &DiagnosticsReport<T>, rules: &FilterRules) -> Vec<usize> {
    flag_influential(report, rules)
        .iter()
        .enumerate()
        .filter(|(_, &f)| !f)
        .map(|(i, _)| i)
        .collect()
}

/// `(theoretical quantile, ordered standardized residual)` pairs using Blom
/// plotting positions `(i − 3/8)/(N + 1/4)`.
pub fn normal_plot_points<T: Real>(report: &DiagnosticsReport<T>) -> Vec<(f64, f64)> {
    let mut r: Vec<f64> = report.std_residual.iter().map(|v| v.to_f64_lossy()).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len() as f64;
    let normal = Normal::standard();
    r.into_iter()
        .enumerate()
        .map(|(i, v)| (normal.inverse_cdf((i as f64 + 1.0 - 0.375) / (n + 0.25)), v))
        .collect()
}

pub const DIAGNOSTICS_HEADER: &str = "index,node,t_s,fitted,residual,std_residual,leverage,cooks_d,flagged";

/// Identifies the observation behind each regression row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowLabel {
    pub node: usize,
    pub t: f64,
}

pub fn diagnostics_csv(
    fit: &RegressionFit<f64>,
    report: &DiagnosticsReport<f64>,
    labels: &[RowLabel],
    flagged: &[bool],
) -> String {
    let mut s = String::from(DIAGNOSTICS_HEADER);
    s.push('\n');
    for i in 0..fit.n {
        s.push_str(&format!(
            "{i},{},{},{},{},{},{},{},{}\n",
            labels[i].node,
            fmt17(labels[i].t),
            fmt17(fit.fitted[i]),
            fmt17(fit.residuals[i]),
            fmt17(report.std_residual[i]),
            fmt17(report.leverage[i]),
            fmt17(report.cooks_d[i]),
            u8::from(flagged[i])
        ));
    }
    s
}

pub const NORMAL_PLOT_HEADER: &str = "theoretical_quantile,ordered_std_residual";

pub fn normal_plot_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from(NORMAL_PLOT_HEADER);
    s.push('\n');
    for (q, r) in points {
        s.push_str(&format!("{},{}\n", fmt17(*q), fmt17(*r)));
    }
    s
}
