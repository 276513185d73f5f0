//! Least-squares fitting and influence diagnostics.

pub mod diagnostics;
pub mod ols;
pub mod selection;

pub use diagnostics::{
    diagnostics, filter_influential, flag_influential, normal_plot_points, DiagnosticsReport, FilterRules,
};
pub use ols::{design_with_intercept, fit_ols, RegressionFit};
pub use selection::{model_selection_table, SelectionRow};
