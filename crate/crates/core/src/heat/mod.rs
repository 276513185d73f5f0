//! One-dimensional rod: operators, source recovery and prediction.

pub mod constrained;
pub mod grid;
pub mod operators;
pub mod pipeline;
pub mod predict;
pub mod regression;

pub use constrained::{solve_lambda_series, ConstrainedStep, LambdaSeries};
pub use grid::{load_experiment_csv, RodConfig, RodGrid, TemperatureSeries};
pub use operators::{assemble_operators, spatial_derivatives, HeatOperators, NodeDerivatives};
pub use predict::{
    evaluate_lambda_model_variants, predict_modified, predict_nominal, HeatPrediction, ReinitSchedule,
    SourceModel,
};
pub use regression::{lambda_csv, regression_rows, RegressionRows};
pub use pipeline::{fit_source_model, training_rows, training_samples, HeatModel, SourceFit};
