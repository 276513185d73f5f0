//! Ephemeris ingestion, forcing extraction and orbit prediction.

pub mod eop;
pub mod interp;
pub mod lambda;
pub mod nearest;
pub mod pipeline;
pub mod predict;
pub mod report;
pub mod sp3;

pub use eop::RotationSeries;
pub use interp::MovingWindowInterpolator;
pub use lambda::{build_lambda_dataset, InterpolatedTrack, LambdaDataset, LambdaRecord};
pub use nearest::NearestIndex;
pub use predict::{predict_nominal_verlet, predict_orbit, ForcingLookup, Trajectory};
pub use report::{error_report, PredictionReport};
pub use sp3::{list_satellites, parse_sp3, write_sp3, Sp3Ephemeris};
pub use pipeline::{interpolate_track, lambda_dataset_from_ephemeris, load_celestial_ephemeris};
