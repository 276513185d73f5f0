//! Multi-stage helpers shared by the command line and the test suites.

use crate::dae::GravityModel;
use crate::error::Result;
use crate::orbit::eop::RotationSeries;
use crate::orbit::interp::MovingWindowInterpolator;
use crate::orbit::lambda::{build_lambda_dataset, InterpolatedTrack, LambdaDataset};
use crate::orbit::sp3::{parse_sp3, Sp3Ephemeris};

/// Parses and concatenates SP3 texts for one satellite, then rotates them
/// into the celestial frame.
pub fn load_celestial_ephemeris(texts: &[&str], satellite_id: &str, eop: &RotationSeries) -> Result<Sp3Ephemeris> {
    let parts = texts
        .iter()
        .map(|t| parse_sp3(t, satellite_id))
        .collect::<Result<Vec<_>>>()?;
    eop.rotate(&Sp3Ephemeris::concat(parts)?)
}

pub fn fit_interpolator(eph: &Sp3Ephemeris) -> Result<MovingWindowInterpolator<f64>> {
    MovingWindowInterpolator::fit(&eph.epochs, &eph.positions)
}

/// 1 Hz track over the whole ephemeris span with forward-difference velocities.
pub fn interpolate_track(eph: &Sp3Ephemeris) -> Result<InterpolatedTrack<f64>> {
    let (t0, positions) = fit_interpolator(eph)?.sample(1.0)?;
    InterpolatedTrack::from_positions(t0, 1.0, positions)
}

/// Celestial-frame ephemeris to forcing dataset.
pub fn lambda_dataset_from_ephemeris(eph: &Sp3Ephemeris, gravity: &GravityModel<f64>) -> Result<LambdaDataset<f64>> {
    build_lambda_dataset(&interpolate_track(eph)?, gravity)
}
