//! Unmodeled-forcing estimation for observation-constrained dynamics.
//!
//! Two pipelines share the same idea: step a known model while pinning part of
//! the state to observations, read off the forcing needed to do so, then reuse
//! that forcing to predict. The orbit pipeline works on SP3 ephemerides with a
//! point-mass gravity model; the heat pipeline works on a 1-D rod sampled at
//! thermocouple nodes.
//!
//! Numerical kernels are generic over [`Real`]. File formats and the command
//! line use `f64`.

pub mod cli;
pub mod dae;
pub mod error;
pub mod heat;
pub mod io;
pub mod linalg;
pub mod orbit;
pub mod scalar;
pub mod stats;
pub mod synth;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::Real;
pub use vec3::{Mat3, Vec3};

pub type Vec3d = Vec3<f64>;
pub type Vec3f = Vec3<f32>;
pub type Mat3d = Mat3<f64>;
pub type Mat3f = Mat3<f32>;
pub type SatStateD = dae::SatState<f64>;
pub type GravityD = dae::GravityModel<f64>;
pub type RodGridD = heat::RodGrid<f64>;
pub type RegressionFitD = stats::RegressionFit<f64>;
