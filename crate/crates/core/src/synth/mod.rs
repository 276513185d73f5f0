//! Ground-truth data generators with known injected forcing.

pub mod forcing;
pub mod heat;
pub mod orbit;

pub use forcing::{HeatSource, OrbitForcing};
pub use heat::{synth_heat, SyntheticRod};
pub use orbit::{synth_orbit, OrbitScenario, OrbitSynthMode, SyntheticOrbit};
