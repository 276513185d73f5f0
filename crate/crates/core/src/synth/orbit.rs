//! Synthetic satellite trajectories with a known forcing.

use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;

use crate::dae::GravityModel;
use crate::error::{Error, Result};
use crate::io::{fmt17, write_atomic};
use crate::orbit::eop::RotationSeries;
use crate::orbit::lambda::InterpolatedTrack;
use crate::orbit::sp3::write_sp3;
use crate::scalar::Real;
use crate::synth::forcing::OrbitForcing;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitSynthMode {
    /// Replays the constrained trapezoidal scheme at 1 s, so forcing recovery
    /// from the positions is algebraically exact.
    SchemeConsistent,
    /// Classical Runge–Kutta with the given step (must divide 1 s).
    Rk4 { step: f64 },
}

#[derive(Clone, Debug)]
pub struct OrbitScenario<T> {
    pub x0: Vec3<T>,
    pub v0: Vec3<T>,
    pub forcing: OrbitForcing,
    pub duration_s: usize,
    pub gravity: GravityModel<T>,
}

/// Truth sampled at 1 s from `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticOrbit<T> {
    pub positions: Vec<Vec3<T>>,
    /// Scheme velocities in scheme-consistent mode; true velocities with RK4.
    pub velocities: Vec<Vec3<T>>,
}

impl<T: Real> SyntheticOrbit<T> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Positions from `start` (inclusive) to `end` (exclusive) as a 1 Hz track.
    pub fn track(&self, start: usize, end: usize) -> Result<InterpolatedTrack<T>> {
        if end > self.positions.len() || start >= end {
            return Err(Error::InvalidParameter(format!(
                "track range {start}..{end} outside 0..{}",
                self.positions.len()
            )));
        }
        InterpolatedTrack::from_positions(
            T::from_usize_lossy(start),
            T::one(),
            self.positions[start..end].to_vec(),
        )
    }
}

fn total_acceleration<T: Real>(
    x: Vec3<T>,
    gravity: &GravityModel<T>,
    forcing: &OrbitForcing,
) -> Result<Vec3<T>> {
    Ok(gravity.acceleration(x)? + forcing.eval(x))
}

/// One classical Runge–Kutta step of `ẍ = a(x) + λ(x)`.
pub fn rk4_step<T: Real>(
    x: Vec3<T>,
    v: Vec3<T>,
    h: T,
    gravity: &GravityModel<T>,
    forcing: &OrbitForcing,
) -> Result<(Vec3<T>, Vec3<T>)> {
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);
    let two = T::lit(2.0);
    let k1x = v;
    let k1v = total_acceleration(x, gravity, forcing)?;
    let k2x = v + k1v * half;
    let k2v = total_acceleration(x + k1x * half, gravity, forcing)?;
    let k3x = v + k2v * half;
    let k3v = total_acceleration(x + k2x * half, gravity, forcing)?;
    let k4x = v + k3v * h;
    let k4v = total_acceleration(x + k3x * h, gravity, forcing)?;
    let xn = x + (k1x + k2x * two + k3x * two + k4x) * sixth;
    let vn = v + (k1v + k2v * two + k3v * two + k4v) * sixth;
    if !xn.is_finite() || !vn.is_finite() {
        return Err(Error::Overflow("Runge–Kutta step".into()));
    }
    Ok((xn, vn))
}

/// Integrates for `duration` seconds in `n_steps` equal Runge–Kutta steps.
pub fn rk4_propagate<T: Real>(
    x: Vec3<T>,
    v: Vec3<T>,
    duration: T,
    n_steps: usize,
    gravity: &GravityModel<T>,
    forcing: &OrbitForcing,
) -> Result<(Vec3<T>, Vec3<T>)> {
    let h = duration / T::from_usize_lossy(n_steps.max(1));
    let (mut x, mut v) = (x, v);
    for _ in 0..n_steps.max(1) {
        (x, v) = rk4_step(x, v, h, gravity, forcing)?;
    }
    Ok((x, v))
}

/// Generates the truth trajectory for `scenario`.
///
/// In scheme-consistent mode the state after the first second is built so
/// that the second difference of the first three positions equals the total
/// acceleration at the second one; every later step is the trapezoidal
/// update with positions advanced by `x + h·v`.
pub fn synth_orbit<T: Real>(scenario: &OrbitScenario<T>, mode: OrbitSynthMode) -> Result<SyntheticOrbit<T>> {
    scenario.forcing.validate()?;
    if scenario.x0.norm() == T::zero() {
        return Err(Error::Singularity { epoch: Some(0.0) });
    }
    let g = &scenario.gravity;
    let f = &scenario.forcing;
    let n = scenario.duration_s + 1;
    let mut positions = Vec::with_capacity(n);
    let mut velocities = Vec::with_capacity(n);
    let (mut x, mut v) = (scenario.x0, scenario.v0);
    positions.push(x);
    velocities.push(v);
    match mode {
        OrbitSynthMode::SchemeConsistent => {
            let h = T::one();
            let half = T::lit(0.5);
            let mut p = Vec3::zero();
            for k in 1..n {
                let xn = x + v * h;
                let pn = total_acceleration(xn, g, f).map_err(|e| e.at_epoch(k as f64))?;
                let vn = if k == 1 { v + pn * h } else { v + (p + pn) * (h * half) };
                x = xn;
                v = vn;
                p = pn;
                positions.push(x);
                velocities.push(v);
            }
        }
        OrbitSynthMode::Rk4 { step } => {
            let per_second = (1.0 / step).round();
            if !(step > 0.0) || (per_second * step - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "integration step {step} must divide one second"
                )));
            }
            let per_second = per_second as usize;
            for k in 1..n {
                (x, v) = rk4_propagate(x, v, T::one(), per_second, g, f)
                    .map_err(|e| e.at_epoch(k as f64))?;
                positions.push(x);
                velocities.push(v);
            }
        }
    }
    Ok(SyntheticOrbit {
        positions,
        velocities,
    })
}

/// Paths written by [`write_orbit_files`].
#[derive(Clone, Debug)]
pub struct OrbitFiles {
    pub sp3: Vec<PathBuf>,
    pub eop: PathBuf,
    pub truth: PathBuf,
}

pub const TRUTH_HEADER: &str = "t_s,x,y,z,vx,vy,vz";

/// Writes one SP3 file per day at `interval_s` sampling, an identity rotation
/// file covering every SP3 epoch, and the truth trajectory every
/// `truth_stride` seconds.
pub fn write_orbit_files(
    orbit: &SyntheticOrbit<f64>,
    satellite_id: &str,
    origin: NaiveDateTime,
    interval_s: usize,
    truth_stride: usize,
    out_dir: &Path,
) -> Result<OrbitFiles> {
    if interval_s == 0 || truth_stride == 0 {
        return Err(Error::InvalidParameter("sampling intervals must be positive".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    const DAY: usize = 86_400;
    let last = orbit.len() - 1;
    let mut sp3 = Vec::new();
    let mut all_epochs = Vec::new();
    let n_days = last.div_ceil(DAY).max(1);
    for day in 0..n_days {
        let lo = day * DAY;
        let hi = if day + 1 == n_days { last + 1 } else { (day + 1) * DAY };
        let ks: Vec<usize> = (lo..hi).filter(|k| k % interval_s == 0).collect();
        if ks.is_empty() {
            continue;
        }
        let epochs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
        let positions: Vec<Vec3<f64>> = ks.iter().map(|&k| orbit.positions[k]).collect();
        let text = write_sp3(satellite_id, origin, &epochs, &positions, "SYN");
        let path = out_dir.join(format!("{satellite_id}_day{day:02}.sp3"));
        write_atomic(&path, text.as_bytes())?;
        sp3.push(path);
        all_epochs.extend(epochs);
    }
    let eop = out_dir.join("eop.csv");
    write_atomic(&eop, RotationSeries::identity(&all_epochs).with_origin(origin).to_csv().as_bytes())?;

    let mut truth_text = String::from(TRUTH_HEADER);
    truth_text.push('\n');
    for k in (0..=last).step_by(truth_stride) {
        let fields: Vec<String> = [k as f64]
            .into_iter()
            .chain(orbit.positions[k].0)
            .chain(orbit.velocities[k].0)
            .map(fmt17)
            .collect();
        truth_text.push_str(&fields.join(","));
        truth_text.push('\n');
    }
    let truth = out_dir.join("truth.csv");
    write_atomic(&truth, truth_text.as_bytes())?;
    Ok(OrbitFiles { sp3, eop, truth })
}

/// Position and velocity of a circular orbit of radius `r` in the equatorial plane.
pub fn circular_state<T: Real>(r: T, gravity: &GravityModel<T>) -> (Vec3<T>, Vec3<T>) {
    let speed = (gravity.gm() / r).sqrt();
    (Vec3::new(r, T::zero(), T::zero()), Vec3::new(T::zero(), speed, T::zero()))
}
