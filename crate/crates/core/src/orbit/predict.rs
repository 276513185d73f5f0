//! Orbit propagation with and without the learned forcing.

use crate::dae::{trap_augmented_step, verlet_step, GravityModel, SatState};
use crate::error::{Error, Result};
use crate::io::fmt17;
use crate::orbit::lambda::LambdaDataset;
use crate::orbit::nearest::NearestIndex;
use crate::scalar::Real;
use crate::vec3::Vec3;

pub const TRAJECTORY_HEADER: &str = "t_s,x,y,z";

/// Positions at 1 s spacing.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub t0: T,
    pub positions: Vec<Vec3<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn time(&self, k: usize) -> T {
        self.t0 + T::from_usize_lossy(k)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(TRAJECTORY_HEADER);
        s.push('\n');
        for (k, p) in self.positions.iter().enumerate() {
            let [x, y, z] = p.to_f64();
            s.push_str(&format!(
                "{},{},{},{}\n",
                fmt17(self.time(k).to_f64_lossy()),
                fmt17(x),
                fmt17(y),
                fmt17(z)
            ));
        }
        s
    }
}

/// Forcing lookup by nearest recorded position.
pub struct ForcingLookup<'a, T> {
    index: NearestIndex<T>,
    dataset: &'a LambdaDataset<T>,
}

impl<'a, T: Real> ForcingLookup<'a, T> {
    pub fn new(dataset: &'a LambdaDataset<T>) -> Result<Self> {
        if dataset.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(ForcingLookup {
            index: NearestIndex::build(dataset.positions()),
            dataset,
        })
    }

    pub fn at(&self, x: Vec3<T>) -> Result<Vec3<T>> {
        let (i, _) = self.index.nearest(x).ok_or(Error::EmptyDataset)?;
        Ok(self.dataset.records[i].lambda)
    }
}

/// Number of integration steps per output second.
fn steps_per_second<T: Real>(h: T) -> Result<usize> {
    let r = (T::one() / h).round();
    if !(h > T::zero()) || (r * h - T::one()).abs() > T::lit(1e-12) || r < T::one() {
        return Err(Error::InvalidParameter(format!(
            "step {h} must divide one second"
        )));
    }
    Ok(r.to_usize().unwrap_or(1))
}

/// Propagates the forcing-augmented model for `duration_s` seconds from two
/// positions one second apart, returning 1 Hz output starting at `x0`.
///
/// The forcing at the first step is taken from the record nearest `x1`.
pub fn predict_orbit<T: Real>(
    lookup: &ForcingLookup<'_, T>,
    t0: T,
    x0: Vec3<T>,
    x1: Vec3<T>,
    duration_s: usize,
    h: T,
    gravity: &GravityModel<T>,
) -> Result<Trajectory<T>> {
    let per_second = steps_per_second(h)?;
    let lam0 = lookup.at(x1)?;
    let a0 = gravity.acceleration(x0)?;
    let mut state = SatState {
        t: t0,
        x: x0,
        v: x1 - x0,
        p: a0 + lam0,
    };
    let mut lam = lam0;
    let mut positions = Vec::with_capacity(duration_s + 1);
    positions.push(x0);
    for k in 1..=duration_s * per_second {
        let (next, lam_next) = trap_augmented_step(&state, lam, |x| lookup.at(x), h, gravity)
            .map_err(|e| e.at_epoch(state.t.to_f64_lossy()))?;
        state = next;
        lam = lam_next;
        if k % per_second == 0 {
            positions.push(state.x);
        }
    }
    Ok(Trajectory { t0, positions })
}

/// Point-mass propagation with the two-step position scheme.
///
/// `x_a` and `x_b` are positions `h` seconds apart; output is decimated to 1 Hz.
pub fn predict_nominal_verlet<T: Real>(
    t0: T,
    x_a: Vec3<T>,
    x_b: Vec3<T>,
    duration_s: usize,
    h: T,
    gravity: &GravityModel<T>,
) -> Result<Trajectory<T>> {
    let per_second = steps_per_second(h)?;
    let mut positions = Vec::with_capacity(duration_s + 1);
    positions.push(x_a);
    let (mut prev, mut curr) = (x_a, x_b);
    if per_second == 1 {
        positions.push(x_b);
    }
    let total = duration_s * per_second;
    for k in 2..=total {
        let next = verlet_step(prev, curr, h, gravity)
            .map_err(|e| e.at_epoch((t0 + h * T::from_usize_lossy(k - 1)).to_f64_lossy()))?;
        prev = curr;
        curr = next;
        if k % per_second == 0 {
            positions.push(curr);
        }
    }
    positions.truncate(duration_s + 1);
    Ok(Trajectory { t0, positions })
}
