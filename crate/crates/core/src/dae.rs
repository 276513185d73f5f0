//! Fixed-step kernels for observation-constrained second-order dynamics.
//!
//! The constrained step imposes an observed velocity at the end of every step
//! of the trapezoidal discretization
//!
//! ```text
//! x' = x + h·v
//! v' = v + h/2·(p + p')
//! p' = a(x') + λ'
//! v' = v_obs
//! ```
//!
//! which is an index-2 system in `(x, v, λ)`. Because the constraint Jacobian
//! with respect to velocity is the identity, the system is linear in `λ'` and
//! is solved in closed form. All forcings are per unit mass.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Standard Earth gravitational parameter, m³/s².
pub const EARTH_GM: f64 = 3.986004418e14;

/// Point-mass central gravity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityModel<T> {
    gm: T,
}

impl<T: Real> GravityModel<T> {
    /// `gm` must be finite and non-negative; zero switches gravity off.
    pub fn new(gm: T) -> Result<Self> {
        if !gm.is_finite() || gm < T::zero() {
            return Err(Error::InvalidParameter(format!(
                "gravitational parameter must be finite and >= 0, got {gm}"
            )));
        }
        Ok(GravityModel { gm })
    }

    pub fn earth() -> Self {
        GravityModel {
            gm: T::lit(EARTH_GM),
        }
    }

    pub fn none() -> Self {
        GravityModel { gm: T::zero() }
    }

    pub fn gm(&self) -> T {
        self.gm
    }

    /// `−gm·x/|x|³`.
    pub fn acceleration(&self, x: Vec3<T>) -> Result<Vec3<T>> {
        if self.gm == T::zero() {
            return Ok(Vec3::zero());
        }
        let r = x.norm();
        if r == T::zero() {
            return Err(Error::Singularity { epoch: None });
        }
        let a = x * (-self.gm / (r * r * r));
        if !a.is_finite() {
            return Err(Error::Overflow("evaluating gravity".into()));
        }
        Ok(a)
    }

    /// Specific orbital energy `|v|²/2 − gm/|x|`.
    pub fn specific_energy(&self, x: Vec3<T>, v: Vec3<T>) -> T {
        v.norm_squared() * T::lit(0.5) - self.gm / x.norm()
    }
}

/// Discrete state of the constrained scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SatState<T> {
    /// Seconds since the dataset epoch.
    pub t: T,
    pub x: Vec3<T>,
    pub v: Vec3<T>,
    /// Total acceleration (nominal plus forcing) carried by the scheme.
    pub p: Vec3<T>,
}

impl<T: Real> SatState<T> {
    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.v.is_finite() && self.p.is_finite()
    }
}

/// One recovered forcing sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForcingSample<T> {
    pub t: T,
    pub lambda: Vec3<T>,
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step size must be positive, got {h}"
        )));
    }
    Ok(())
}

/// Consistent initial state at the second of three observed positions.
///
/// `positions` are observed at `t1 − dt`, `t1`, `t1 + dt`. The acceleration is
/// the second difference of the positions; the implied forcing at `t1` is zero.
pub fn consistent_init<T: Real>(
    t1: T,
    positions: [Vec3<T>; 3],
    velocity_at_t1: Vec3<T>,
    dt: T,
) -> Result<SatState<T>> {
    check_step(dt.to_f64_lossy())?;
    if !positions.iter().all(|p| p.is_finite()) || !velocity_at_t1.is_finite() {
        return Err(Error::InvalidObservation(
            "non-finite position or velocity in initialization".into(),
        ));
    }
    let [x0, x1, x2] = positions;
    let p = (x0 - x1 * T::lit(2.0) + x2) * (T::one() / (dt * dt));
    Ok(SatState {
        t: t1,
        x: x1,
        v: velocity_at_t1,
        p,
    })
}

/// Advances one constrained step and returns the forcing that makes the
/// end-of-step velocity equal `v_obs_next`.
///
/// The returned state's velocity is `v_obs_next` itself, so the constraint
/// holds bit-for-bit.
pub fn trap_constrained_step<T: Real>(
    state: &SatState<T>,
    v_obs_next: Vec3<T>,
    h: T,
    gravity: &GravityModel<T>,
) -> Result<(SatState<T>, ForcingSample<T>)> {
    check_step(h.to_f64_lossy())?;
    if !v_obs_next.is_finite() {
        return Err(Error::InvalidObservation("non-finite observed velocity".into()));
    }
    let x_next = state.x + state.v * h;
    let t_next = state.t + h;
    let a_next = gravity.acceleration(x_next)?;
    let lambda = (v_obs_next - state.v) * (T::lit(2.0) / h) - state.p - a_next;
    let p_next = a_next + lambda;
    if !lambda.is_finite() || !x_next.is_finite() || !p_next.is_finite() {
        return Err(Error::Overflow("solving the constrained step".into()));
    }
    Ok((
        SatState {
            t: t_next,
            x: x_next,
            v: v_obs_next,
            p: p_next,
        },
        ForcingSample { t: t_next, lambda },
    ))
}

/// Advances one step of the forcing-augmented trapezoidal model.
///
/// The end-of-step position is the forward-Euler prediction `x + h·v`; it is
/// also the position at which `lookup` selects the end-of-step forcing.
/// Returns the new state and the forcing used at its end, which the caller
/// passes back as `lam_k` on the next step.
pub fn trap_augmented_step<T, F>(
    state: &SatState<T>,
    lam_k: Vec3<T>,
    mut lookup: F,
    h: T,
    gravity: &GravityModel<T>,
) -> Result<(SatState<T>, Vec3<T>)>
where
    T: Real,
    F: FnMut(Vec3<T>) -> Result<Vec3<T>>,
{
    check_step(h.to_f64_lossy())?;
    let x_next = state.x + state.v * h;
    let lam_next = lookup(x_next)?;
    let a_k = gravity.acceleration(state.x)?;
    let a_next = gravity.acceleration(x_next)?;
    let half_h = h * T::lit(0.5);
    let v_next = state.v + ((a_k + lam_k) + (a_next + lam_next)) * half_h;
    let next = SatState {
        t: state.t + h,
        x: x_next,
        v: v_next,
        p: a_next + lam_next,
    };
    if !next.is_finite() {
        return Err(Error::Overflow("advancing the augmented model".into()));
    }
    Ok((next, lam_next))
}

/// Störmer–Verlet position update for the nominal point-mass model.
pub fn verlet_step<T: Real>(
    x_prev: Vec3<T>,
    x_curr: Vec3<T>,
    h: T,
    gravity: &GravityModel<T>,
) -> Result<Vec3<T>> {
    check_step(h.to_f64_lossy())?;
    let a = gravity.acceleration(x_curr)?;
    let next = x_curr * T::lit(2.0) - x_prev + a * (h * h);
    if !next.is_finite() {
        return Err(Error::Overflow("advancing the Verlet scheme".into()));
    }
    Ok(next)
}
