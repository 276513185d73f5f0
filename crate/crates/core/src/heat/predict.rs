//! Forward prediction with the nominal and regression-modified rod models.

use crate::error::{Error, Result};
use crate::heat::grid::RodGrid;
use crate::heat::operators::{assemble_operators, spatial_derivatives};
use crate::io::fmt17;
use crate::linalg::Tridiagonal;
use crate::scalar::Real;

/// Source model used while stepping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SourceModel<T> {
    /// No source.
    Nominal,
    /// `β₀ + β₁·D²(û)` on the predicted state, folded into the diffusivity.
    RunningCurvature { beta0: T, beta1: T },
    /// `β₀ + β₁·D²(u_obs)` evaluated on the observation at each step.
    ObservedCurvature { beta0: T, beta1: T },
}

/// When to replace the predicted state with an observation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReinitSchedule<T> {
    Never,
    /// Period in seconds; must be a whole number of steps.
    Every(T),
}

impl<T: Real> ReinitSchedule<T> {
    /// Steps between reinitializations, if any.
    pub fn period_steps(&self, dt: T) -> Result<Option<usize>> {
        match *self {
            ReinitSchedule::Never => Ok(None),
            ReinitSchedule::Every(p) => {
                let steps = (p / dt).round();
                if !(p > T::zero()) || steps < T::one() || (steps * dt - p).abs() > dt * T::lit(1e-9) {
                    return Err(Error::Schedule(format!(
                        "reinit period {p} s is not a positive multiple of the {dt} s step"
                    )));
                }
                Ok(steps.to_usize())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatPrediction<T> {
    /// Time of step 0.
    pub t0: T,
    pub dt: T,
    /// State at every step, starting with the initial condition.
    pub u: Vec<Vec<T>>,
    /// Steps whose state was replaced by an observation.
    pub reinit: Vec<bool>,
    /// Mean squared error over interior nodes and predicted (not reinitialized)
    /// steps, when observations were supplied.
    pub mse: Option<T>,
}

impl<T: Real> HeatPrediction<T> {
    pub fn time(&self, k: usize) -> T {
        self.t0 + self.dt * T::from_usize_lossy(k)
    }
}

/// Mean squared difference over interior nodes of steps where `score[k]`.
pub fn interior_mse<T: Real>(pred: &[Vec<T>], obs: &[Vec<T>], score: impl Fn(usize) -> bool) -> Option<T> {
    let mut total = T::zero();
    let mut count = 0usize;
    for (k, (p, o)) in pred.iter().zip(obs).enumerate() {
        if !score(k) {
            continue;
        }
        for i in 1..p.len() - 1 {
            let d = p[i] - o[i];
            total += d * d;
            count += 1;
        }
    }
    (count > 0).then(|| total / T::from_usize_lossy(count))
}

/// Steps the chosen model for `steps` steps of `dt` from `init`.
///
/// `observations[j]` is the measured state at step `j` (step 0 is the
/// initial time). Observations are required at reinitialization steps and,
/// for [`SourceModel::ObservedCurvature`], at every step.
pub fn predict<T: Real>(
    grid: &RodGrid<T>,
    model: SourceModel<T>,
    dt: T,
    t0: T,
    init: &[T],
    steps: usize,
    schedule: ReinitSchedule<T>,
    observations: Option<&[Vec<T>]>,
) -> Result<HeatPrediction<T>> {
    if init.len() != grid.len() {
        return Err(Error::InvalidParameter(format!(
            "initial state has {} values for {} nodes",
            init.len(),
            grid.len()
        )));
    }
    let period = schedule.period_steps(dt)?;
    let (beta0, beta1, folded) = match model {
        SourceModel::Nominal => (T::zero(), T::zero(), true),
        SourceModel::RunningCurvature { beta0, beta1 } => (beta0, beta1, true),
        SourceModel::ObservedCurvature { beta0, beta1 } => (beta0, beta1, false),
    };
    let ops = assemble_operators(grid, dt, if folded { beta1 } else { T::zero() });
    let system: &Tridiagonal<T> = if folded { &ops.augmented } else { &ops.implicit };
    let obs_at = |k: usize, why: &str| -> Result<&Vec<T>> {
        observations
            .and_then(|o| o.get(k))
            .ok_or_else(|| Error::Schedule(format!("no observation at step {k} ({why})")))
    };

    let mut u = init.to_vec();
    grid.with_boundaries(&mut u);
    let mut states = Vec::with_capacity(steps + 1);
    let mut reinit = Vec::with_capacity(steps + 1);
    states.push(u.clone());
    reinit.push(false);
    for k in 1..=steps {
        if period.is_some_and(|p| k % p == 0) {
            u = obs_at(k, "reinitialization")?.clone();
            grid.with_boundaries(&mut u);
            states.push(u.clone());
            reinit.push(true);
            continue;
        }
        let mut rhs = u.clone();
        let source: Vec<T> = if folded {
            vec![beta0; grid.len()]
        } else {
            let obs = obs_at(k, "observed-curvature source")?;
            let mut s = vec![T::zero(); grid.len()];
            for d in spatial_derivatives(grid, obs) {
                s[d.node] = beta0 + beta1 * d.second;
            }
            s
        };
        for i in grid.interior() {
            rhs[i] += dt * source[i];
        }
        rhs[0] = grid.u0;
        let last = rhs.len() - 1;
        rhs[last] = grid.un;
        u = system.solve(&rhs)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow(format!("heat prediction at step {k}")));
        }
        states.push(u.clone());
        reinit.push(false);
    }
    let mse = observations.and_then(|obs| {
        let n = obs.len().min(states.len());
        interior_mse(&states[..n], &obs[..n], |k| k > 0 && !reinit[k])
    });
    Ok(HeatPrediction {
        t0,
        dt,
        u: states,
        reinit,
        mse,
    })
}

/// Regression-modified prediction: `A·u^k = u^{k−1} + Δt·β₀` with `A` built
/// from diffusivity `α + β₁`.
#[allow(clippy::too_many_arguments)]
pub fn predict_modified<T: Real>(
    grid: &RodGrid<T>,
    beta0: T,
    beta1: T,
    dt: T,
    t0: T,
    init: &[T],
    steps: usize,
    schedule: ReinitSchedule<T>,
    observations: Option<&[Vec<T>]>,
) -> Result<HeatPrediction<T>> {
    predict(grid, SourceModel::RunningCurvature { beta0, beta1 }, dt, t0, init, steps, schedule, observations)
}

/// Source-free backward-Euler prediction.
pub fn predict_nominal<T: Real>(
    grid: &RodGrid<T>,
    dt: T,
    t0: T,
    init: &[T],
    steps: usize,
    schedule: ReinitSchedule<T>,
    observations: Option<&[Vec<T>]>,
) -> Result<HeatPrediction<T>> {
    predict(grid, SourceModel::Nominal, dt, t0, init, steps, schedule, observations)
}

/// Both regression-source variants over the same span, each scored against
/// the observations.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantComparison<T> {
    pub observed_curvature: HeatPrediction<T>,
    pub running_curvature: HeatPrediction<T>,
}

pub fn evaluate_lambda_model_variants<T: Real>(
    grid: &RodGrid<T>,
    observations: &[Vec<T>],
    beta0: T,
    beta1: T,
    dt: T,
    t0: T,
    schedule: ReinitSchedule<T>,
) -> Result<VariantComparison<T>> {
    let steps = observations
        .len()
        .checked_sub(1)
        .ok_or(Error::EmptyDataset)?;
    let init = &observations[0];
    Ok(VariantComparison {
        observed_curvature: predict(
            grid,
            SourceModel::ObservedCurvature { beta0, beta1 },
            dt,
            t0,
            init,
            steps,
            schedule,
            Some(observations),
        )?,
        running_curvature: predict(
            grid,
            SourceModel::RunningCurvature { beta0, beta1 },
            dt,
            t0,
            init,
            steps,
            schedule,
            Some(observations),
        )?,
    })
}

pub const PREDICTION_HEADER: &str = "t_s,node_index,u_pred_K";

/// Prediction CSV for interior nodes, with observations when given.
pub fn prediction_csv(
    grid: &RodGrid<f64>,
    pred: &HeatPrediction<f64>,
    observations: Option<&[Vec<f64>]>,
) -> String {
    let mut s = String::from(PREDICTION_HEADER);
    if observations.is_some() {
        s.push_str(",u_obs_K");
    }
    s.push('\n');
    for (k, u) in pred.u.iter().enumerate() {
        for i in grid.interior() {
            s.push_str(&format!("{},{i},{}", fmt17(pred.time(k)), fmt17(u[i])));
            if let Some(obs) = observations {
                s.push(',');
                if let Some(o) = obs.get(k) {
                    s.push_str(&fmt17(o[i]));
                }
            }
            s.push('\n');
        }
    }
    s
}
