//! Moving-window polynomial interpolation of sparse ephemeris positions.
//!
//! Each window spans 17 consecutive samples and carries a degree-16 fit per
//! axis on normalized time `τ ∈ [−1, 1]`. Windows advance by 8 samples and each
//! one is used for the 8 sample intervals at its centre, so every output point
//! is at least 4 samples away from the edges of its window, except at the ends
//! of the data where no such window exists.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Qr};
use crate::scalar::Real;
use crate::vec3::Vec3;

pub const WINDOW_POINTS: usize = 17;
const HALF: usize = WINDOW_POINTS / 2;
const ADVANCE: usize = 8;
const EMIT_OFFSET: usize = 4;

#[derive(Clone, Debug)]
struct Window<T> {
    start: usize,
    centre: T,
    half_span: T,
    /// Centre sample; the polynomials model the departure from it.
    offset: Vec3<T>,
    coeffs: [Vec<T>; 3],
}

impl<T: Real> Window<T> {
    fn eval(&self, t: T) -> Vec3<T> {
        let tau = (t - self.centre) / self.half_span;
        let horner = |c: &[T]| c.iter().rev().fold(T::zero(), |acc, &ci| acc * tau + ci);
        self.offset
            + Vec3([
                horner(&self.coeffs[0]),
                horner(&self.coeffs[1]),
                horner(&self.coeffs[2]),
            ])
    }
}

/// Piecewise-polynomial position model over the span of the input samples.
#[derive(Clone, Debug)]
pub struct MovingWindowInterpolator<T> {
    t0: T,
    spacing: T,
    n_samples: usize,
    windows: Vec<Window<T>>,
    /// Sample index at which window `m + 1` takes over from window `m`.
    handover: Vec<usize>,
}

/// Start indices of the windows covering `n` samples.
fn window_starts(n: usize) -> Vec<usize> {
    let mut starts: Vec<usize> = (0..)
        .map(|m| m * ADVANCE)
        .take_while(|s| s + WINDOW_POINTS <= n)
        .collect();
    if let Some(&last) = starts.last() {
        if last + WINDOW_POINTS < n {
            starts.push(n - WINDOW_POINTS);
        }
    }
    starts
}

fn check_uniform<T: Real>(epochs: &[T]) -> Result<T> {
    let spacing = epochs[1] - epochs[0];
    if !(spacing > T::zero()) {
        return Err(Error::InvalidObservation(format!(
            "epochs must increase, spacing {spacing}"
        )));
    }
    let tol = spacing * T::lit(1e-9);
    for w in epochs.windows(2) {
        let d = w[1] - w[0];
        if (d - spacing).abs() > tol {
            return Err(Error::DataGap {
                from: w[0].to_f64_lossy(),
                to: w[1].to_f64_lossy(),
                spacing: spacing.to_f64_lossy(),
            });
        }
    }
    Ok(spacing)
}

impl<T: Real> MovingWindowInterpolator<T> {
    /// Fits all windows. Samples must be uniformly spaced; a missing epoch is
    /// reported as a data gap.
    pub fn fit(epochs: &[T], positions: &[Vec3<T>]) -> Result<Self> {
        if epochs.len() != positions.len() {
            return Err(Error::InvalidParameter(
                "epochs and positions differ in length".into(),
            ));
        }
        let n = epochs.len();
        if n < WINDOW_POINTS {
            return Err(Error::InsufficientData {
                what: "ephemeris samples",
                needed: WINDOW_POINTS,
                got: n,
            });
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidObservation("non-finite ephemeris position".into()));
        }
        let spacing = check_uniform(epochs)?;

        // Node abscissae are identical for every window, so one factorization serves all.
        let nodes: Vec<T> = (0..WINDOW_POINTS)
            .map(|i| (T::from_usize_lossy(i) - T::from_usize_lossy(HALF)) / T::from_usize_lossy(HALF))
            .collect();
        let vander = Matrix::from_fn(WINDOW_POINTS, WINDOW_POINTS, |i, j| nodes[i].powi(j as i32));
        let qr = Qr::factor(vander);

        let starts = window_starts(n);
        let half_span = spacing * T::from_usize_lossy(HALF);
        let windows = starts
            .iter()
            .map(|&s| {
                let offset = positions[s + HALF];
                let fit_axis = |axis: usize| {
                    let rhs: Vec<T> = positions[s..s + WINDOW_POINTS].iter().map(|p| p[axis] - offset[axis]).collect();
                    qr.solve_least_squares(&rhs)
                };
                Window {
                    start: s,
                    centre: epochs[s + HALF],
                    half_span,
                    offset,
                    coeffs: [fit_axis(0), fit_axis(1), fit_axis(2)],
                }
            })
            .collect();
        let handover = starts[..starts.len() - 1]
            .iter()
            .map(|&s| s + ADVANCE + EMIT_OFFSET)
            .collect();
        Ok(MovingWindowInterpolator {
            t0: epochs[0],
            spacing,
            n_samples: n,
            windows,
            handover,
        })
    }

    pub fn window_count(&self) -> usize {
        self.windows.len()
    }

    pub fn start_time(&self) -> T {
        self.t0
    }

    pub fn end_time(&self) -> T {
        self.t0 + self.spacing * T::from_usize_lossy(self.n_samples - 1)
    }

    fn window_for(&self, t: T) -> Result<&Window<T>> {
        let (lo, hi) = (self.start_time(), self.end_time());
        let slack = self.spacing * T::lit(1e-9);
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::InvalidParameter(format!(
                "time {t} outside interpolation span [{lo}, {hi}]"
            )));
        }
        let pos = (t - self.t0) / self.spacing;
        let m = self
            .handover
            .partition_point(|&b| T::from_usize_lossy(b) <= pos);
        Ok(&self.windows[m])
    }

    /// Interpolated position at an arbitrary time inside the data span.
    pub fn eval(&self, t: T) -> Result<Vec3<T>> {
        Ok(self.window_for(t)?.eval(t))
    }

    /// Start index of the window used at time `t`.
    pub fn window_start_at(&self, t: T) -> Result<usize> {
        Ok(self.window_for(t)?.start)
    }

    /// Samples the model every `step` seconds from the first to the last
    /// input epoch inclusive. `step` must divide the input spacing.
    pub fn sample(&self, step: T) -> Result<(T, Vec<Vec3<T>>)> {
        let ratio = (self.spacing / step).round();
        if !(step > T::zero()) || (ratio * step - self.spacing).abs() > self.spacing * T::lit(1e-12) {
            return Err(Error::InvalidParameter(format!(
                "output step {step} does not divide sample spacing {}",
                self.spacing
            )));
        }
        let ratio = ratio.to_usize().unwrap_or(0);
        let total = (self.n_samples - 1) * ratio;
        let mut out = Vec::with_capacity(total + 1);
        let mut m = 0;
        for j in 0..=total {
            while m < self.handover.len() && j >= self.handover[m] * ratio {
                m += 1;
            }
            let t = self.t0 + step * T::from_usize_lossy(j);
            out.push(self.windows[m].eval(t));
        }
        Ok((self.t0, out))
    }
}
