//! Source recovery from observed temperatures.
//!
//! Each step couples the implicit heat update with the observation
//! constraint:
//!
//! ```text
//! [ L̃   −Δt·Dᵀ ] [ u^k ]   [ u^{k−1} ]
//! [ D     0    ] [ λ^k ] = [ Y(t_k)  ]
//! ```
//!
//! where `D` maps node temperatures to observations.

use crate::error::{Error, Result};
use crate::heat::grid::{RodGrid, TemperatureSeries};
use crate::heat::operators::assemble_operators;
use crate::linalg::{Lu, Matrix, Tridiagonal};
use crate::scalar::Real;

/// Solver for one constrained step with a fixed observation operator.
#[derive(Clone, Debug)]
pub struct ConstrainedStep<T> {
    implicit: Tridiagonal<T>,
    observe: Lu<T>,
    dt: T,
}

impl<T: Real> ConstrainedStep<T> {
    /// Uses direct observation of every node.
    pub fn new(grid: &RodGrid<T>, dt: T) -> Result<Self> {
        Self::with_observation(grid, dt, Matrix::identity(grid.len()))
    }

    pub fn with_observation(grid: &RodGrid<T>, dt: T, observation: Matrix<T>) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        if observation.rows() != grid.len() || observation.cols() != grid.len() {
            return Err(Error::InvalidParameter("observation operator must be square over the nodes".into()));
        }
        Ok(ConstrainedStep {
            implicit: assemble_operators(grid, dt, T::zero()).implicit,
            observe: Lu::factor(observation)?,
            dt,
        })
    }

    /// Block elimination: `u = D⁻¹Y`, then `λ = D⁻ᵀ(L̃u − u_prev)/Δt` with the
    /// boundary entries set to zero.
    pub fn solve(&self, u_prev: &[T], y: &[T]) -> (Vec<T>, Vec<T>) {
        let u = self.observe.solve(y);
        let lu = self.implicit.mul_vec(&u);
        let inv_dt = T::one() / self.dt;
        let r: Vec<T> = lu
            .iter()
            .zip(u_prev)
            .map(|(&a, &b)| (a - b) * inv_dt)
            .collect();
        let mut lambda = self.observe.solve_transpose(&r);
        let n = lambda.len();
        lambda[0] = T::zero();
        lambda[n - 1] = T::zero();
        (u, lambda)
    }
}

/// Direct formula for directly observed nodes: `u = Y`,
/// `λ = (L̃Y − u_prev)/Δt` on interior nodes.
pub fn closed_form_step<T: Real>(implicit: &Tridiagonal<T>, dt: T, u_prev: &[T], y: &[T]) -> Vec<T> {
    let ly = implicit.mul_vec(y);
    let inv_dt = T::one() / dt;
    let n = y.len();
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                T::zero()
            } else {
                (ly[i] - u_prev[i]) * inv_dt
            }
        })
        .collect()
}

/// Solves the full `(2n+2)`-dimensional system by dense LU with the boundary
/// multipliers pinned to zero. Returns `(u, λ)`.
pub fn full_system_step<T: Real>(
    grid: &RodGrid<T>,
    dt: T,
    observation: &Matrix<T>,
    u_prev: &[T],
    y: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    let m = grid.len();
    let implicit = assemble_operators(grid, dt, T::zero()).implicit;
    let size = 2 * m;
    let mut a = Matrix::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = implicit.get(i, j);
            a[(m + i, j)] = observation[(i, j)];
        }
        for j in 0..m {
            a[(i, m + j)] = -dt * observation[(j, i)];
        }
        rhs[i] = u_prev[i];
        rhs[m + i] = y[i];
    }
    // Boundary multipliers are not unknowns: replace their columns so λ₀ = λₙ = 0.
    for b in [0, m - 1] {
        for i in 0..size {
            a[(i, m + b)] = T::zero();
        }
    }
    // The boundary rows of the heat block are then redundant with the
    // observation rows; use them to pin the multipliers instead.
    for (row, b) in [(0, 0), (m - 1, m - 1)] {
        for j in 0..size {
            a[(row, j)] = T::zero();
        }
        a[(row, m + b)] = T::one();
        rhs[row] = T::zero();
    }
    let x = Lu::factor(a)?.solve(&rhs);
    Ok((x[..m].to_vec(), x[m..].to_vec()))
}

/// Recovered sources for steps `1..=steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries<T> {
    pub dt: T,
    /// `u[k−1]` is the temperature at step `k`.
    pub u: Vec<Vec<T>>,
    /// `lambda[k−1]` is the source at step `k`; boundary entries are zero.
    pub lambda: Vec<Vec<T>>,
}

impl<T: Real> LambdaSeries<T> {
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Time of entry `j` (step `j + 1`).
    pub fn time(&self, j: usize) -> T {
        self.dt * T::from_usize_lossy(j + 1)
    }
}

/// Solves the constrained system at every step `1 ≤ k < samples`, starting
/// from the first observation.
pub fn solve_lambda_series<T: Real>(
    grid: &RodGrid<T>,
    series: &TemperatureSeries<T>,
    samples: usize,
) -> Result<LambdaSeries<T>> {
    if samples < 2 || samples > series.len() {
        return Err(Error::InsufficientData {
            what: "temperature samples",
            needed: 2,
            got: samples.min(series.len()),
        });
    }
    let step = ConstrainedStep::new(grid, series.dt)?;
    let mut u_prev = series.u[0].clone();
    let mut us = Vec::with_capacity(samples - 1);
    let mut lambdas = Vec::with_capacity(samples - 1);
    for y in &series.u[1..samples] {
        let (u, lambda) = step.solve(&u_prev, y);
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::Overflow("solving the constrained heat step".into()));
        }
        u_prev.clone_from(&u);
        us.push(u);
        lambdas.push(lambda);
    }
    Ok(LambdaSeries {
        dt: series.dt,
        u: us,
        lambda: lambdas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> RodGrid<f64> {
        RodGrid::new(vec![0.0, 0.00434, 0.05, 0.11, 0.2, 0.28734, 0.306], 8.404e-5, 273.15, 292.65).unwrap()
    }

    #[test]
    fn steady_profile_needs_no_source() {
        let g = grid();
        let s = TemperatureSeries { dt: 2.0, time_offset: 0.0, u: vec![g.steady_profile(); 5] };
        let ls = solve_lambda_series(&g, &s, 5).unwrap();
        for l in &ls.lambda {
            for &v in l {
                assert!(v.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn block_solve_returns_observation_bitwise() {
        let g = grid();
        let step = ConstrainedStep::new(&g, 2.0).unwrap();
        let prev = vec![273.15, 280.0, 281.5, 285.25, 288.0, 291.0, 292.65];
        let y = vec![273.15, 280.1, 281.3, 285.0, 288.5, 291.2, 292.65];
        let (u, lam) = step.solve(&prev, &y);
        assert_eq!(u, y);
        let cf = closed_form_step(&assemble_operators(&g, 2.0, 0.0).implicit, 2.0, &prev, &y);
        assert_eq!(lam, cf);
    }

    #[test]
    fn full_system_agrees() {
        let g = grid();
        let prev = vec![273.15, 280.0, 281.5, 285.25, 288.0, 291.0, 292.65];
        let y = vec![273.15, 280.1, 281.3, 285.0, 288.5, 291.2, 292.65];
        let (u, lam) = full_system_step(&g, 2.0, &Matrix::identity(7), &prev, &y).unwrap();
        let cf = closed_form_step(&assemble_operators(&g, 2.0, 0.0).implicit, 2.0, &prev, &y);
        for i in 0..7 {
            assert!((u[i] - y[i]).abs() < 1e-12 * 300.0);
            assert!((lam[i] - cf[i]).abs() <= 1e-12 * cf[i].abs().max(1.0), "{i}: {} vs {}", lam[i], cf[i]);
        }
        assert_eq!(lam[0], 0.0);
        assert_eq!(lam[6], 0.0);
    }
}
