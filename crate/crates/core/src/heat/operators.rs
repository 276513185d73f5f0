//! Finite-difference operators on a nonuniform rod grid.

use crate::heat::grid::RodGrid;
use crate::linalg::Tridiagonal;
use crate::scalar::Real;

/// The three system matrices of the rod model.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatOperators<T> {
    /// Diffusion operator `α·∂²/∂x²`; boundary rows are zero.
    pub diffusion: Tridiagonal<T>,
    /// Backward-Euler system matrix with diffusivity `α`; identity boundary rows.
    pub implicit: Tridiagonal<T>,
    /// Backward-Euler system matrix with diffusivity `α + β₁`; identity boundary rows.
    pub augmented: Tridiagonal<T>,
}

/// Unscaled second-difference weights `(h_right, −(h_right + h_left), h_left)`
/// for every interior node, in node order.
pub fn raw_stencil<T: Real>(grid: &RodGrid<T>) -> Vec<[T; 3]> {
    grid.interior()
        .map(|i| {
            let (hr, hl) = (grid.h_right(i), grid.h_left(i));
            [hr, -(hr + hl), hl]
        })
        .collect()
}

/// Row sum of a raw stencil, accumulated as `(left + right) + centre`.
pub fn stencil_row_sum<T: Real>(row: &[T; 3]) -> T {
    (row[0] + row[2]) + row[1]
}

fn implicit_matrix<T: Real>(grid: &RodGrid<T>, dt: T, diffusivity: T) -> Tridiagonal<T> {
    let n = grid.len();
    let two = T::lit(2.0);
    let mut m = Tridiagonal {
        lower: vec![T::zero(); n],
        diag: vec![T::one(); n],
        upper: vec![T::zero(); n],
    };
    let k = two * dt * diffusivity;
    for i in grid.interior() {
        let (h1, h2) = (grid.h_right(i), grid.h_left(i));
        m.lower[i] = -k / (h2 * (h1 + h2));
        m.diag[i] = T::one() + k / (h1 * h2);
        m.upper[i] = -k / (h1 * (h1 + h2));
    }
    m
}

pub fn assemble_operators<T: Real>(grid: &RodGrid<T>, dt: T, beta1: T) -> HeatOperators<T> {
    let n = grid.len();
    let two = T::lit(2.0);
    let mut diffusion = Tridiagonal {
        lower: vec![T::zero(); n],
        diag: vec![T::zero(); n],
        upper: vec![T::zero(); n],
    };
    for i in grid.interior() {
        let (h1, h2) = (grid.h_right(i), grid.h_left(i));
        let k = two * grid.alpha;
        diffusion.lower[i] = k / (h2 * (h1 + h2));
        diffusion.diag[i] = -k / (h1 * h2);
        diffusion.upper[i] = k / (h1 * (h1 + h2));
    }
    HeatOperators {
        diffusion,
        implicit: implicit_matrix(grid, dt, grid.alpha),
        augmented: implicit_matrix(grid, dt, grid.alpha + beta1),
    }
}

/// First and second spatial differences at each interior node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeDerivatives<T> {
    pub node: usize,
    /// Backward difference `(u_i − u_{i−1}) / (x_i − x_{i−1})`.
    pub first: T,
    /// Three-point second difference, exact for quadratics on any spacing.
    pub second: T,
}

pub fn spatial_derivatives<T: Real>(grid: &RodGrid<T>, u: &[T]) -> Vec<NodeDerivatives<T>> {
    assert_eq!(u.len(), grid.len(), "one value per node");
    let two = T::lit(2.0);
    grid.interior()
        .map(|i| {
            let (h1, h2) = (grid.h_right(i), grid.h_left(i));
            let first = (u[i] - u[i - 1]) / h2;
            let second = two * (h1 * u[i - 1] - (h1 + h2) * u[i] + h2 * u[i + 1])
                / (h1 * h2 * (h1 + h2));
            NodeDerivatives { node: i, first, second }
        })
        .collect()
}
