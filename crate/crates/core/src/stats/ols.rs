use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Qr};
use crate::scalar::{sum, Real};

/// Least-squares fit of `y ≈ X·β`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionFit<T> {
    /// Coefficients in design-column order (intercept first when present).
    pub coefficients: Vec<T>,
    /// Unbiased residual variance `SS_res / (N − K)`.
    pub sigma2: T,
    pub r2: T,
    pub adj_r2: T,
    pub n: usize,
    /// Number of estimated coefficients, intercept included.
    pub k: usize,
    pub fitted: Vec<T>,
    pub residuals: Vec<T>,
    pub ss_res: T,
    pub ss_tot: T,
}

/// Design matrix with a leading column of ones.
pub fn design_with_intercept<T: Real>(columns: &[&[T]]) -> Matrix<T> {
    let n = columns.first().map_or(0, |c| c.len());
    let ones = vec![T::one(); n];
    let mut all: Vec<&[T]> = vec![&ones];
    all.extend_from_slice(columns);
    Matrix::from_columns(&all)
}

/// Relative size of a diagonal entry of R below which a column counts as
/// linearly dependent on the previous ones.
fn rank_tolerance<T: Real>() -> T {
    T::epsilon() * T::lit(1e6)
}

pub(crate) fn factor_design<T: Real>(design: &Matrix<T>) -> Result<Qr<T>> {
    let (n, k) = (design.rows(), design.cols());
    if n <= k {
        return Err(Error::InsufficientData {
            what: "observations (need more than coefficients)",
            needed: k + 1,
            got: n,
        });
    }
    let qr = Qr::factor(design.clone());
    if let Some(column) = qr.rank_deficient_column(rank_tolerance()) {
        return Err(Error::SingularDesign { column });
    }
    Ok(qr)
}

pub fn fit_ols<T: Real>(design: &Matrix<T>, y: &[T]) -> Result<RegressionFit<T>> {
    if y.len() != design.rows() {
        return Err(Error::InvalidParameter(format!(
            "{} responses for {} design rows",
            y.len(),
            design.rows()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidObservation("non-finite response".into()));
    }
    let qr = factor_design(design)?;
    let (n, k) = (design.rows(), design.cols());
    let coefficients = qr.solve_least_squares(y);
    let fitted = design.mul_vec(&coefficients);
    let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&a, &b)| a - b).collect();
    let ss_res = sum(&residuals.iter().map(|&e| e * e).collect::<Vec<_>>());
    let mean = sum(y) / T::from_usize_lossy(n);
    let ss_tot = sum(&y.iter().map(|&v| (v - mean) * (v - mean)).collect::<Vec<_>>());
    let r2 = if ss_tot == T::zero() {
        warn!("response has zero variance; R² set to 0");
        T::zero()
    } else {
        T::one() - ss_res / ss_tot
    };
    let nf = T::from_usize_lossy(n);
    let kf = T::from_usize_lossy(k);
    let adj_r2 = T::one() - (T::one() - r2) * (nf - T::one()) / (nf - kf);
    Ok(RegressionFit {
        coefficients,
        sigma2: ss_res / (nf - kf),
        r2,
        adj_r2,
        n,
        k,
        fitted,
        residuals,
        ss_res,
        ss_tot,
    })
}
