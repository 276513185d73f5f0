//! Known forcing fields injected by the generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Number of monomials up to degree two in three variables.
pub const ORBIT_MONOMIALS: usize = 10;

/// Per-unit-mass acceleration field, m/s².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitForcing {
    Zero,
    Constant { value: [f64; 3] },
    /// `λ_axis(r) = Σ_m coeffs[axis][m] · monomial_m(r / scale)` with monomials
    /// `1, x, y, z, x², xy, xz, y², yz, z²`.
    Quadratic {
        scale: f64,
        coeffs: [[f64; ORBIT_MONOMIALS]; 3],
    },
}

impl OrbitForcing {
    /// Smooth field of order 1e-7 m/s² over geosynchronous radii, with
    /// distinct structure on each axis.
    pub fn reference_field() -> Self {
        let mut coeffs = [[0.0; ORBIT_MONOMIALS]; 3];
        coeffs[0] = [3e-7, 4e-7, -2e-7, 1e-7, 1e-7, 0.0, 0.0, 0.0, 0.0, 0.0];
        coeffs[1] = [-2e-7, 1e-7, 5e-7, 0.0, 0.0, 2e-7, 0.0, 0.0, 0.0, 0.0];
        coeffs[2] = [1e-7, 2e-7, 0.0, 0.0, 0.0, 0.0, 0.0, 3e-7, 0.0, 0.0];
        OrbitForcing::Quadratic {
            scale: 4.2164e7,
            coeffs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            OrbitForcing::Zero => true,
            OrbitForcing::Constant { value } => value.iter().all(|v| v.is_finite()),
            OrbitForcing::Quadratic { scale, coeffs } => {
                scale.is_finite() && *scale > 0.0 && coeffs.iter().flatten().all(|c| c.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("forcing coefficients must be finite".into()))
        }
    }

    pub fn eval<T: Real>(&self, r: Vec3<T>) -> Vec3<T> {
        match self {
            OrbitForcing::Zero => Vec3::zero(),
            OrbitForcing::Constant { value } => Vec3::from_f64(*value),
            OrbitForcing::Quadratic { scale, coeffs } => {
                let s = r * (T::one() / T::lit(*scale));
                let [x, y, z] = s.0;
                let m = [T::one(), x, y, z, x * x, x * y, x * z, y * y, y * z, z * z];
                let axis = |c: &[f64; ORBIT_MONOMIALS]| {
                    c.iter()
                        .zip(&m)
                        .fold(T::zero(), |acc, (&ci, &mi)| acc + T::lit(ci) * mi)
                };
                Vec3([axis(&coeffs[0]), axis(&coeffs[1]), axis(&coeffs[2])])
            }
        }
    }
}

/// Heat source field, K/s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeatSource {
    Zero,
    Constant { value: f64 },
    /// `s(x, t) = Σ coeffs[i][j] · (x / x_scale)^i · (t / t_scale)^j`.
    Polynomial {
        x_scale: f64,
        t_scale: f64,
        coeffs: Vec<Vec<f64>>,
    },
    /// `s = beta0 + beta1 · D²(u)`, evaluated on the temperature being solved for.
    CurvatureLinked { beta0: f64, beta1: f64 },
}

impl HeatSource {
    /// Time-independent source, positive in the middle of a 0.306 m rod.
    pub fn reference_persistent() -> Self {
        HeatSource::Polynomial {
            x_scale: 0.306,
            t_scale: 1000.0,
            coeffs: vec![vec![0.01], vec![0.04], vec![-0.04]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            HeatSource::Zero => true,
            HeatSource::Constant { value } => value.is_finite(),
            HeatSource::Polynomial {
                x_scale,
                t_scale,
                coeffs,
            } => {
                *x_scale > 0.0
                    && *t_scale > 0.0
                    && coeffs.iter().flatten().all(|c| c.is_finite())
            }
            HeatSource::CurvatureLinked { beta0, beta1 } => beta0.is_finite() && beta1.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("source coefficients must be finite and scales positive".into()))
        }
    }

    /// Value of an explicit source at `(x, t)`. The curvature-linked source has
    /// no explicit value and contributes only its constant part here.
    pub fn eval<T: Real>(&self, x: T, t: T) -> T {
        match self {
            HeatSource::Zero => T::zero(),
            HeatSource::Constant { value } => T::lit(*value),
            HeatSource::Polynomial {
                x_scale,
                t_scale,
                coeffs,
            } => {
                let xs = x / T::lit(*x_scale);
                let ts = t / T::lit(*t_scale);
                let mut acc = T::zero();
                let mut xp = T::one();
                for row in coeffs {
                    let mut tp = T::one();
                    for &c in row {
                        acc += T::lit(c) * xp * tp;
                        tp *= ts;
                    }
                    xp *= xs;
                }
                acc
            }
            HeatSource::CurvatureLinked { beta0, .. } => T::lit(*beta0),
        }
    }
}
