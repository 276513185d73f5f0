use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::scalar::Real;

/// Cartesian 3-vector.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec3<T>(pub [T; 3]);

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([T::zero(); 3])
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Vec3([T::lit(v[0]), T::lit(v[1]), T::lit(v[2])])
    }

    pub fn to_f64(self) -> [f64; 3] {
        [
            self.0[0].to_f64_lossy(),
            self.0[1].to_f64_lossy(),
            self.0[2].to_f64_lossy(),
        ]
    }

    pub fn dot(self, o: Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn cross(self, o: Self) -> Self {
        let [a, b, c] = self.0;
        let [d, e, f] = o.0;
        Vec3([b * f - c * e, c * d - a * f, a * e - b * d])
    }

    /// Squared Euclidean distance, evaluated as `dx² + dy² + dz²` in that order.
    pub fn distance_squared(self, o: Self) -> T {
        let dx = self.0[0] - o.0[0];
        let dy = self.0[1] - o.0[1];
        let dz = self.0[2] - o.0[2];
        dx * dx + dy * dy + dz * dz
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn map(self, f: impl Fn(T) -> T) -> Self {
        Vec3([f(self.0[0]), f(self.0[1]), f(self.0[2])])
    }

    pub fn max_abs(self) -> T {
        self.0[0].abs().max(self.0[1].abs()).max(self.0[2].abs())
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// Row-major 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Mat3([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn mul_vec(&self, v: Vec3<T>) -> Vec3<T> {
        let m = &self.0;
        Vec3([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_mat(&self, o: &Self) -> Self {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(T::zero(), |acc, k| acc + self.0[i][k] * o.0[k][j]);
            }
        }
        Mat3(out)
    }

    pub fn determinant(&self) -> T {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Rotation by `angle` radians about the z axis (right-handed).
    pub fn rotation_z(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let (o, z) = (T::one(), T::zero());
        Mat3([[c, -s, z], [s, c, z], [z, z, o]])
    }

    /// Rotation by `angle` radians about the x axis (right-handed).
    pub fn rotation_x(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let (o, z) = (T::one(), T::zero());
        Mat3([[o, z, z], [z, c, -s], [z, s, c]])
    }
}
