//! Small dense and banded solvers used by the interpolation, heat, and
//! regression modules.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given slices (all equal length).
    pub fn from_columns(columns: &[&[T]]) -> Self {
        let rows = columns.first().map_or(0, |c| c.len());
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)])
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting (`P·A = L·U`).
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn factor(mut a: Matrix<T>) -> Result<Self> {
        let n = a.rows;
        if a.cols != n {
            return Err(Error::InvalidParameter("LU requires a square matrix".into()));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // first row with the largest magnitude wins ties
            let mut p = k;
            let mut best = a[(k, k)].abs();
            for i in k + 1..n {
                let v = a[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() || !best.is_finite() {
                return Err(Error::SingularSystem(format!("zero pivot in column {k}")));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f != T::zero() {
                    for j in k + 1..n {
                        let u = a[(k, j)];
                        a[(i, j)] -= f * u;
                    }
                }
            }
        }
        Ok(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * y[j];
            }
            y[i] = s / self.lu[(i, i)];
        }
        y
    }

    /// Solves `Aᵀ x = b` with the same factorization.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        // Aᵀ = Uᵀ Lᵀ P
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= self.lu[(j, i)] * z[j];
            }
            z[i] = s / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s -= self.lu[(j, i)] * z[j];
            }
            z[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

/// Householder QR of a tall matrix (`rows >= cols`).
#[derive(Clone, Debug)]
pub struct Qr<T> {
    /// R in the upper triangle; Householder vectors below the diagonal.
    qr: Matrix<T>,
    /// Householder scaling factors τ_k (H_k = I − τ_k v vᵀ, v_k = 1).
    tau: Vec<T>,
    rdiag: Vec<T>,
}

impl<T: Real> Qr<T> {
    pub fn factor(mut a: Matrix<T>) -> Self {
        let (m, n) = (a.rows, a.cols);
        assert!(m >= n, "QR requires rows >= cols");
        let mut tau = vec![T::zero(); n];
        let mut rdiag = vec![T::zero(); n];
        for k in 0..n {
            let mut norm = T::zero();
            for i in k..m {
                norm = norm.hypot(a[(i, k)]);
            }
            if norm == T::zero() {
                continue;
            }
            let alpha = if a[(k, k)] > T::zero() { -norm } else { norm };
            let v0 = a[(k, k)] - alpha;
            // normalize so v_k = 1
            for i in k + 1..m {
                a[(i, k)] /= v0;
            }
            tau[k] = -v0 / alpha;
            rdiag[k] = alpha;
            a[(k, k)] = alpha;
            for j in k + 1..n {
                let mut s = a[(k, j)];
                for i in k + 1..m {
                    s += a[(i, k)] * a[(i, j)];
                }
                s *= tau[k];
                a[(k, j)] -= s;
                for i in k + 1..m {
                    let vi = a[(i, k)];
                    a[(i, j)] -= s * vi;
                }
            }
        }
        Qr { qr: a, tau, rdiag }
    }

    pub fn rows(&self) -> usize {
        self.qr.rows
    }

    pub fn cols(&self) -> usize {
        self.qr.cols
    }

    /// Diagonal of R; a zero or tiny entry signals rank deficiency.
    pub fn r_diagonal(&self) -> &[T] {
        &self.rdiag
    }

    /// First column index whose |R_jj| falls below `rel_tol · max |R_kk|`.
    pub fn rank_deficient_column(&self, rel_tol: T) -> Option<usize> {
        let max = self
            .rdiag
            .iter()
            .fold(T::zero(), |acc, &r| acc.max(r.abs()));
        if max == T::zero() {
            return if self.rdiag.is_empty() { None } else { Some(0) };
        }
        self.rdiag.iter().position(|&r| r.abs() <= rel_tol * max)
    }

    /// Applies Qᵀ to `b` in place.
    pub fn apply_qt(&self, b: &mut [T]) {
        let (m, n) = (self.qr.rows, self.qr.cols);
        assert_eq!(b.len(), m);
        for k in 0..n {
            if self.tau[k] == T::zero() {
                continue;
            }
            let mut s = b[k];
            for i in k + 1..m {
                s += self.qr[(i, k)] * b[i];
            }
            s *= self.tau[k];
            b[k] -= s;
            for i in k + 1..m {
                b[i] -= s * self.qr[(i, k)];
            }
        }
    }

    /// Applies Q to `b` in place.
    pub fn apply_q(&self, b: &mut [T]) {
        let (m, n) = (self.qr.rows, self.qr.cols);
        assert_eq!(b.len(), m);
        for k in (0..n).rev() {
            if self.tau[k] == T::zero() {
                continue;
            }
            let mut s = b[k];
            for i in k + 1..m {
                s += self.qr[(i, k)] * b[i];
            }
            s *= self.tau[k];
            b[k] -= s;
            for i in k + 1..m {
                b[i] -= s * self.qr[(i, k)];
            }
        }
    }

    /// Least-squares solution of `A x ≈ b`.
    pub fn solve_least_squares(&self, b: &[T]) -> Vec<T> {
        let n = self.qr.cols;
        let mut y = b.to_vec();
        self.apply_qt(&mut y);
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.qr[(i, j)] * x[j];
            }
            x[i] = s / self.qr[(i, i)];
        }
        x
    }

    /// Squared row norms of the thin Q factor, i.e. the diagonal of the hat
    /// matrix `A (AᵀA)⁻¹ Aᵀ`.
    pub fn hat_diagonal(&self) -> Vec<T> {
        let (m, n) = (self.qr.rows, self.qr.cols);
        let mut h = vec![T::zero(); m];
        let mut col = vec![T::zero(); m];
        for j in 0..n {
            col.iter_mut().for_each(|c| *c = T::zero());
            col[j] = T::one();
            self.apply_q(&mut col);
            for (hi, &q) in h.iter_mut().zip(&col) {
                *hi += q * q;
            }
        }
        h
    }
}

/// Tridiagonal system. Row `i` reads `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1]`;
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if i == j {
            self.diag[i]
        } else if j + 1 == i {
            self.lower[i]
        } else if i + 1 == j {
            self.upper[i]
        } else {
            T::zero()
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| self.get(i, j))
    }

    /// Thomas algorithm; stable for the diagonally dominant operators assembled
    /// by the heat module.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let mut denom = self.diag[0];
        if denom == T::zero() {
            return Err(Error::SingularSystem("tridiagonal pivot 0".into()));
        }
        c[0] = if n > 1 { self.upper[0] / denom } else { T::zero() };
        d[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - self.lower[i] * c[i - 1];
            if denom == T::zero() || !denom.is_finite() {
                return Err(Error::SingularSystem(format!("tridiagonal pivot {i}")));
            }
            c[i] = if i + 1 < n { self.upper[i] / denom } else { T::zero() };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / denom;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i] * next;
        }
        Ok(x)
    }
}
