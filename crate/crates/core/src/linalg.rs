//! Small dense and tridiagonal linear algebra.
//!
//! Vectors are plain `[f64]` slices and `Vec<f64>`. The tridiagonal form is
//! the working representation of every stiffness matrix; [`DenseMatrix`]
//! exists for explicitly assembled iteration matrices used in verification.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Ratio `‖Mx‖ / ‖x‖` at or below which power iteration treats the iterate
/// as annihilated.
pub const COLLAPSE_RATIO: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(dot(v, v))
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(alpha: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

fn check_finite(v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Square tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        check_len(diag.len() - 1, sub.len())?;
        check_len(diag.len() - 1, sup.len())?;
        check_finite(&sub)?;
        check_finite(&diag)?;
        check_finite(&sup)?;
        Ok(Self { sub, diag, sup })
    }

    /// Matrix with constant diagonals, e.g. `tridiag(-1, 2, -1)`.
    pub fn constant(dim: usize, sub: f64, diag: f64, sup: f64) -> Result<Self> {
        let off = dim.saturating_sub(1);
        Self::new(vec![sub; off], vec![diag; dim], vec![sup; off])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// Entry `(i, j)`, zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if j + 1 == i {
            self.sub[j]
        } else if i + 1 == j {
            self.sup[i]
        } else {
            0.0
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            sub: scaled(alpha, &self.sub),
            diag: scaled(alpha, &self.diag),
            sup: scaled(alpha, &self.sup),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        check_len(n, x.len())?;
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * x[i + 1];
            }
            y.push(acc);
        }
        Ok(y)
    }

    /// `f - A u`.
    pub fn residual(&self, u: &[f64], f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), f.len())?;
        let au = self.matvec(u)?;
        Ok(sub(f, &au))
    }

    /// Thomas algorithm (Gaussian elimination without pivoting).
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        check_len(n, b.len())?;
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];

        let mut pivot = self.diag[0];
        if pivot == 0.0 {
            return Err(Error::SingularMatrix { row: 0 });
        }
        if n > 1 {
            c_prime[0] = self.sup[0] / pivot;
        }
        d_prime[0] = b[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i - 1] * c_prime[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::SingularMatrix { row: i });
            }
            if i + 1 < n {
                c_prime[i] = self.sup[i] / pivot;
            }
            d_prime[i] = (b[i] - self.sub[i - 1] * d_prime[i - 1]) / pivot;
        }

        let mut x = d_prime;
        for i in (0..n - 1).rev() {
            x[i] -= c_prime[i] * x[i + 1];
        }
        Ok(x)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i + 1, i)] = self.sub[i];
                m[(i, i + 1)] = self.sup[i];
            }
        }
        m
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_len(rows, col.len())?;
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        check_len(self.cols, rhs.rows)?;
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0.0 {
                    axpy(a, rhs.row(k), out_row);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self - rhs`
    pub fn sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        check_len(self.rows, rhs.rows)?;
        check_len(self.cols, rhs.cols)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: sub(&self.data, &rhs.data),
        })
    }

    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of [`power_iteration`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub radius: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The iterate was annihilated; `radius` is then reported as zero.
    pub collapsed: bool,
}

/// Fixed seed: all ones with a small quadratic index perturbation, so that
/// no sine mode is orthogonal to it by symmetry.
pub fn default_seed(len: usize) -> Vec<f64> {
    let len_f = len as f64;
    (1..=len)
        .map(|j| {
            let t = j as f64 / len_f;
            1.0 + 0.1 * t * t
        })
        .collect()
}

/// Estimates the spectral radius of `m` from normalized repeated products.
///
/// Stops when two successive estimates of `‖Mx‖₂ / ‖x‖₂` differ by less than
/// `tol`. Convergence is only geometric in the ratio of the two largest
/// eigenvalue magnitudes, so `tol` should be set well below the accuracy
/// wanted from the estimate.
pub fn power_iteration(
    m: &DenseMatrix,
    seed: &[f64],
    max_iters: usize,
    tol: f64,
) -> Result<PowerIteration> {
    check_len(m.rows(), m.cols())?;
    check_len(m.cols(), seed.len())?;
    let seed_norm = norm2(seed);
    if seed_norm == 0.0 {
        return Err(Error::ZeroSeed);
    }
    let mut x = scaled(1.0 / seed_norm, seed);
    let mut previous = f64::INFINITY;
    for it in 1..=max_iters {
        let y = m.matvec(&x)?;
        let ratio = norm2(&y);
        if ratio <= COLLAPSE_RATIO {
            return Ok(PowerIteration {
                radius: 0.0,
                iterations: it,
                converged: true,
                collapsed: true,
            });
        }
        if (ratio - previous).abs() < tol {
            return Ok(PowerIteration {
                radius: ratio,
                iterations: it,
                converged: true,
                collapsed: false,
            });
        }
        previous = ratio;
        x = scaled(1.0 / ratio, &y);
    }
    Ok(PowerIteration {
        radius: previous,
        iterations: max_iters,
        converged: false,
        collapsed: false,
    })
}
