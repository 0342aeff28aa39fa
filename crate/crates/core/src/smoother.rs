//! Weighted-Jacobi smoothing with an ordered schedule of weights.
//!
//! A sweep with weight `ω` is `x ← (I - ω D⁻¹ A) x + ω D⁻¹ f`. A schedule
//! `(ω₁, ..., ω_m)` applies `ω₁` first. Weights are not restricted to the
//! convergent range; `(1, 1/2)` relies on that.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::discretization::Grid1D;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Tridiagonal};

/// Ordered, non-empty list of finite Jacobi weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule(Vec<f64>);

impl WeightSchedule {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSchedule("at least one weight is required"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidSchedule("weights must be finite"));
        }
        Ok(Self(weights))
    }

    pub fn single(omega: f64) -> Result<Self> {
        Self::new(alloc::vec![omega])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Eigenvalue of the schedule's iteration matrix on a mode with
    /// `sin²(kπh/2) = s2`.
    pub fn damping(&self, s2: f64) -> f64 {
        self.0.iter().map(|w| 1.0 - 2.0 * w * s2).product()
    }
}

impl fmt::Display for WeightSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Parses comma-separated decimals; `p/q` rational literals are accepted
/// and evaluated in double precision.
impl FromStr for WeightSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|tok| parse_weight(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }
}

fn parse_weight(tok: &str) -> Result<f64> {
    const BAD: Error = Error::InvalidSchedule("weights must be decimals or p/q");
    match tok.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| BAD)?;
            let den: f64 = den.trim().parse().map_err(|_| BAD)?;
            if den == 0.0 {
                return Err(Error::InvalidSchedule("zero denominator"));
            }
            Ok(num / den)
        }
        None => tok.parse().map_err(|_| BAD),
    }
}

fn inverse_diagonal(a: &Tridiagonal) -> Result<Vec<f64>> {
    a.diag()
        .iter()
        .enumerate()
        .map(|(row, &d)| {
            if d == 0.0 {
                Err(Error::SingularDiagonal { row })
            } else {
                Ok(1.0 / d)
            }
        })
        .collect()
}

/// One simultaneous weighted-Jacobi update.
pub fn jacobi_sweep(a: &Tridiagonal, x: &[f64], f: &[f64], omega: f64) -> Result<Vec<f64>> {
    let inv_d = inverse_diagonal(a)?;
    let r = a.residual(x, f)?;
    Ok(x.iter()
        .zip(&r)
        .zip(&inv_d)
        .map(|((xi, ri), di)| xi + omega * di * ri)
        .collect())
}

/// Applies the schedule's sweeps in order.
pub fn apply_schedule(
    a: &Tridiagonal,
    x: &[f64],
    f: &[f64],
    schedule: &WeightSchedule,
) -> Result<Vec<f64>> {
    let mut x = x.to_vec();
    for &omega in schedule.weights() {
        x = jacobi_sweep(a, &x, f, omega)?;
    }
    Ok(x)
}

/// `∏ᵢ (1 - 2ωᵢ sin²(kπh/2))`, the eigenvalue of the schedule on `v_k`.
pub fn smoother_eigenvalue(grid: &Grid1D, k: usize, schedule: &WeightSchedule) -> Result<f64> {
    grid.check_mode(k)?;
    Ok(schedule.damping(grid.sin_sq(k)))
}

/// `I - ω D⁻¹ A` as a dense matrix.
pub fn jacobi_iteration_matrix(a: &Tridiagonal, omega: f64) -> Result<DenseMatrix> {
    let inv_d = inverse_diagonal(a)?;
    let n = a.dim();
    let mut m = DenseMatrix::identity(n);
    for i in 0..n {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        for j in lo..=hi {
            m[(i, j)] -= omega * inv_d[i] * a.get(i, j);
        }
    }
    Ok(m)
}

/// Product of the per-sweep iteration matrices, composed in sweep order so
/// that its action equals [`apply_schedule`] with `f = 0`. For a constant
/// diagonal the factors commute.
pub fn smoother_iteration_matrix(
    a: &Tridiagonal,
    schedule: &WeightSchedule,
) -> Result<DenseMatrix> {
    let mut product = DenseMatrix::identity(a.dim());
    for &omega in schedule.weights() {
        product = jacobi_iteration_matrix(a, omega)?.matmul(&product)?;
    }
    Ok(product)
}

/// `3(sin⁴x + cos⁴x) - 2(sin⁶x + cos⁶x)`, identically one.
pub fn lemma1_identity(x: f64) -> f64 {
    let s = libm::sin(x);
    let c = libm::cos(x);
    let (s2, c2) = (s * s, c * c);
    3.0 * (s2 * s2 + c2 * c2) - 2.0 * (s2 * s2 * s2 + c2 * c2 * c2)
}
