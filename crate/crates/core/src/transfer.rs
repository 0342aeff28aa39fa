//! Linear interpolation, its transpose, and the Galerkin coarse operator.
//!
//! Coarse unknown `J` (1-based) sits on fine node `2J`. Both transfers are
//! applied as stencil sweeps; `to_dense` materializes them for checks.

use alloc::vec;
use alloc::vec::Vec;

use crate::discretization::{check_range, eigenvalue, sine_mode, Grid1D};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Tridiagonal};

const STENCIL: [f64; 3] = [0.5, 1.0, 0.5];

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// Linear interpolation from `coarse_dim` to `2 * coarse_dim + 1` unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prolongation {
    coarse_dim: usize,
}

/// Full weighting without the usual `1/2` scaling: the exact transpose of
/// [`Prolongation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Restriction {
    coarse_dim: usize,
}

impl Prolongation {
    pub fn new(coarse_dim: usize) -> Result<Self> {
        if coarse_dim == 0 {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { coarse_dim })
    }

    pub fn for_grid(grid: &Grid1D) -> Self {
        Self {
            coarse_dim: grid.coarse_len(),
        }
    }

    /// Prolongation with `fine_dim` rows; `fine_dim` must be odd.
    pub fn for_fine_dim(fine_dim: usize) -> Result<Self> {
        if fine_dim < 3 || fine_dim.is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: 2 * (fine_dim / 2).max(1) + 1,
                found: fine_dim,
            });
        }
        Self::new((fine_dim - 1) / 2)
    }

    pub fn coarse_dim(&self) -> usize {
        self.coarse_dim
    }

    pub fn fine_dim(&self) -> usize {
        2 * self.coarse_dim + 1
    }

    pub fn transpose(&self) -> Restriction {
        Restriction {
            coarse_dim: self.coarse_dim,
        }
    }

    pub fn apply(&self, coarse: &[f64]) -> Result<Vec<f64>> {
        check_len(self.coarse_dim, coarse.len())?;
        let mut fine = vec![0.0; self.fine_dim()];
        for (c, &value) in coarse.iter().enumerate() {
            fine[2 * c] += 0.5 * value;
            fine[2 * c + 1] = value;
            fine[2 * c + 2] += 0.5 * value;
        }
        Ok(fine)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut p = DenseMatrix::zeros(self.fine_dim(), self.coarse_dim);
        for c in 0..self.coarse_dim {
            for (offset, w) in STENCIL.iter().enumerate() {
                p[(2 * c + offset, c)] = *w;
            }
        }
        p
    }
}

impl Restriction {
    pub fn coarse_dim(&self) -> usize {
        self.coarse_dim
    }

    pub fn fine_dim(&self) -> usize {
        2 * self.coarse_dim + 1
    }

    pub fn transpose(&self) -> Prolongation {
        Prolongation {
            coarse_dim: self.coarse_dim,
        }
    }

    /// Each coarse value is `(left + 2 center + right) / 2`.
    pub fn apply(&self, fine: &[f64]) -> Result<Vec<f64>> {
        check_len(self.fine_dim(), fine.len())?;
        Ok((0..self.coarse_dim)
            .map(|c| 0.5 * fine[2 * c] + fine[2 * c + 1] + 0.5 * fine[2 * c + 2])
            .collect())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.transpose().to_dense().transpose()
    }
}

/// Coarse sine mode `v_k^{2h}` with entries `sin(2jkπ/(n-1))`,
/// `j = 1..=(n-3)/2`.
pub fn coarse_eigenvector(grid: &Grid1D, k: usize) -> Result<Vec<f64>> {
    check_range(k, 1, grid.coarse_len())?;
    Ok(sine_mode(grid.coarse_len(), grid.middle_mode(), k))
}

/// Galerkin product `Pᵀ A P` computed entrywise from the stencils.
///
/// The product of tridiagonal `A` with the 3-point transfers is again
/// tridiagonal: coarse unknowns two apart have fine supports at least two
/// nodes apart.
pub fn galerkin_coarse(fine: &Tridiagonal, p: &Prolongation) -> Result<Tridiagonal> {
    check_len(p.fine_dim(), fine.dim())?;
    let m = p.coarse_dim();
    let entry = |row: usize, col: usize| -> f64 {
        let mut acc = 0.0;
        for (a, wa) in STENCIL.iter().enumerate() {
            for (b, wb) in STENCIL.iter().enumerate() {
                acc += wa * wb * fine.get(2 * row + a, 2 * col + b);
            }
        }
        acc
    };
    let diag = (0..m).map(|i| entry(i, i)).collect();
    let sub = (1..m).map(|i| entry(i, i - 1)).collect();
    let sup = (1..m).map(|i| entry(i - 1, i)).collect();
    Tridiagonal::new(sub, diag, sup)
}

/// Eigenvalue of the Galerkin operator on `v_k^{2h}`, assembled from the
/// fine spectrum: `2 λ_k cos⁴(kπh/2) + 2 λ_{n-1-k} sin⁴(kπh/2)`.
pub fn coarse_eigenvalue(grid: &Grid1D, k: usize) -> Result<f64> {
    check_range(k, 1, grid.coarse_len())?;
    let (s2, c2) = (grid.sin_sq(k), grid.cos_sq(k));
    let low = eigenvalue(grid, k)?;
    let high = eigenvalue(grid, grid.complement(k))?;
    Ok(2.0 * low * c2 * c2 + 2.0 * high * s2 * s2)
}

/// Reduced form of [`coarse_eigenvalue`]: `(2/h²) sin²(kπh)`.
pub fn coarse_eigenvalue_reduced(grid: &Grid1D, k: usize) -> Result<f64> {
    check_range(k, 1, grid.coarse_len())?;
    let h = grid.spacing();
    let s = libm::sin(k as f64 * core::f64::consts::PI * h);
    Ok(2.0 / (h * h) * s * s)
}
