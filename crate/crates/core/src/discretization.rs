//! Central-difference discretization of `-u'' = f` on `(0, 1)` with
//! homogeneous Dirichlet data, and the sine eigenpairs of the stiffness
//! matrix.
//!
//! Unknowns live at the interior nodes `x_j = j h`, `j = 1..=n-2`; boundary
//! values are zero and never stored. Mode indices `k` are 1-based.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Tridiagonal;

/// Uniform grid on `[0, 1]` with `n` points including both boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid1D {
    n: usize,
}

impl Grid1D {
    /// Accepts odd `n >= 5`, the smallest grid that still has a coarse level.
    pub fn new(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidGrid {
                n,
                reason: "point count must be odd",
            });
        }
        if n < 5 {
            return Err(Error::InvalidGrid {
                n,
                reason: "at least 5 points are needed for a coarse level",
            });
        }
        Ok(Self { n })
    }

    /// Next coarser grid with `(n + 1) / 2` points, i.e. spacing `2h`.
    ///
    /// The result may be the 3-point grid with a single unknown, which only
    /// ever appears as the coarsest multigrid level.
    pub fn coarsen(&self) -> Option<Grid1D> {
        if self.n % 2 == 1 && self.n >= 5 {
            Some(Grid1D {
                n: self.n.div_ceil(2),
            })
        } else {
            None
        }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    /// Number of unknowns, `n - 2`.
    pub fn interior_len(&self) -> usize {
        self.n - 2
    }

    /// Number of coarse unknowns, `(n - 3) / 2`.
    pub fn coarse_len(&self) -> usize {
        (self.n - 3) / 2
    }

    /// The self-complementary mode `(n - 1) / 2`, where `sin² = cos² = 1/2`.
    pub fn middle_mode(&self) -> usize {
        (self.n - 1) / 2
    }

    /// Partner `n - 1 - k` of mode `k`.
    pub fn complement(&self, k: usize) -> usize {
        self.n - 1 - k
    }

    /// Whether `n - 1` is a power of two, so coarsening reaches one unknown.
    pub fn is_fully_coarsenable(&self) -> bool {
        (self.n - 1).is_power_of_two()
    }

    /// Interior node coordinates `x_1, ..., x_{n-2}`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.interior_len()).map(|j| j as f64 * h).collect()
    }

    pub(crate) fn check_mode(&self, k: usize) -> Result<()> {
        check_range(k, 1, self.interior_len())
    }

    /// `sin²(kπh/2)` for mode `k`.
    pub fn sin_sq(&self, k: usize) -> f64 {
        let s = libm::sin(k as f64 * PI / (2 * (self.n - 1)) as f64);
        s * s
    }

    /// `cos²(kπh/2)` for mode `k`.
    pub fn cos_sq(&self, k: usize) -> f64 {
        let c = libm::cos(k as f64 * PI / (2 * (self.n - 1)) as f64);
        c * c
    }
}

pub(crate) fn check_range(k: usize, min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&k) {
        Ok(())
    } else {
        Err(Error::ModeOutOfRange { k, min, max })
    }
}

/// `A = (1/h²) tridiag(-1, 2, -1)` of size `(n-2) x (n-2)`.
pub fn stiffness(grid: &Grid1D) -> Tridiagonal {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    Tridiagonal::constant(grid.interior_len(), -inv_h2, 2.0 * inv_h2, -inv_h2)
        .expect("grid has at least one unknown")
}

/// Sine mode `v_k` with entries `sin(jkπ/(n-1))`, `j = 1..=n-2`.
pub fn eigenvector(grid: &Grid1D, k: usize) -> Result<Vec<f64>> {
    grid.check_mode(k)?;
    Ok(sine_mode(grid.interior_len(), grid.points() - 1, k))
}

/// Entries `sin(j k π / intervals)` for `j = 1..=len`.
pub(crate) fn sine_mode(len: usize, intervals: usize, k: usize) -> Vec<f64> {
    let step = k as f64 * PI / intervals as f64;
    (1..=len).map(|j| libm::sin(j as f64 * step)).collect()
}

/// `λ_k(A) = (4/h²) sin²(kπ/(2(n-1)))`.
pub fn eigenvalue(grid: &Grid1D, k: usize) -> Result<f64> {
    grid.check_mode(k)?;
    let h = grid.spacing();
    Ok(4.0 / (h * h) * grid.sin_sq(k))
}

/// Sampled right-hand side and optional reference solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonProblem {
    pub grid: Grid1D,
    pub rhs: Vec<f64>,
    pub exact: Option<Vec<f64>>,
}

impl PoissonProblem {
    /// Samples `f` at the interior nodes.
    pub fn sample<F: FnMut(f64) -> f64>(grid: Grid1D, f: F) -> Self {
        let rhs = grid.interior_nodes().into_iter().map(f).collect();
        Self {
            grid,
            rhs,
            exact: None,
        }
    }

    /// Attaches nodal values of a known continuous solution.
    pub fn with_exact<G: Fn(f64) -> f64>(mut self, u: G) -> Self {
        self.exact = Some(self.grid.interior_nodes().into_iter().map(u).collect());
        self
    }

    pub fn from_rhs(grid: Grid1D, rhs: Vec<f64>) -> Result<Self> {
        if rhs.len() != grid.interior_len() {
            return Err(Error::Dimension {
                expected: grid.interior_len(),
                found: rhs.len(),
            });
        }
        Ok(Self {
            grid,
            rhs,
            exact: None,
        })
    }

    pub fn stiffness(&self) -> Tridiagonal {
        stiffness(&self.grid)
    }

    /// Direct tridiagonal solve of the discrete system.
    pub fn direct_solution(&self) -> Result<Vec<f64>> {
        self.stiffness().solve(&self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(5).is_ok());
        assert!(matches!(
            Grid1D::new(3),
            Err(Error::InvalidGrid { n: 3, .. })
        ));
        assert!(matches!(
            Grid1D::new(6),
            Err(Error::InvalidGrid { n: 6, .. })
        ));
        let g = Grid1D::new(9).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert_eq!(g.interior_len(), 7);
        assert_eq!(g.coarse_len(), 3);
        assert_eq!(g.coarsen().unwrap().points(), 5);
        assert_eq!(Grid1D::new(5).unwrap().coarsen().unwrap().points(), 3);
        assert!(g.is_fully_coarsenable());
        assert!(!Grid1D::new(7).unwrap().is_fully_coarsenable());
    }

    #[test]
    fn stiffness_entries() {
        let a = stiffness(&Grid1D::new(5).unwrap());
        assert_eq!(a.diag(), &[32.0, 32.0, 32.0]);
        assert_eq!(a.sub(), &[-16.0, -16.0]);
        assert!(a.is_symmetric());

        let a9 = stiffness(&Grid1D::new(9).unwrap());
        assert!(a9.diag().iter().all(|&d| d == 128.0));
        assert!(a9.sup().iter().all(|&d| d == -64.0));
    }

    #[test]
    fn sine_modes_n5() {
        let g = Grid1D::new(5).unwrap();
        let v2 = eigenvector(&g, 2).unwrap();
        assert_abs_diff_eq!(v2[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v2[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v2[2], -1.0, epsilon = 1e-15);
        let v1 = eigenvector(&g, 1).unwrap();
        assert_abs_diff_eq!(v1[0], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(v1[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v1[2], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(eigenvector(&g, 0).is_err());
        assert_eq!(
            eigenvector(&g, 4),
            Err(Error::ModeOutOfRange {
                k: 4,
                min: 1,
                max: 3
            })
        );
    }

    #[test]
    fn eigenvalues_n5() {
        let g = Grid1D::new(5).unwrap();
        assert_abs_diff_eq!(eigenvalue(&g, 2).unwrap(), 32.0, epsilon = 1e-12);
        // 64 (1 - cos(π/4)) / 2
        let oracle = 64.0 * (1.0 - FRAC_1_SQRT_2) / 2.0;
        assert_abs_diff_eq!(eigenvalue(&g, 1).unwrap(), oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(oracle, 9.372583002030478, epsilon = 1e-12);
        let pair = eigenvalue(&g, 1).unwrap() + eigenvalue(&g, 3).unwrap();
        assert_abs_diff_eq!(pair, 64.0, epsilon = 1e-12);
    }

    #[test]
    fn complement_eigenvalue_is_cosine_form() {
        let g = Grid1D::new(17).unwrap();
        let h = g.spacing();
        for k in 1..=g.interior_len() {
            let lhs = eigenvalue(&g, g.complement(k)).unwrap();
            let rhs = 4.0 / (h * h) * g.cos_sq(k);
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn problem_sampling() {
        let g = Grid1D::new(5).unwrap();
        let p = PoissonProblem::sample(g, |_| 1.0);
        assert_eq!(p.rhs, alloc::vec![1.0, 1.0, 1.0]);
        let zero = PoissonProblem::sample(g, |_| 0.0);
        assert!(zero.direct_solution().unwrap().iter().all(|&u| u == 0.0));
        assert!(PoissonProblem::from_rhs(g, alloc::vec![1.0]).is_err());
    }
}
