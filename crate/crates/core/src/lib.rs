//! Two-grid and multigrid analysis of the 1D Poisson problem.
//!
//! The model problem is `-u'' = f` on `(0, 1)` with homogeneous Dirichlet
//! data, discretized by central differences on `n` (odd) uniform points.
//! Smoothing is weighted Jacobi applied with an ordered schedule of weights;
//! coarse operators are Galerkin products with linear interpolation and its
//! transpose. With the schedule `(1, 1/2)` every two-grid eigenvalue is zero;
//! the propagator is nilpotent of index two rather than the zero matrix.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod cycles;
pub mod discretization;
mod error;
pub mod linalg;
pub mod smoother;
pub mod spectral;
pub mod transfer;

pub use cycles::{
    solve, two_grid_cycle, v_cycle, Depth, Hierarchy, Level, SolveReport, TwoGridConfig,
};
pub use discretization::{Grid1D, PoissonProblem};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, PowerIteration, Tridiagonal};
pub use smoother::WeightSchedule;
pub use spectral::{Branch, ErrorModeDecomposition, SpectrumReport, TwoGridEigenpair};
pub use transfer::{Prolongation, Restriction};
