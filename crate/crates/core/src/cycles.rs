//! Two-grid and V-cycle iterations with pre-smoothing only.
//!
//! Each cycle on a level: smooth with the schedule, restrict the residual,
//! correct from the next level started at zero, prolong and add. The
//! coarsest level is solved directly. There is no post-smoothing.

use alloc::vec;
use alloc::vec::Vec;

use crate::discretization::{stiffness, Grid1D, PoissonProblem};
use crate::error::{Error, Result};
use crate::linalg::{axpy, norm_inf, sub, Tridiagonal};
use crate::smoother::{apply_schedule, WeightSchedule};
use crate::transfer::{galerkin_coarse, Prolongation, Restriction};

/// One level of a [`Hierarchy`].
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub grid: Grid1D,
    pub matrix: Tridiagonal,
    /// Interpolation from the next coarser level; `None` on the coarsest.
    pub prolongation: Option<Prolongation>,
}

impl Level {
    pub fn restriction(&self) -> Option<Restriction> {
        self.prolongation.map(|p| p.transpose())
    }
}

/// Requested number of levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    /// Coarsen as long as the grid allows; one coarsest unknown when
    /// `n - 1` is a power of two.
    Auto,
    Levels(usize),
}

/// Galerkin operator chain, finest level first. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    levels: Vec<Level>,
}

impl Hierarchy {
    pub fn build(grid: Grid1D, depth: Depth) -> Result<Self> {
        let mut grids = vec![grid];
        while let Some(coarse) = grids.last().and_then(Grid1D::coarsen) {
            grids.push(coarse);
        }
        let count = match depth {
            Depth::Auto => grids.len(),
            Depth::Levels(d) if d >= 1 && d <= grids.len() => d,
            Depth::Levels(d) => {
                return Err(Error::Coarsening {
                    n: grid.points(),
                    depth: d,
                })
            }
        };
        grids.truncate(count);

        let mut levels: Vec<Level> = Vec::with_capacity(count);
        let mut matrix = stiffness(&grid);
        for (i, g) in grids.iter().enumerate() {
            let prolongation = (i + 1 < count).then(|| Prolongation::for_grid(g));
            let next = match &prolongation {
                Some(p) => Some(galerkin_coarse(&matrix, p)?),
                None => None,
            };
            levels.push(Level {
                grid: *g,
                matrix,
                prolongation,
            });
            match next {
                Some(m) => matrix = m,
                None => break,
            }
        }
        Ok(Self { levels })
    }

    /// Fine level plus one directly solved coarse level.
    pub fn two_level(grid: Grid1D) -> Result<Self> {
        Self::build(grid, Depth::Levels(2))
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn finest(&self) -> &Level {
        &self.levels[0]
    }

    /// Unknown counts per level, finest first.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.matrix.dim()).collect()
    }

    fn cycle_at(
        &self,
        index: usize,
        u: &[f64],
        f: &[f64],
        schedule: &WeightSchedule,
    ) -> Result<Vec<f64>> {
        let level = &self.levels[index];
        let Some(p) = level.prolongation else {
            return level.matrix.solve(f);
        };
        let mut u = apply_schedule(&level.matrix, u, f, schedule)?;
        let residual = level.matrix.residual(&u, f)?;
        let coarse_rhs = p.transpose().apply(&residual)?;
        let coarse_zero = vec![0.0; coarse_rhs.len()];
        let correction = self.cycle_at(index + 1, &coarse_zero, &coarse_rhs, schedule)?;
        axpy(1.0, &p.apply(&correction)?, &mut u);
        Ok(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoarseSolver {
    #[default]
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoGridConfig {
    pub schedule: WeightSchedule,
    pub coarse_solver: CoarseSolver,
}

impl TwoGridConfig {
    pub fn new(schedule: WeightSchedule) -> Self {
        Self {
            schedule,
            coarse_solver: CoarseSolver::Direct,
        }
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// One two-grid iteration; its error propagator is
/// `(I - P (Pᵀ A P)⁻¹ Pᵀ A) S`.
pub fn two_grid_cycle(
    hierarchy: &Hierarchy,
    u: &[f64],
    f: &[f64],
    config: &TwoGridConfig,
) -> Result<Vec<f64>> {
    if hierarchy.len() != 2 {
        return Err(Error::NotTwoLevel(hierarchy.len()));
    }
    v_cycle(hierarchy, u, f, &config.schedule)
}

/// One V-cycle over the whole hierarchy.
pub fn v_cycle(
    hierarchy: &Hierarchy,
    u: &[f64],
    f: &[f64],
    schedule: &WeightSchedule,
) -> Result<Vec<f64>> {
    let dim = hierarchy.finest().matrix.dim();
    check_len(dim, u.len())?;
    check_len(dim, f.len())?;
    hierarchy.cycle_at(0, u, f, schedule)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub cycles: usize,
    /// `‖f - A u‖_∞` before the first cycle and after each cycle.
    pub residual_history: Vec<f64>,
    /// Final residual relative to `‖f‖_∞` (absolute when `f = 0`).
    pub relative_residual: f64,
    pub converged: bool,
    /// `‖u - u_exact‖_∞` when the problem carries a reference solution.
    pub final_error: Option<f64>,
}

/// Runs V-cycles from a zero initial guess until the relative residual
/// drops to `tol` or `max_cycles` is reached. On non-convergence the
/// iterate with the smallest residual is returned and `converged` is false.
pub fn solve(
    problem: &PoissonProblem,
    schedule: &WeightSchedule,
    tol: f64,
    max_cycles: usize,
) -> Result<(Vec<f64>, SolveReport)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let hierarchy = Hierarchy::build(problem.grid, Depth::Auto)?;
    let a = &hierarchy.finest().matrix;
    let f = &problem.rhs;
    check_len(a.dim(), f.len())?;
    let scale = match norm_inf(f) {
        s if s > 0.0 => s,
        _ => 1.0,
    };

    let mut u = vec![0.0; f.len()];
    let mut residual = norm_inf(&a.residual(&u, f)?);
    let mut history = vec![residual];
    let mut best = (residual, u.clone());
    let mut cycles = 0;
    while residual / scale > tol && cycles < max_cycles {
        u = v_cycle(&hierarchy, &u, f, schedule)?;
        residual = norm_inf(&a.residual(&u, f)?);
        history.push(residual);
        cycles += 1;
        if residual < best.0 {
            best = (residual, u.clone());
        }
    }
    let converged = residual / scale <= tol;
    let (best_residual, u) = if converged { (residual, u) } else { best };
    let final_error = problem
        .exact
        .as_ref()
        .map(|exact| norm_inf(&sub(&u, exact)));
    Ok((
        u,
        SolveReport {
            cycles,
            residual_history: history,
            relative_residual: best_residual / scale,
            converged,
            final_error,
        },
    ))
}
