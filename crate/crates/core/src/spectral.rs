//! Closed-form spectrum of the two-grid error propagator and its checks.
//!
//! Modes pair up as `(k, n-1-k)`. On each pair the propagator
//! `R = (I - P (Pᵀ A P)⁻¹ Pᵀ A) S` has rank one: with `s² = sin²(kπh/2)`,
//! `c² = cos²(kπh/2)` and smoother eigenvalues `σ`, it maps
//! `α v_k + β v_{n-1-k}` to `(α σ_k s² + β σ_{n-1-k} c²)(v_k + v_{n-1-k})`.
//! Hence the eigenvector `v_k + v_{n-1-k}` with eigenvalue
//! `σ_k s² + σ_{n-1-k} c²`, and a null vector `v_k + c₂ v_{n-1-k}`.
//!
//! When the pair eigenvalue is itself zero both vectors coincide and the
//! pair is a nilpotent Jordan block: `R ≠ 0` there but `R² = 0`. This is
//! what the schedule `(1, 1/2)` produces on every pair.

use alloc::vec;
use alloc::vec::Vec;

use crate::discretization::check_range;
use crate::discretization::{eigenvalue, eigenvector, stiffness, Grid1D};
use crate::error::{Error, Result};
use crate::linalg::{axpy, default_seed, norm_inf, power_iteration, DenseMatrix, PowerIteration};
use crate::smoother::{smoother_eigenvalue, smoother_iteration_matrix, WeightSchedule};
use crate::transfer::{galerkin_coarse, Prolongation};

/// Tolerance used to mark a [`SpectrumReport`] as verified.
pub const VERIFY_TOL: f64 = 1e-10;

/// `|1 - c₁ c₂|` below which the pair basis `{b_k, b_{n-1-k}}` is treated as
/// collapsed.
pub const DEFECTIVE_TOL: f64 = 1e-10;

/// Smallest magnitude of the complementary smoother eigenvalue for which
/// `c₂` is considered defined.
const DEGENERATE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `1 <= k <= (n-1)/2`
    Low,
    /// `(n-1)/2 < k <= n-2`
    High,
}

impl Branch {
    pub fn of(grid: &Grid1D, k: usize) -> Self {
        if k <= grid.middle_mode() {
            Branch::Low
        } else {
            Branch::High
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Low => "low",
            Branch::High => "high",
        }
    }
}

/// `c₁ = cos²(kπh/2) λ_k(A) / (sin²(kπh/2) λ_{n-1-k}(A))`, equal to one for
/// the Poisson stiffness matrix.
pub fn c1(grid: &Grid1D, k: usize) -> Result<f64> {
    check_range(k, 1, grid.middle_mode())?;
    let num = grid.cos_sq(k) * eigenvalue(grid, k)?;
    let den = grid.sin_sq(k) * eigenvalue(grid, grid.complement(k))?;
    Ok(num / den)
}

/// `c₂ = -sin²(kπh/2) σ_k / (cos²(kπh/2) σ_{n-1-k})`.
///
/// Fails with [`Error::DefectiveBasis`] when `σ_{n-1-k}` vanishes.
pub fn c2(grid: &Grid1D, k: usize, schedule: &WeightSchedule) -> Result<f64> {
    grid.check_mode(k)?;
    let sigma = smoother_eigenvalue(grid, k, schedule)?;
    let sigma_comp = smoother_eigenvalue(grid, grid.complement(k), schedule)?;
    if sigma_comp.abs() <= DEGENERATE_TOL {
        return Err(Error::DefectiveBasis { k });
    }
    Ok(-grid.sin_sq(k) * sigma / (grid.cos_sq(k) * sigma_comp))
}

/// Eigenvalue of the two-grid propagator belonging to `b_k`:
/// `σ_k sin²(kπh/2) + σ_{n-1-k} cos²(kπh/2)` on the low branch, zero on
/// the high branch.
pub fn twogrid_eigenvalue(grid: &Grid1D, k: usize, schedule: &WeightSchedule) -> Result<f64> {
    grid.check_mode(k)?;
    if Branch::of(grid, k) == Branch::High {
        return Ok(0.0);
    }
    let sigma = smoother_eigenvalue(grid, k, schedule)?;
    let sigma_comp = smoother_eigenvalue(grid, grid.complement(k), schedule)?;
    let value = sigma * grid.sin_sq(k) + sigma_comp * grid.cos_sq(k);
    if let [w1, w2] = schedule.weights() {
        debug_assert!((value - two_weight_expansion(grid, k, *w1, *w2)).abs() <= 1e-12);
    }
    Ok(value)
}

/// Low-branch eigenvalue before the Poisson-specific reduction:
/// `2 (sin⁴ λ_{n-1-k} σ_k + cos⁴ λ_k σ_{n-1-k}) / μ_k` with `μ_k` the
/// Galerkin eigenvalue. Defined for `1 <= k <= (n-3)/2`.
pub fn twogrid_eigenvalue_unreduced(
    grid: &Grid1D,
    k: usize,
    schedule: &WeightSchedule,
) -> Result<f64> {
    check_range(k, 1, grid.coarse_len())?;
    let (s2, c2) = (grid.sin_sq(k), grid.cos_sq(k));
    let lam = eigenvalue(grid, k)?;
    let lam_comp = eigenvalue(grid, grid.complement(k))?;
    let sigma = smoother_eigenvalue(grid, k, schedule)?;
    let sigma_comp = smoother_eigenvalue(grid, grid.complement(k), schedule)?;
    let mu = crate::transfer::coarse_eigenvalue(grid, k)?;
    Ok(2.0 * (s2 * s2 * lam_comp * sigma + c2 * c2 * lam * sigma_comp) / mu)
}

/// Two-sweep expansion
/// `1 - 2(ω₁+ω₂)(sin⁴+cos⁴) + 4ω₁ω₂(sin⁶+cos⁶)` of the low-branch eigenvalue.
pub fn two_weight_expansion(grid: &Grid1D, k: usize, w1: f64, w2: f64) -> f64 {
    let (s2, c2) = (grid.sin_sq(k), grid.cos_sq(k));
    let quartic = s2 * s2 + c2 * c2;
    let sextic = s2 * s2 * s2 + c2 * c2 * c2;
    1.0 - 2.0 * (w1 + w2) * quartic + 4.0 * w1 * w2 * sextic
}

/// `b_k = v_k + c₁ v_{n-1-k}` (low branch) or `v_k + c₂ v_{n-1-k}` (high).
pub fn twogrid_eigenvector(grid: &Grid1D, k: usize, schedule: &WeightSchedule) -> Result<Vec<f64>> {
    grid.check_mode(k)?;
    let coeff = match Branch::of(grid, k) {
        Branch::Low => c1(grid, k)?,
        Branch::High => c2(grid, k, schedule)?,
    };
    let mut b = eigenvector(grid, k)?;
    axpy(coeff, &eigenvector(grid, grid.complement(k))?, &mut b);
    Ok(b)
}

/// Dense inverse of the Galerkin coarse matrix times `Pᵀ A`, assembled as
/// `R = (I - P A_c⁻¹ Pᵀ A) S`.
pub fn assemble_twogrid_matrix(grid: &Grid1D, schedule: &WeightSchedule) -> Result<DenseMatrix> {
    let a = stiffness(grid);
    let p = Prolongation::for_grid(grid);
    let coarse = galerkin_coarse(&a, &p)?;
    let m = coarse.dim();
    let inverse_columns = (0..m)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            coarse.solve(&e)
        })
        .collect::<Result<Vec<_>>>()?;
    let coarse_inv = DenseMatrix::from_columns(m, &inverse_columns)?;
    let p_dense = p.to_dense();
    let r_dense = p.transpose().to_dense();
    let correction = p_dense
        .matmul(&coarse_inv)?
        .matmul(&r_dense)?
        .matmul(&a.to_dense())?;
    let cgc = DenseMatrix::identity(a.dim()).sub(&correction)?;
    cgc.matmul(&smoother_iteration_matrix(&a, schedule)?)
}

/// Closed-form spectral radius and the smallest mode attaining it.
pub fn spectral_radius_closed_form(
    grid: &Grid1D,
    schedule: &WeightSchedule,
) -> Result<(f64, usize)> {
    let mut best = (0.0_f64, 1_usize);
    for k in 1..=grid.interior_len() {
        let value = twogrid_eigenvalue(grid, k, schedule)?.abs();
        let tie = 4.0 * f64::EPSILON * best.0.max(1.0);
        if value > best.0 + tie {
            best = (value, k);
        }
    }
    Ok(best)
}

/// Weight equalizing `1 - 2ω M` and `-(1 - 2ω m)`, where `M` and `m` are the
/// largest and smallest values of `sin⁴ + cos⁴` over the low branch.
pub fn equioscillation_weight(max_quartic: f64, min_quartic: f64) -> f64 {
    1.0 / (max_quartic + min_quartic)
}

/// Single-sweep weight with the quartic sum idealized to span `[1/2, 1]`.
pub fn optimal_single_weight() -> f64 {
    equioscillation_weight(1.0, 0.5)
}

/// Brute-force minimization of the closed-form radius over single weights
/// `ω = i * step`, `i = 1..`, up to `max`. Ties keep the smaller weight.
pub fn sweep_single_weight(grid: &Grid1D, step: f64, max: f64) -> Result<(f64, f64)> {
    if step.is_nan() || max.is_nan() || step <= 0.0 || max < step {
        return Err(Error::InvalidParameter("sweep needs 0 < step <= max"));
    }
    let quartic: Vec<f64> = (1..=grid.middle_mode())
        .map(|k| {
            let (s2, c2) = (grid.sin_sq(k), grid.cos_sq(k));
            s2 * s2 + c2 * c2
        })
        .collect();
    let count = libm::floor(max / step + 1e-9) as usize;
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 1..=count {
        let omega = i as f64 * step;
        let radius = quartic
            .iter()
            .map(|q| (1.0 - 2.0 * omega * q).abs())
            .fold(0.0, f64::max);
        if radius < best.1 {
            best = (omega, radius);
        }
    }
    Ok(best)
}

/// Radius with `sin²(kπh/2)` treated as continuous on `[0, 1/2]`, endpoints
/// included: the `h → 0` value.
pub fn idealized_radius(schedule: &WeightSchedule) -> f64 {
    const SAMPLES: usize = 4096;
    (0..=SAMPLES)
        .map(|i| {
            let t = 0.5 * i as f64 / SAMPLES as f64;
            (t * schedule.damping(t) + (1.0 - t) * schedule.damping(1.0 - t)).abs()
        })
        .fold(0.0, f64::max)
}

/// One mode of the two-grid spectrum with its verification residual.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoGridEigenpair {
    pub k: usize,
    pub branch: Branch,
    pub eigenvalue: f64,
    /// `c₁` on the low branch, `c₂` on the high branch; `None` when `c₂` is
    /// undefined.
    pub c_coefficient: Option<f64>,
    /// `‖R b_k - λ_k b_k‖_∞ / ‖b_k‖_∞`; for an undefined `c₂` the residual of
    /// the null vector `v_{n-1-k}` instead.
    pub residual: f64,
    /// `b_k` and its partner fail to span the pair.
    pub defective: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub n: usize,
    pub schedule: WeightSchedule,
    pub pairs: Vec<TwoGridEigenpair>,
    pub spectral_radius: f64,
    pub argmax_k: usize,
    /// `h → 0` radius, see [`idealized_radius`].
    pub idealized_radius: f64,
    pub max_residual: f64,
    pub power_iteration: PowerIteration,
    /// Largest entry of the assembled propagator and of its square.
    pub matrix_max_abs: f64,
    pub square_max_abs: f64,
    pub verified: bool,
}

fn relative_residual(m: &DenseMatrix, v: &[f64], lambda: f64) -> Result<f64> {
    let mut r = m.matvec(v)?;
    axpy(-lambda, v, &mut r);
    Ok(norm_inf(&r) / norm_inf(v))
}

impl SpectrumReport {
    /// Closed-form spectrum cross-checked against the assembled propagator.
    pub fn build(grid: &Grid1D, schedule: &WeightSchedule) -> Result<Self> {
        let matrix = assemble_twogrid_matrix(grid, schedule)?;
        let mut pairs = Vec::with_capacity(grid.interior_len());
        for k in 1..=grid.interior_len() {
            let branch = Branch::of(grid, k);
            let eigenvalue = twogrid_eigenvalue(grid, k, schedule)?;
            let partner = grid.complement(k);
            let (c_coefficient, residual, defective) = match branch {
                Branch::Low => {
                    let b = twogrid_eigenvector(grid, k, schedule)?;
                    let c = c1(grid, k)?;
                    let defective = k != partner
                        && match c2(grid, partner, schedule) {
                            Ok(c_partner) => (1.0 - c * c_partner).abs() <= DEFECTIVE_TOL,
                            Err(_) => false,
                        };
                    (
                        Some(c),
                        relative_residual(&matrix, &b, eigenvalue)?,
                        defective,
                    )
                }
                Branch::High => match c2(grid, k, schedule) {
                    Ok(c) => {
                        let b = twogrid_eigenvector(grid, k, schedule)?;
                        let c_partner = c1(grid, partner)?;
                        let defective = (1.0 - c * c_partner).abs() <= DEFECTIVE_TOL;
                        (Some(c), relative_residual(&matrix, &b, 0.0)?, defective)
                    }
                    Err(Error::DefectiveBasis { .. }) => {
                        let v = eigenvector(grid, partner)?;
                        (None, relative_residual(&matrix, &v, 0.0)?, false)
                    }
                    Err(e) => return Err(e),
                },
            };
            pairs.push(TwoGridEigenpair {
                k,
                branch,
                eigenvalue,
                c_coefficient,
                residual,
                defective,
            });
        }

        let (spectral_radius, argmax_k) = spectral_radius_closed_form(grid, schedule)?;
        let max_residual = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
        let power = power_iteration(&matrix, &default_seed(matrix.rows()), 20_000, 1e-13)?;
        let square_max_abs = matrix.matmul(&matrix)?.max_abs();
        Ok(Self {
            n: grid.points(),
            schedule: schedule.clone(),
            pairs,
            spectral_radius,
            argmax_k,
            idealized_radius: idealized_radius(schedule),
            max_residual,
            power_iteration: power,
            matrix_max_abs: matrix.max_abs(),
            square_max_abs,
            verified: max_residual <= VERIFY_TOL,
        })
    }

    pub fn defective_modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().filter(|p| p.defective).map(|p| p.k)
    }
}

/// Coefficients of an error vector in the two-grid eigenbasis.
///
/// On a pair whose eigenvalue vanishes `b_{n-1-k}` coincides with `b_k`;
/// there the second basis vector is a generalized eigenvector `g` with
/// `R g = b_k`, and its contribution after `m` iterations follows the
/// Jordan block `[[λ, 1], [0, λ]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorModeDecomposition {
    grid: Grid1D,
    /// `d_k` for `k = 1..=n-2`, stored at index `k - 1`.
    coefficients: Vec<f64>,
    eigenvalues: Vec<f64>,
    basis: Vec<Vec<f64>>,
    /// For a generalized eigenvector, the mode whose eigenvector `R` maps
    /// it onto.
    chain: Vec<Option<usize>>,
}

impl ErrorModeDecomposition {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `d_k`, `k = 1..=(n-1)/2`.
    pub fn low_coefficients(&self) -> &[f64] {
        &self.coefficients[..self.grid.middle_mode()]
    }

    /// `d_k`, `k = (n+1)/2..=n-2`.
    pub fn high_coefficients(&self) -> &[f64] {
        &self.coefficients[self.grid.middle_mode()..]
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// High-branch modes carried by a generalized eigenvector.
    pub fn jordan_modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.chain
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| i + 1)
    }

    /// `Σ d_k b_k`.
    pub fn reconstruct(&self) -> Vec<f64> {
        self.predict(0)
    }

    /// Error after `m` two-grid iterations, `Σ d_k λ_k^m b_k` plus the
    /// Jordan terms `d m λ^{m-1} b_target` of generalized eigenvectors.
    pub fn predict(&self, m: u32) -> Vec<f64> {
        let mut e = vec![0.0; self.grid.interior_len()];
        let power = |lambda: f64, p: u32| {
            if p == 0 {
                1.0
            } else {
                libm::pow(lambda, p as f64)
            }
        };
        for (i, (d, b)) in self.coefficients.iter().zip(&self.basis).enumerate() {
            let lambda = self.eigenvalues[i];
            let weight = d * power(lambda, m);
            if weight != 0.0 {
                axpy(weight, b, &mut e);
            }
            if let (Some(target), true) = (self.chain[i], m > 0) {
                let weight = d * m as f64 * power(lambda, m - 1);
                if weight != 0.0 {
                    axpy(weight, &self.basis[target - 1], &mut e);
                }
            }
        }
        e
    }
}

/// Expands `e` in the two-grid eigenbasis. Each pair `(k, n-1-k)` is a
/// 2x2 solve in sine coordinates; the middle mode is its own partner.
///
/// Fails with [`Error::DefectiveBasis`] when `c₂` is undefined for a
/// high-branch mode.
pub fn decompose_error(
    grid: &Grid1D,
    schedule: &WeightSchedule,
    e: &[f64],
) -> Result<ErrorModeDecomposition> {
    let len = grid.interior_len();
    if e.len() != len {
        return Err(Error::Dimension {
            expected: len,
            found: e.len(),
        });
    }
    // ‖v_k‖² = (n-1)/2 for every sine mode
    let norm_sq = grid.middle_mode() as f64;
    let modes = (1..=len)
        .map(|k| eigenvector(grid, k))
        .collect::<Result<Vec<_>>>()?;
    let sine_coeffs: Vec<f64> = modes
        .iter()
        .map(|v| crate::linalg::dot(v, e) / norm_sq)
        .collect();

    let mut coefficients = vec![0.0; len];
    let mut basis = (1..=len)
        .map(|k| twogrid_eigenvector(grid, k, schedule))
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues = (1..=len)
        .map(|k| twogrid_eigenvalue(grid, k, schedule))
        .collect::<Result<Vec<_>>>()?;
    let mut chain = vec![None; len];

    let mid = grid.middle_mode();
    coefficients[mid - 1] = sine_coeffs[mid - 1] / (1.0 + c1(grid, mid)?);
    for low in 1..mid {
        let high = grid.complement(low);
        let c_low = c1(grid, low)?;
        let c_high = c2(grid, high, schedule)?;
        let (a_low, a_high) = (sine_coeffs[low - 1], sine_coeffs[high - 1]);
        let det = 1.0 - c_low * c_high;
        if det.abs() > DEFECTIVE_TOL {
            coefficients[low - 1] = (a_low - c_high * a_high) / det;
            coefficients[high - 1] = (a_high - c_low * a_low) / det;
            continue;
        }

        // R(α v_low + β v_high) = (α σ_low s² + β σ_high c²) b_low
        let alpha = smoother_eigenvalue(grid, low, schedule)? * grid.sin_sq(low);
        let beta = smoother_eigenvalue(grid, high, schedule)? * grid.cos_sq(low);
        let (g_low, g_high) = if alpha.abs() >= beta.abs() {
            (1.0 / alpha, 0.0)
        } else {
            (0.0, 1.0 / beta)
        };
        let mut g = scaled_mode(&modes[low - 1], g_low);
        axpy(g_high, &modes[high - 1], &mut g);
        basis[high - 1] = g;
        chain[high - 1] = Some(low);
        // a = d_low b_low + d_g g with b_low = v_low + c_low v_high
        let det = g_high - c_low * g_low;
        if det.abs() <= f64::EPSILON * (g_low.abs() + g_high.abs()) {
            return Err(Error::DefectiveBasis { k: high });
        }
        coefficients[high - 1] = (a_high - c_low * a_low) / det;
        coefficients[low - 1] = a_low - g_low * coefficients[high - 1];
    }

    Ok(ErrorModeDecomposition {
        grid: *grid,
        coefficients,
        eigenvalues,
        basis,
        chain,
    })
}

fn scaled_mode(v: &[f64], alpha: f64) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}
