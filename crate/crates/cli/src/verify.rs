//! Invariant suite behind `twogrid verify`.
//!
//! Transfer checks go through an injectable prolongation so that a broken
//! stencil can be fed in as a negative control.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twogrid::discretization::{eigenvalue, eigenvector, stiffness};
use twogrid::linalg::{norm_inf, sub, DenseMatrix};
use twogrid::smoother::lemma1_identity;
use twogrid::spectral::{
    assemble_twogrid_matrix, spectral_radius_closed_form, two_weight_expansion, twogrid_eigenvalue,
};
use twogrid::transfer::{coarse_eigenvalue, coarse_eigenvalue_reduced, coarse_eigenvector};
use twogrid::{
    two_grid_cycle, Grid1D, Hierarchy, Prolongation, SpectrumReport, TwoGridConfig, WeightSchedule,
};

use crate::output::num;

pub const DEFAULT_SIZES: [usize; 3] = [9, 17, 33];

pub type ProlongFn = fn(&Prolongation, &[f64]) -> twogrid::Result<Vec<f64>>;

pub fn standard_prolongation(p: &Prolongation, coarse: &[f64]) -> twogrid::Result<Vec<f64>> {
    p.apply(coarse)
}

/// Linear interpolation with the sign of the left stencil weight flipped.
pub fn faulty_prolongation(p: &Prolongation, coarse: &[f64]) -> twogrid::Result<Vec<f64>> {
    let mut fine = vec![0.0; p.fine_dim()];
    for (c, &v) in coarse.iter().enumerate() {
        fine[2 * c] -= 0.5 * v;
        fine[2 * c + 1] += v;
        fine[2 * c + 2] += 0.5 * v;
    }
    Ok(fine)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = String::new();
        writeln!(
            out,
            "{:<width$}  {:>4}  {:>21}  {:>21}  status",
            "check", "n", "max residual", "tolerance"
        )
        .unwrap();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{:<width$}  {:>4}  {:>21}  {:>21}  {status}",
                c.name,
                c.n,
                num(c.max_residual),
                num(c.tolerance)
            )
            .unwrap();
        }
        out
    }
}

fn dense_prolongation(p: &Prolongation, prolong: ProlongFn) -> twogrid::Result<DenseMatrix> {
    let columns = (0..p.coarse_dim())
        .map(|j| {
            let mut e = vec![0.0; p.coarse_dim()];
            e[j] = 1.0;
            prolong(p, &e)
        })
        .collect::<twogrid::Result<Vec<_>>>()?;
    DenseMatrix::from_columns(p.fine_dim(), &columns)
}

fn combo(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect()
}

fn sched(weights: &[f64]) -> WeightSchedule {
    WeightSchedule::new(weights.to_vec()).expect("fixed schedules are valid")
}

struct Collector {
    n: usize,
    checks: Vec<Check>,
}

impl Collector {
    fn push(&mut self, name: &'static str, max_residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name,
            n: self.n,
            max_residual,
            tolerance,
        });
    }
}

fn checks_for(
    grid: &Grid1D,
    prolong: ProlongFn,
    rng: &mut ChaCha8Rng,
) -> twogrid::Result<Vec<Check>> {
    let mut c = Collector {
        n: grid.points(),
        checks: Vec::new(),
    };
    let a = stiffness(grid);
    let len = grid.interior_len();
    let mode = |k| eigenvector(grid, k);

    let mut worst = 0.0_f64;
    for k in 1..=len {
        let v = mode(k)?;
        let lam = eigenvalue(grid, k)?;
        let r = combo(1.0, &a.matvec(&v)?, -lam, &v);
        worst = worst.max(norm_inf(&r) / (lam * norm_inf(&v)));
    }
    c.push("A v_k = lambda_k v_k", worst, 1e-10);

    let f: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    let u = a.solve(&f)?;
    c.push(
        "tridiagonal solve residual",
        norm_inf(&a.residual(&u, &f)?) / norm_inf(&f),
        1e-12,
    );

    let p = Prolongation::for_grid(grid);
    let pd = dense_prolongation(&p, prolong)?;
    let rd = pd.transpose();
    let (mut pro, mut res_low, mut res_high) = (0.0_f64, 0.0_f64, 0.0_f64);
    for k in 1..=grid.coarse_len() {
        let (s2, c2) = (grid.sin_sq(k), grid.cos_sq(k));
        let vc = coarse_eigenvector(grid, k)?;
        let low = mode(k)?;
        let high = mode(grid.complement(k))?;
        pro = pro.max(norm_inf(&sub(
            &pd.matvec(&vc)?,
            &combo(c2, &low, -s2, &high),
        )));
        res_low = res_low.max(norm_inf(&combo(1.0, &rd.matvec(&low)?, -2.0 * c2, &vc)));
        res_high = res_high.max(norm_inf(&combo(1.0, &rd.matvec(&high)?, 2.0 * s2, &vc)));
    }
    c.push("P v_k^2h = c^2 v_k - s^2 v_(n-1-k)", pro, 1e-12);
    c.push("R v_k = 2c^2 v_k^2h", res_low, 1e-12);
    c.push("R v_(n-1-k) = -2s^2 v_k^2h", res_high, 1e-12);

    let galerkin = rd.matmul(&a.to_dense())?.matmul(&pd)?;
    let coarse_grid = grid.coarsen().expect("verified grids coarsen");
    let redisc = stiffness(&coarse_grid).scale(2.0).to_dense();
    let scale = redisc.max_abs();
    c.push(
        "R A P = 2 x coarse stiffness",
        galerkin.sub(&redisc)?.max_abs() / scale,
        1e-12,
    );

    let (mut spec, mut reduced) = (0.0_f64, 0.0_f64);
    for k in 1..=grid.coarse_len() {
        let mu = coarse_eigenvalue(grid, k)?;
        let mu_reduced = coarse_eigenvalue_reduced(grid, k)?;
        let vc = coarse_eigenvector(grid, k)?;
        let r = combo(1.0, &galerkin.matvec(&vc)?, -mu, &vc);
        spec = spec.max(norm_inf(&r) / (mu * norm_inf(&vc)));
        reduced = reduced.max((mu - mu_reduced).abs() / mu_reduced);
    }
    c.push("coarse spectrum 2l_k c^4 + 2l_(n-1-k) s^4", spec, 1e-10);
    c.push("coarse spectrum (2/h^2) sin^2(k pi h)", reduced, 1e-10);

    let mut pairs = 0.0_f64;
    for w in [&[2.0 / 3.0][..], &[2.0 / 3.0, 2.0 / 3.0], &[0.4, 1.1]] {
        pairs = pairs.max(SpectrumReport::build(grid, &sched(w))?.max_residual);
    }
    c.push("two-grid eigenpairs R b_k = l_k b_k", pairs, 1e-10);

    let mut expansion = 0.0_f64;
    for (w1, w2) in [(1.0, 0.5), (2.0 / 3.0, 2.0 / 3.0), (0.3, 1.2)] {
        let s = sched(&[w1, w2]);
        for k in 1..=grid.middle_mode() {
            let product = twogrid_eigenvalue(grid, k, &s)?;
            expansion = expansion.max((product - two_weight_expansion(grid, k, w1, w2)).abs());
        }
    }
    c.push("two-weight expansion", expansion, 1e-13);

    let mut constant = 0.0_f64;
    let repeated = sched(&[2.0 / 3.0, 2.0 / 3.0]);
    for k in 1..=grid.middle_mode() {
        constant = constant.max((twogrid_eigenvalue(grid, k, &repeated)? - 1.0 / 9.0).abs());
    }
    c.push("(2/3, 2/3) low branch = 1/9", constant, 1e-13);

    let lemma = (0..1000)
        .map(|_| (lemma1_identity(rng.random_range(-10.0..10.0)) - 1.0).abs())
        .fold(0.0, f64::max);
    c.push("3(s^4+c^4) - 2(s^6+c^6) = 1", lemma, 1e-14);

    let exact = sched(&[1.0, 0.5]);
    let (rho, _) = spectral_radius_closed_form(grid, &exact)?;
    c.push("(1, 1/2) closed-form spectral radius = 0", rho, 1e-12);
    let r = assemble_twogrid_matrix(grid, &exact)?;
    c.push(
        "(1, 1/2) propagator squared = 0",
        r.matmul(&r)?.max_abs(),
        1e-12,
    );

    let h = Hierarchy::two_level(*grid)?;
    let cfg = TwoGridConfig::new(sched(&[2.0 / 3.0]));
    let e: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
    let cycled = two_grid_cycle(&h, &e, &vec![0.0; len], &cfg)?;
    let assembled = assemble_twogrid_matrix(grid, &cfg.schedule)?.matvec(&e)?;
    c.push(
        "two-grid cycle = assembled propagator",
        norm_inf(&sub(&cycled, &assembled)),
        1e-12,
    );

    Ok(c.checks)
}

/// Runs every check at each size. The seed only affects the random probes.
pub fn run_suite(sizes: &[usize], prolong: ProlongFn, seed: u64) -> twogrid::Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for &n in sizes {
        checks.extend(checks_for(&Grid1D::new(n)?, prolong, &mut rng)?);
    }
    Ok(SuiteReport { checks })
}
