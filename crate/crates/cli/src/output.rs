//! CSV, JSON and SVG writers. All text is built in memory, then written once.
//!
//! CSV numbers use 15 significant digits in scientific notation with `.` as
//! the decimal separator and `\n` line endings. Footer lines start with `#`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use twogrid::smoother::smoother_eigenvalue;
use twogrid::{Grid1D, SolveReport, SpectrumReport, WeightSchedule};

use crate::error::{CliError, CliResult};

pub const SPECTRUM_HEADER: &str = "k,lambda_closed_form,eigen_residual,c_coefficient,branch";
pub const FIGURE_HEADER: &str = "k,lambda_s_23_23,lambda_s_1_05";

/// `x` with 15 significant digits, e.g. `1.11111111111111e-1`.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Serialize)]
struct Meta<'a> {
    command: &'a str,
    n: usize,
    weights: Vec<f64>,
    version: &'a str,
}

impl<'a> Meta<'a> {
    fn new(command: &'a str, n: usize, schedule: &WeightSchedule) -> Self {
        Self {
            command,
            n,
            weights: schedule.weights().to_vec(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Serialize)]
struct Document<'a, R, S> {
    meta: Meta<'a>,
    rows: Vec<R>,
    summary: S,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report is serializable");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Serialize)]
struct SpectrumRow {
    k: usize,
    lambda_closed_form: f64,
    eigen_residual: f64,
    c_coefficient: Option<f64>,
    branch: &'static str,
}

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    spectral_radius: f64,
    argmax_k: usize,
    power_iteration: f64,
    power_iterations: usize,
    power_converged: bool,
    idealized_radius: f64,
    max_eigen_residual: f64,
    propagator_max_abs: f64,
    propagator_squared_max_abs: f64,
    defective_modes: Vec<usize>,
    verified: bool,
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::new();
    writeln!(out, "{SPECTRUM_HEADER}").unwrap();
    for p in &report.pairs {
        let c = p.c_coefficient.map(num).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{}",
            p.k,
            num(p.eigenvalue),
            num(p.residual),
            c,
            p.branch.as_str()
        )
        .unwrap();
    }
    let pi = &report.power_iteration;
    writeln!(
        out,
        "# spectral_radius,{},argmax_k,{}",
        num(report.spectral_radius),
        report.argmax_k
    )
    .unwrap();
    writeln!(
        out,
        "# power_iteration,{},iterations,{},converged,{}",
        num(pi.radius),
        pi.iterations,
        pi.converged
    )
    .unwrap();
    writeln!(out, "# idealized_radius,{}", num(report.idealized_radius)).unwrap();
    writeln!(
        out,
        "# propagator_max_abs,{},squared_max_abs,{}",
        num(report.matrix_max_abs),
        num(report.square_max_abs)
    )
    .unwrap();
    let defective: Vec<String> = report.defective_modes().map(|k| k.to_string()).collect();
    if !defective.is_empty() {
        writeln!(out, "# defective_modes,{}", defective.join(",")).unwrap();
    }
    out
}

pub fn spectrum_json(report: &SpectrumReport) -> String {
    let rows = report
        .pairs
        .iter()
        .map(|p| SpectrumRow {
            k: p.k,
            lambda_closed_form: p.eigenvalue,
            eigen_residual: p.residual,
            c_coefficient: p.c_coefficient,
            branch: p.branch.as_str(),
        })
        .collect();
    let pi = &report.power_iteration;
    to_json(&Document {
        meta: Meta::new("spectrum", report.n, &report.schedule),
        rows,
        summary: SpectrumSummary {
            spectral_radius: report.spectral_radius,
            argmax_k: report.argmax_k,
            power_iteration: pi.radius,
            power_iterations: pi.iterations,
            power_converged: pi.converged,
            idealized_radius: report.idealized_radius,
            max_eigen_residual: report.max_residual,
            propagator_max_abs: report.matrix_max_abs,
            propagator_squared_max_abs: report.square_max_abs,
            defective_modes: report.defective_modes().collect(),
            verified: report.verified,
        },
    })
}

// ------------------------------------------------------------------- solve

#[derive(Debug, Serialize)]
struct SolveRow {
    cycle: usize,
    residual: f64,
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    cycles: usize,
    converged: bool,
    relative_residual: f64,
    error_vs_direct: f64,
    error_vs_exact: Option<f64>,
}

/// Plain-text summary printed by `solve`.
pub fn solve_text(
    grid: &Grid1D,
    schedule: &WeightSchedule,
    report: &SolveReport,
    error_vs_direct: f64,
) -> String {
    let mut out = String::new();
    writeln!(out, "n: {}", grid.points()).unwrap();
    writeln!(out, "weights: {schedule}").unwrap();
    writeln!(out, "cycles: {}", report.cycles).unwrap();
    writeln!(out, "converged: {}", report.converged).unwrap();
    writeln!(out, "relative_residual: {}", num(report.relative_residual)).unwrap();
    writeln!(out, "error_vs_direct: {}", num(error_vs_direct)).unwrap();
    if let Some(e) = report.final_error {
        writeln!(out, "error_vs_exact: {}", num(e)).unwrap();
    }
    writeln!(out, "residual_history:").unwrap();
    for (i, r) in report.residual_history.iter().enumerate() {
        writeln!(out, "  {i} {}", num(*r)).unwrap();
    }
    out
}

pub fn solve_csv(report: &SolveReport, error_vs_direct: f64) -> String {
    let mut out = String::from("cycle,residual\n");
    for (i, r) in report.residual_history.iter().enumerate() {
        writeln!(out, "{i},{}", num(*r)).unwrap();
    }
    writeln!(
        out,
        "# cycles,{},converged,{}",
        report.cycles, report.converged
    )
    .unwrap();
    writeln!(out, "# relative_residual,{}", num(report.relative_residual)).unwrap();
    writeln!(out, "# error_vs_direct,{}", num(error_vs_direct)).unwrap();
    if let Some(e) = report.final_error {
        writeln!(out, "# error_vs_exact,{}", num(e)).unwrap();
    }
    out
}

pub fn solve_json(
    grid: &Grid1D,
    schedule: &WeightSchedule,
    report: &SolveReport,
    error_vs_direct: f64,
) -> String {
    let rows = report
        .residual_history
        .iter()
        .enumerate()
        .map(|(cycle, &residual)| SolveRow { cycle, residual })
        .collect();
    to_json(&Document {
        meta: Meta::new("solve", grid.points(), schedule),
        rows,
        summary: SolveSummary {
            cycles: report.cycles,
            converged: report.converged,
            relative_residual: report.relative_residual,
            error_vs_direct,
            error_vs_exact: report.final_error,
        },
    })
}

// ------------------------------------------------------------------ figure

/// Smoother eigenvalues of the two schedules compared in the figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub n: usize,
    pub two_thirds: Vec<f64>,
    pub one_half: Vec<f64>,
}

/// Largest `|λ|` over `k >= (n-1)/2`: `(k, λ_k)`, smallest `k` on ties.
pub fn oscillatory_max(grid: &Grid1D, values: &[f64]) -> (usize, f64) {
    let mut best = (0, 0.0_f64);
    for k in grid.middle_mode()..=grid.interior_len() {
        let v = values[k - 1];
        if best.0 == 0 || v.abs() > best.1.abs() {
            best = (k, v);
        }
    }
    best
}

impl FigureData {
    pub fn compute(grid: &Grid1D) -> CliResult<Self> {
        let w = 2.0 / 3.0;
        let two_thirds = WeightSchedule::new(vec![w, w])?;
        let one_half = WeightSchedule::new(vec![1.0, 0.5])?;
        let eval = |s: &WeightSchedule| {
            (1..=grid.interior_len())
                .map(|k| smoother_eigenvalue(grid, k, s))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(Self {
            n: grid.points(),
            two_thirds: eval(&two_thirds)?,
            one_half: eval(&one_half)?,
        })
    }

    fn grid(&self) -> Grid1D {
        Grid1D::new(self.n).expect("figure data comes from a valid grid")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{FIGURE_HEADER}").unwrap();
        for (i, (a, b)) in self.two_thirds.iter().zip(&self.one_half).enumerate() {
            writeln!(out, "{},{},{}", i + 1, num(*a), num(*b)).unwrap();
        }
        let grid = self.grid();
        for (name, values) in [
            ("lambda_s_23_23", &self.two_thirds),
            ("lambda_s_1_05", &self.one_half),
        ] {
            let (k, v) = oscillatory_max(&grid, values);
            writeln!(out, "# oscillatory_max_abs,{name},k,{k},value,{}", num(v)).unwrap();
        }
        out
    }

    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 440.0;
        const LEFT: f64 = 70.0;
        const RIGHT: f64 = 30.0;
        const TOP: f64 = 40.0;
        const BOTTOM: f64 = 60.0;
        let grid = self.grid();
        let k_max = grid.interior_len() as f64;
        let (y_min, y_max) = (-0.25, 1.0);
        let x = |k: f64| LEFT + (k - 1.0) / (k_max - 1.0) * (W - LEFT - RIGHT);
        let y = |v: f64| TOP + (y_max - v) / (y_max - y_min) * (H - TOP - BOTTOM);

        let mut s = String::new();
        writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">Weighted-Jacobi eigenvalues, two sweeps, n = {}</text>"#,
            W / 2.0,
            self.n
        )
        .unwrap();

        // axes and ticks
        let (x0, x1, y0, y1) = (x(1.0), x(k_max), y(y_min), y(y_max));
        writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#
        )
        .unwrap();
        let zero = y(0.0);
        writeln!(
            s,
            r##"<line x1="{x0:.2}" y1="{zero:.2}" x2="{x1:.2}" y2="{zero:.2}" stroke="#999" stroke-dasharray="4 3"/>"##
        )
        .unwrap();
        let mid = x(grid.middle_mode() as f64);
        writeln!(
            s,
            r##"<line x1="{mid:.2}" y1="{y0:.2}" x2="{mid:.2}" y2="{y1:.2}" stroke="#bbb" stroke-dasharray="2 3"/>"##
        )
        .unwrap();
        let step = ((k_max / 8.0).ceil() as usize).max(1);
        let mut ticks: Vec<usize> = (1..=grid.interior_len()).step_by(step).collect();
        if ticks.last() != Some(&grid.interior_len()) {
            ticks.push(grid.interior_len());
        }
        for k in ticks {
            let px = x(k as f64);
            writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#,
                y0 + 5.0
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{k}</text>"#,
                y0 + 18.0
            )
            .unwrap();
        }
        for i in 0..=5 {
            let v = y_min + 0.25 * i as f64;
            let py = y(v);
            writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/>"#,
                x0 - 5.0
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
                x0 - 8.0,
                py + 4.0
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">k</text>"#,
            (x0 + x1) / 2.0,
            H - 15.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">eigenvalue</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0
        )
        .unwrap();

        let series = [
            ("S(2/3, 2/3)", "#1f77b4", &self.two_thirds),
            ("S(1, 1/2)", "#d62728", &self.one_half),
        ];
        for (i, (label, color, values)) in series.iter().enumerate() {
            let points: Vec<String> = values
                .iter()
                .enumerate()
                .map(|(j, v)| format!("{:.2},{:.2}", x((j + 1) as f64), y(*v)))
                .collect();
            writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                points.join(" ")
            )
            .unwrap();
            let (k, v) = oscillatory_max(&grid, values);
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"><title>k = {k}, {}</title></circle>"#,
                x(k as f64),
                y(v),
                num(v)
            )
            .unwrap();
            let ly = TOP + 10.0 + 18.0 * i as f64;
            let lx = W - RIGHT - 170.0;
            writeln!(s, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, lx + 24.0).unwrap();
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}">{label}</text>"#,
                lx + 30.0,
                ly + 4.0
            )
            .unwrap();
        }
        writeln!(s, "</svg>").unwrap();
        s
    }
}
