use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twogrid::linalg::{norm_inf, sub};
use twogrid::{solve, Grid1D, PoissonProblem, SpectrumReport};

use crate::args::{
    multilevel_grid, two_level_grid, Cli, Command, FigureArgs, Format, Rhs, SolveArgs,
    SpectrumArgs, VerifyArgs,
};
use crate::error::{CliError, CliResult, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::output::{self, num, FigureData};
use crate::verify::{faulty_prolongation, run_suite, standard_prolongation, DEFAULT_SIZES};

/// Seed of the random probes in `verify`.
pub const VERIFY_SEED: u64 = 0x5eed;

/// Runs one command and returns its exit code; errors carry their own.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<u8> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args, stdout),
        Command::Spectrum(args) => cmd_spectrum(&args, stdout),
        Command::Verify(args) => cmd_verify(&args, stdout),
        Command::Figure(args) => cmd_figure(&args, stdout),
    }
}

pub fn manufactured_problem(grid: Grid1D, rhs: Rhs, seed: u64) -> PoissonProblem {
    match rhs {
        Rhs::Sine => PoissonProblem::sample(grid, |x| PI * PI * (PI * x).sin())
            .with_exact(|x| (PI * x).sin()),
        Rhs::One => PoissonProblem::sample(grid, |_| 1.0).with_exact(|x| 0.5 * x * (1.0 - x)),
        Rhs::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PoissonProblem::sample(grid, |_| rng.random_range(-1.0..1.0))
        }
    }
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let grid = multilevel_grid(args.n)?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if args.format == Format::Svg {
        return Err(CliError::Usage("solve writes csv or json".into()));
    }
    let problem = manufactured_problem(grid, args.rhs, args.seed);
    let (u, report) = solve(&problem, &args.weights, args.tol, args.max_cycles)?;
    let direct = problem.direct_solution()?;
    let error_vs_direct = norm_inf(&sub(&u, &direct));

    stdout
        .write_all(output::solve_text(&grid, &args.weights, &report, error_vs_direct).as_bytes())?;
    if let Some(path) = &args.output {
        let text = match args.format {
            Format::Json => output::solve_json(&grid, &args.weights, &report, error_vs_direct),
            _ => output::solve_csv(&report, error_vs_direct),
        };
        output::write_file(path, &text)?;
    }
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let grid = two_level_grid(args.n)?;
    let report = SpectrumReport::build(&grid, &args.weights)?;
    let text = match args.format {
        Format::Csv => output::spectrum_csv(&report),
        Format::Json => output::spectrum_json(&report),
        Format::Svg => return Err(CliError::Usage("spectrum writes csv or json".into())),
    };
    match &args.output {
        Some(path) => output::write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let sizes = match args.n {
        Some(n) => vec![two_level_grid(n)?.points()],
        None => DEFAULT_SIZES.to_vec(),
    };
    let prolong = if args.inject_fault {
        faulty_prolongation
    } else {
        standard_prolongation
    };
    let report = run_suite(&sizes, prolong, VERIFY_SEED)?;
    stdout.write_all(report.table().as_bytes())?;
    if report.passed() {
        writeln!(stdout, "all {} checks passed", report.checks.len())?;
        return Ok(EXIT_OK);
    }
    for c in report.failures() {
        writeln!(
            stdout,
            "FAILED: {} (n = {}), max residual {}",
            c.name,
            c.n,
            num(c.max_residual)
        )?;
    }
    Ok(EXIT_VERIFY_FAILED)
}

pub fn cmd_figure(args: &FigureArgs, stdout: &mut dyn Write) -> CliResult<u8> {
    let grid = two_level_grid(args.n)?;
    let data = FigureData::compute(&grid)?;
    let svg_path = args.output.with_extension("svg");
    output::write_file(&args.output, &data.to_csv())?;
    output::write_file(&svg_path, &data.to_svg())?;
    writeln!(stdout, "csv: {}", args.output.display())?;
    writeln!(stdout, "svg: {}", svg_path.display())?;
    for (name, values) in [
        ("lambda_s_23_23", &data.two_thirds),
        ("lambda_s_1_05", &data.one_half),
    ] {
        let (k, v) = output::oscillatory_max(&grid, values);
        writeln!(
            stdout,
            "{name}: oscillatory max |lambda| at k = {k}: {}",
            num(v)
        )?;
    }
    Ok(EXIT_OK)
}
