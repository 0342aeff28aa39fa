use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twogrid::discretization::stiffness;
use twogrid::linalg::{norm_inf, sub};
use twogrid::spectral::assemble_twogrid_matrix;
use twogrid::{
    solve, two_grid_cycle, v_cycle, Depth, Grid1D, Hierarchy, PoissonProblem, TwoGridConfig,
    WeightSchedule,
};

fn sched(s: &str) -> WeightSchedule {
    s.parse().unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn rel_err(u: &[f64], exact: &[f64]) -> f64 {
    norm_inf(&sub(u, exact)) / norm_inf(exact)
}

#[test]
fn two_grid_cycle_matches_assembled_propagator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [9, 17, 33] {
        let g = Grid1D::new(n).unwrap();
        let h = Hierarchy::two_level(g).unwrap();
        for s in ["2/3", "2/3,2/3", "1,0.5", "0.5,1", "0.3,1.2,0.8"] {
            let schedule = sched(s);
            let r = assemble_twogrid_matrix(&g, &schedule).unwrap();
            let e = random_vec(&mut rng, n - 2);
            let f = vec![0.0; n - 2];
            let cycled = two_grid_cycle(&h, &e, &f, &TwoGridConfig::new(schedule)).unwrap();
            let applied = r.matvec(&e).unwrap();
            assert!(norm_inf(&sub(&cycled, &applied)) <= 1e-12, "n={n} {s}");
        }
    }
}

#[test]
fn exact_schedule_two_grid_is_nilpotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [9, 17, 33] {
        let g = Grid1D::new(n).unwrap();
        for s in ["1,0.5", "0.5,1"] {
            let r = assemble_twogrid_matrix(&g, &sched(s)).unwrap();
            assert!(r.max_abs() > 0.1, "n={n} {s}");
            assert!(r.matmul(&r).unwrap().max_abs() <= 1e-12, "n={n} {s}");
        }

        let h = Hierarchy::two_level(g).unwrap();
        let cfg = TwoGridConfig::new(sched("1,0.5"));
        let f = random_vec(&mut rng, n - 2);
        let direct = stiffness(&g).solve(&f).unwrap();
        let once = two_grid_cycle(&h, &vec![0.0; n - 2], &f, &cfg).unwrap();
        let twice = two_grid_cycle(&h, &once, &f, &cfg).unwrap();
        assert!(rel_err(&once, &direct) > 1e-3);
        assert!(rel_err(&twice, &direct) <= 1e-12);
    }
}

#[test]
fn exact_schedule_v_cycle_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [17, 33, 65, 129] {
        let g = Grid1D::new(n).unwrap();
        let h = Hierarchy::build(g, Depth::Auto).unwrap();
        let mut e = random_vec(&mut rng, n - 2);
        let f = vec![0.0; n - 2];
        for _ in 0..3 {
            e = v_cycle(&h, &e, &f, &sched("1,0.5")).unwrap();
        }
        let before = norm_inf(&e);
        for _ in 0..5 {
            e = v_cycle(&h, &e, &f, &sched("1,0.5")).unwrap();
        }
        let rate = (norm_inf(&e) / before).powf(0.2);
        assert!(rate > 1e-3 && rate < 0.2, "n={n} rate={rate}");
    }
}

#[test]
fn v_cycle_on_two_levels_is_two_grid() {
    let g = Grid1D::new(17).unwrap();
    let h = Hierarchy::build(g, Depth::Levels(2)).unwrap();
    let u: Vec<f64> = (0..15).map(|i| (i as f64).sin()).collect();
    let f = vec![1.0; 15];
    let s = sched("2/3");
    assert_eq!(
        v_cycle(&h, &u, &f, &s).unwrap(),
        two_grid_cycle(&h, &u, &f, &TwoGridConfig::new(s)).unwrap()
    );
}

#[test]
fn single_level_is_direct_solve() {
    let g = Grid1D::new(9).unwrap();
    let h = Hierarchy::build(g, Depth::Levels(1)).unwrap();
    let f: Vec<f64> = (1..=7).map(|i| i as f64).collect();
    let u = v_cycle(&h, &[5.0; 7], &f, &sched("1")).unwrap();
    assert_eq!(u, stiffness(&g).solve(&f).unwrap());
}

#[test]
fn exact_solution_is_fixed_point_of_v_cycle() {
    let g = Grid1D::new(33).unwrap();
    let h = Hierarchy::build(g, Depth::Auto).unwrap();
    let f: Vec<f64> = g.interior_nodes().iter().map(|x| x * x).collect();
    let u = stiffness(&g).solve(&f).unwrap();
    for s in ["2/3", "1,0.5", "0.8,0.8,0.8"] {
        let out = v_cycle(&h, &u, &f, &sched(s)).unwrap();
        assert!(rel_err(&out, &u) <= 1e-12, "{s}");
    }
}

#[test]
fn two_grid_two_thirds_asymptotic_rate() {
    let g = Grid1D::new(33).unwrap();
    let h = Hierarchy::two_level(g).unwrap();
    let cfg = TwoGridConfig::new(sched("2/3"));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = vec![0.0; 31];
    let mut e = random_vec(&mut rng, 31);
    for _ in 0..30 {
        e = two_grid_cycle(&h, &e, &f, &cfg).unwrap();
    }
    let before = norm_inf(&e);
    let after = norm_inf(&two_grid_cycle(&h, &e, &f, &cfg).unwrap());
    assert!((after / before - 1.0 / 3.0).abs() <= 1e-2);
}

#[test]
fn solve_iteration_counts() {
    // log(1e-10) / log(1/3) is about 21
    let g = Grid1D::new(33).unwrap();
    let p = PoissonProblem::sample(g, |x| PI * PI * (PI * x).sin());
    for s in ["2/3", "0.6667"] {
        let (_, report) = solve(&p, &sched(s), 1e-10, 100).unwrap();
        assert!(report.converged);
        assert!((20..=24).contains(&report.cycles), "{s}: {}", report.cycles);
        assert!(report.relative_residual <= 1e-10);
    }
    let (_, report) = solve(&p, &sched("1,0.5"), 1e-10, 100).unwrap();
    assert!(report.converged);
    assert!(report.cycles > 1 && report.cycles < 22);
}

#[test]
fn residual_history_shrinks() {
    let g = Grid1D::new(65).unwrap();
    let p = PoissonProblem::sample(g, |_| 1.0);
    let (_, report) = solve(&p, &sched("2/3,2/3"), 1e-10, 100).unwrap();
    assert_eq!(report.residual_history.len(), report.cycles + 1);
    // the first cycle amplifies the residual of a smooth right-hand side
    let history = &report.residual_history[1..];
    assert!(history.windows(2).all(|w| w[1] < w[0]));
    assert!(history.windows(3).all(|w| w[2] < 0.1 * w[0]));
}

#[test]
fn manufactured_solution_is_second_order() {
    // sin(πx) is reproduced with nodal error h²π²/12 + O(h⁴)
    let mut previous = None;
    for n in [17, 33, 65, 129] {
        let g = Grid1D::new(n).unwrap();
        let p =
            PoissonProblem::sample(g, |x| PI * PI * (PI * x).sin()).with_exact(|x| (PI * x).sin());
        let (_, report) = solve(&p, &sched("2/3"), 1e-13, 200).unwrap();
        let err = report.final_error.unwrap();
        let h = g.spacing();
        let constant = err / (h * h);
        assert!(
            (constant - PI * PI / 12.0).abs() <= 0.01,
            "n={n} C={constant}"
        );
        if let Some(prev) = previous {
            let ratio: f64 = prev / err;
            assert!((ratio - 4.0).abs() <= 0.05, "n={n} ratio={ratio}");
        }
        previous = Some(err);
    }
}
