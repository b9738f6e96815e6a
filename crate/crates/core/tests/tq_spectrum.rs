//! Nested Bethe ansatz against exact diagonalization and the transfer matrix.

use std::f64::consts::PI;

use susy_tj::lattice::{eigensystem, LatticeSpec, TransferMatrix};
use susy_tj::presets::table_one;
use susy_tj::tq_spectrum::{
    canonical_lambda, canonical_v, energy_from_lambda, energy_from_roots, eval_lambda, match_against_exact,
    max_relative_residual, solve_nested_bae, BetheRoots, MatchOptions, MatchReport, NewtonOptions, SeedStrategy,
};
use susy_tj::{BoundaryParams, RawParams, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn benchmark() -> BoundaryParams {
    BoundaryParams::new(table_one()).unwrap()
}

fn benchmark_report() -> (LatticeSpec, MatchReport) {
    let spec = LatticeSpec::new(2, benchmark()).unwrap();
    let report = match_against_exact(&spec, &MatchOptions::default()).unwrap();
    (spec, report)
}

/// Printed two-site roots `(v, λ)` and energies, level by level.
fn printed_rows() -> Vec<(Vec<C64>, Vec<C64>, f64)> {
    vec![
        (vec![c(-0.5, -0.2786)], vec![c(0.4756, 0.0)], -1.052578),
        (vec![], vec![], 0.0),
        (vec![c(-0.5, -0.5801)], vec![c(1.5481, 0.0)], 0.295101),
        (vec![c(-0.5, 0.2731), c(-0.5, 1.6511)], vec![c(-0.4393, 0.0), c(0.0, 1.6139)], 0.583040),
        (vec![c(-0.5, 1.9038)], vec![c(0.0, 2.1272)], 1.741892),
        (vec![c(-0.0015, 0.3109), c(-0.0015, -0.3109)], vec![c(0.0, 0.3403), c(2.1227, 0.0)], 2.141851),
        (vec![c(-0.5, -0.4606), c(0.5419, 0.0)], vec![c(0.9406, 0.0), c(2.1803, 0.0)], 3.033107),
        (vec![c(0.4957, 0.0)], vec![c(1.6356, 0.0)], 3.348918),
        (vec![c(0.4798, 0.0), c(-0.5, -1.3235)], vec![c(0.0, 1.5362), c(2.0858, 0.0)], 4.908668),
    ]
}

/// Every printed root has a computed partner within the rounding of 4 decimals.
fn same_to_four_decimals(printed: &[C64], computed: &[C64]) -> bool {
    let mut left: Vec<C64> = computed.to_vec();
    printed.len() == computed.len()
        && printed.iter().all(|p| {
            let best = left
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - p).norm().total_cmp(&(b.1 - p).norm()))
                .map(|(i, z)| (i, (z - p).norm()));
            match best {
                Some((i, d)) if d <= 0.5e-4 * 2f64.sqrt() + 1e-12 => {
                    left.remove(i);
                    true
                }
                _ => false,
            }
        })
}

#[test]
fn benchmark_energies_and_roots() {
    let (_, report) = benchmark_report();
    assert!(report.complete());
    for (level, (v, lam, energy)) in report.levels.iter().zip(printed_rows()) {
        assert!((level.exact_energy - energy).abs() <= 1e-5 + 5e-7, "{} vs {energy}", level.exact_energy);
        let s = level.solution.as_ref().unwrap();
        assert!((s.energy - level.exact_energy).abs() < 1e-8);
        let pv: Vec<C64> = v.iter().map(|&z| canonical_v(z, 1.0)).collect();
        let pl: Vec<C64> = lam.iter().map(|&z| canonical_lambda(z)).collect();
        assert!(same_to_four_decimals(&pv, &s.roots.v), "v at E = {energy}: {:?}", s.roots.v);
        assert!(same_to_four_decimals(&pl, &s.roots.lam), "lam at E = {energy}: {:?}", s.roots.lam);
    }
}

#[test]
fn lambda_matches_transfer_eigenvalues() {
    let (spec, report) = benchmark_report();
    let exact = eigensystem(&spec).unwrap();
    let tm = TransferMatrix::new(&spec);
    let mut worst = 0.0f64;
    for (level, state) in report.levels.iter().zip(&exact) {
        let roots = &level.solution.as_ref().unwrap().roots;
        for k in 0..50 {
            let u = c(-1.0 + 2.0 * k as f64 / 49.0, 0.0);
            let from_tq = eval_lambda(u, roots).unwrap();
            let tpsi = tm.apply(u, &state.vector);
            let from_t = tm.expectation(u, &state.vector);
            // the exact state is an eigenvector of t(u)
            assert!((tpsi - &state.vector * from_t).norm() < 1e-9 * (1.0 + from_t.norm()));
            worst = worst.max((from_tq - from_t).norm());
        }
    }
    assert!(worst <= 1e-8, "{worst}");
}

/// Lagrange interpolation through `nodes`, evaluated at `x`.
fn interpolate(nodes: &[(C64, C64)], x: C64) -> C64 {
    nodes
        .iter()
        .enumerate()
        .map(|(i, &(xi, yi))| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(yi, |acc, (_, &(xj, _))| acc * (x - xj) / (xi - xj))
        })
        .sum()
}

#[test]
fn lambda_is_a_polynomial_of_degree_2l_plus_2() {
    let (spec, report) = benchmark_report();
    let degree = 2 * spec.sites() + 2;
    for level in &report.levels {
        let roots = &level.solution.as_ref().unwrap().roots;
        let nodes: Vec<(C64, C64)> = (0..=degree)
            .map(|k| {
                let u = C64::from_polar(1.3, 2.0 * PI * k as f64 / (degree + 1) as f64 + 0.1);
                (u, eval_lambda(u, roots).unwrap())
            })
            .collect();
        for probe in [c(0.37, -0.21), c(-0.8, 0.45), c(0.05, 0.9)] {
            let direct = eval_lambda(probe, roots).unwrap();
            let fitted = interpolate(&nodes, probe);
            assert!((direct - fitted).norm() < 1e-9 * (1.0 + direct.norm()), "{direct} vs {fitted}");
        }
        // the apparent poles at the roots are removable
        for &v in &roots.v {
            let near = eval_lambda(v + c(1e-7, 0.0), roots).unwrap();
            assert!(near.is_finite() && near.norm() < 1e6);
        }
    }
}

#[test]
fn energies_from_lambda_and_from_roots_agree() {
    let (_, report) = benchmark_report();
    for level in &report.levels {
        let roots = &level.solution.as_ref().unwrap().roots;
        let a = energy_from_roots(roots).unwrap();
        let b = energy_from_lambda(roots).unwrap();
        assert!((a - b.re).abs() < 1e-9 && b.im.abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn root_sets_are_closed_under_conjugation() {
    let (_, report) = benchmark_report();
    for level in &report.levels {
        let roots = &level.solution.as_ref().unwrap().roots;
        assert!(roots.conjugation_defect() < 1e-8, "{:?}", roots);
        let conj = BetheRoots::new(
            roots.v.iter().map(|z| z.conj()).collect(),
            roots.lam.iter().map(|z| z.conj()).collect(),
            roots.params,
            roots.sites,
        )
        .canonicalized();
        assert!(conj.same_as(roots, 1e-8));
    }
}

#[test]
fn reflected_roots_solve_the_same_equations() {
    let (_, report) = benchmark_report();
    for level in &report.levels {
        let roots = &level.solution.as_ref().unwrap().roots;
        if roots.m() == 0 {
            continue;
        }
        let mut reflected = roots.clone();
        reflected.v[0] = -reflected.v[0] - 1.0;
        reflected.lam.iter_mut().for_each(|l| *l = -*l);
        assert!(max_relative_residual(&reflected) < 1e-9);
        assert!((energy_from_roots(&reflected).unwrap() - level.exact_energy).abs() < 1e-8);
    }
}

fn parallel(theta: f64, phi: f64) -> BoundaryParams {
    BoundaryParams::new(RawParams {
        theta_prime: theta,
        phi_prime: phi,
        ..RawParams { theta, phi, ..table_one() }
    })
    .unwrap()
}

#[test]
fn parallel_fields_use_the_homogeneous_relation() {
    let p = parallel(PI / 5.0, PI / 3.0);
    assert_eq!(p.h(), c(0.0, 0.0));
    let spec = LatticeSpec::new(2, p).unwrap();
    let report = match_against_exact(&spec, &MatchOptions::default()).unwrap();
    assert!(report.complete(), "{:?}", report.unmatched());
    assert!(report.max_energy_error() < 1e-8);
}

#[test]
fn empty_configuration_matches_one_level() {
    let spec = LatticeSpec::new(2, benchmark()).unwrap();
    let opts = MatchOptions {
        pairs: Some(vec![(0, 0)]),
        lambda_fit: false,
        ..MatchOptions::default()
    };
    let report = match_against_exact(&spec, &opts).unwrap();
    assert_eq!(report.matched_count(), 1);
    let level = report.levels.iter().find(|l| l.solution.is_some()).unwrap();
    assert_eq!(level.exact_energy.abs() < 1e-12, true);
}

#[test]
fn three_sites_match_every_level() {
    let spec = LatticeSpec::new(3, benchmark()).unwrap();
    let report = match_against_exact(&spec, &MatchOptions::default()).unwrap();
    assert_eq!(report.levels.len(), 27);
    assert!(report.complete(), "{:?}", report.unmatched());
    assert!(report.max_energy_error() < 1e-8);
}

#[test]
fn homotopy_from_parallel_fields_reaches_exact_levels() {
    let spec = LatticeSpec::new(2, benchmark()).unwrap();
    let strategy = SeedStrategy::Homotopy {
        count: 40,
        seed: 3,
        steps: 24,
    };
    let report = solve_nested_bae(&spec, 1, 1, &[strategy], &NewtonOptions::default()).unwrap();
    let exact: Vec<f64> = eigensystem(&spec).unwrap().iter().filter(|l| l.electrons == 1).map(|l| l.energy).collect();
    assert!(!report.solutions.is_empty());
    for s in &report.solutions {
        assert!(exact.iter().any(|e| (e - s.energy).abs() < 1e-8), "{}", s.energy);
    }
}

#[test]
fn solver_rejects_oversized_root_counts() {
    let spec = LatticeSpec::new(2, benchmark()).unwrap();
    let err = solve_nested_bae(&spec, 3, 1, &[], &NewtonOptions::default()).unwrap_err();
    assert!(err.is_validation());
    assert!(match_against_exact(&LatticeSpec::new(4, benchmark()).unwrap(), &MatchOptions::default())
        .unwrap_err()
        .is_validation());
}
