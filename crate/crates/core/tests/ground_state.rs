//! Large-L ground state, surface energy and the finite-size oracles behind them.

use std::f64::consts::PI;

use susy_tj::extrapolate::{bst_extrapolate, Omega};
use susy_tj::ground_state::{
    bound_root_energy, bound_root_trace, decay_rate, inhomogeneous_gap, solve_ground_state,
};
use susy_tj::lattice::{exact_spectrum, LatticeSpec};
use susy_tj::presets::{bound_state_region, real_root_region};
use susy_tj::thermo::{surface_energy, SurfaceRegion};
use susy_tj::{BoundaryParams, RawParams};

fn parallel_version(raw: RawParams) -> BoundaryParams {
    BoundaryParams::new(raw).unwrap().parallel_counterpart().unwrap()
}

#[test]
fn homogeneous_solution_is_exact_for_parallel_fields() {
    // with h = 0 the homogeneous equations describe the true ground state
    let params = parallel_version(real_root_region(PI / 5.0));
    assert!(params.is_diagonalizable_pair());
    for l in [4, 6] {
        let gap = inhomogeneous_gap(l, &params).unwrap();
        assert!(gap.e_inh.abs() < 1e-10, "L = {l}: {}", gap.e_inh);
    }
}

#[test]
fn pinned_bound_root_is_exponentially_accurate() {
    // the bound root sits at zeta i only up to corrections decaying in L
    let params = parallel_version(bound_state_region(0.8));
    let gaps: Vec<f64> = [4, 6, 8].iter().map(|&l| inhomogeneous_gap(l, &params).unwrap().e_inh.abs()).collect();
    assert!(gaps[0] < 1e-6, "{gaps:?}");
    assert!(gaps.windows(2).all(|w| w[1] < 0.5 * w[0]), "{gaps:?}");
}

#[test]
fn homogeneous_energy_tracks_the_exact_ground_state() {
    // dropping the inhomogeneous term costs only a small positive amount of energy
    let params = BoundaryParams::new(real_root_region(PI / 5.0)).unwrap();
    let sol = solve_ground_state(6, params.zeta()).unwrap();
    let exact = exact_spectrum(&LatticeSpec::new(6, params).unwrap(), 1).unwrap().ground_energy();
    assert!((sol.energy - exact).abs() < 0.01 * exact.abs());
}

#[test]
fn bound_root_appears_below_zero_zeta() {
    let real = solve_ground_state(16, 0.05).unwrap();
    let bound = solve_ground_state(16, -0.2).unwrap();
    assert!(!real.has_bound_root && bound.has_bound_root);
    assert_eq!(real.mu.len(), 8);
    assert_eq!(bound.mu.len(), 7);
    assert_eq!(bound.quantum_numbers, (1..=7).collect::<Vec<u32>>());
    assert!(bound_root_energy(-0.2) < 0.0);
}

#[test]
fn energy_is_continuous_in_zeta() {
    for l in [8, 64] {
        let a = solve_ground_state(l, 1e-9).unwrap().energy;
        let b = solve_ground_state(l, 0.0).unwrap().energy;
        assert!((a - b).abs() < 1e-6, "L = {l}: {a} vs {b}");
    }
}

#[test]
fn surface_energy_is_the_finite_size_limit() {
    let sizes: Vec<usize> = (3..=10).map(|k| 1usize << k).collect();
    for zeta in [0.7, 3.0, -0.1, -0.35] {
        let pts: Vec<(f64, f64)> = sizes
            .iter()
            .map(|&l| (l as f64, solve_ground_state(l, zeta).unwrap().energy + 2.0 * l as f64 / PI))
            .collect();
        let bst = bst_extrapolate(&pts, Omega::Auto).unwrap().estimate;
        let exact = surface_energy(zeta).unwrap().value;
        assert!((bst - exact).abs() < 1e-6, "zeta = {zeta}: {bst} vs {exact}");
    }
}

#[test]
fn surface_energy_shape() {
    let grid: Vec<f64> = (0..=50).map(|k| 0.1 * k as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&z| surface_energy(z).unwrap().value).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert!(values.iter().all(|&e| (0.0..1.0).contains(&e)));
    let r = surface_energy(-0.3).unwrap();
    assert_eq!(r.region, SurfaceRegion::BoundState);
    assert!(r.value < 0.0);
    assert!(surface_energy(-0.49).unwrap().value < surface_energy(-0.3).unwrap().value);
}

#[test]
fn bound_root_approaches_its_limit() {
    let params = BoundaryParams::new(RawParams {
        eta: 1.0,
        xi: -0.1,
        theta: 0.15,
        phi: 0.0,
        xi_prime: 0.6,
        theta_prime: 0.8,
        phi_prime: 0.0,
        epsilon: 1.0,
    })
    .unwrap();
    let points = bound_root_trace(&params, &[4, 6], 48, 11).unwrap();
    for p in &points {
        assert!((p.energy_bethe - p.energy_exact).abs() < 1e-8);
        assert!(p.residual < 1e-10);
    }
    assert!(points[1].distance < points[0].distance);
    assert!(decay_rate(&points).unwrap() > 0.0);
}

#[test]
fn ground_state_checks_its_region() {
    let mut raw = real_root_region(PI / 5.0);
    raw.eta = 0.8;
    let err = inhomogeneous_gap(4, &BoundaryParams::new(raw).unwrap()).unwrap_err();
    assert!(err.is_validation());
    assert!(solve_ground_state(8, -0.5).unwrap_err().is_validation());
}
