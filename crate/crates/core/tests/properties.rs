//! Randomized invariants.

use std::f64::consts::PI;

use proptest::prelude::*;
use susy_tj::extrapolate::{bst_extrapolate, Omega};
use susy_tj::graded_algebra::{graded_permutation, r_matrix, GradedOperator};
use susy_tj::ground_state::{counting_residual, solve_ground_state};
use susy_tj::lattice::{build_hamiltonian, LatticeSpec};
use susy_tj::presets::table_one;
use susy_tj::thermo::{kernel_integral_closed, kernel_integral_quadrature};
use susy_tj::tq_spectrum::{canonical_lambda, canonical_v};
use susy_tj::{BoundaryParams, RawParams, C64};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn angles() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI)
}

fn params_with(theta: f64, phi: f64, theta_prime: f64, phi_prime: f64) -> BoundaryParams {
    BoundaryParams::new(RawParams {
        theta,
        phi,
        theta_prime,
        phi_prime,
        ..table_one()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn angle_form_satisfies_the_constraint((t, p, tp, pp) in angles()) {
        let params = params_with(t, p, tp, pp);
        prop_assert!(params.left().constraint_defect().norm() < 1e-14);
        prop_assert!(params.right().constraint_defect().norm() < 1e-14);
        prop_assert!(params.h().im.abs() < 1e-14);
    }

    #[test]
    fn parallel_fields_have_zero_h((t, p) in (0.0..PI, 0.0..2.0 * PI)) {
        prop_assert_eq!(params_with(t, p, t, p).h(), C64::new(0.0, 0.0));
    }

    #[test]
    fn unitarity_at_random_points(re in -3.0..3.0f64, im in -3.0..3.0f64, eta in 0.2..2.0f64) {
        let u = C64::new(re, im);
        let lhs = r_matrix(u, eta).mul(&r_matrix(-u, eta));
        let rhs = GradedOperator::identity(2).scale(-(u - eta) * (u + eta));
        prop_assert!(lhs.relative_distance(&rhs) < 1e-13);
    }

    #[test]
    fn hamiltonian_is_hermitian((t, p, tp, pp) in angles()) {
        let spec = LatticeSpec::new(2, params_with(t, p, tp, pp)).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        let m = h.matrix();
        prop_assert!((m - m.adjoint()).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn canonical_forms_are_orbit_invariants(re in -3.0..3.0f64, im in -3.0..3.0f64, eta in 0.2..2.0f64) {
        let v = C64::new(re, im);
        prop_assert!((canonical_v(v, eta) - canonical_v(-v - eta, eta)).norm() < 1e-12);
        prop_assert_eq!(canonical_v(canonical_v(v, eta), eta), canonical_v(v, eta));
        prop_assert_eq!(canonical_lambda(v), canonical_lambda(-v));
    }

    #[test]
    fn kernel_integral_forms_agree(zeta in prop_oneof![-0.499..-1e-4f64, 1e-4..20.0f64]) {
        let a = kernel_integral_closed(zeta);
        let b = kernel_integral_quadrature(zeta).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "zeta = {}: {} vs {}", zeta, a, b);
    }

    #[test]
    fn ground_state_roots_solve_the_counting_equations(half in 2usize..40, zeta in -0.45..3.0f64) {
        let sol = solve_ground_state(2 * half, zeta).unwrap();
        for (&mu, &i) in sol.mu.iter().zip(&sol.quantum_numbers) {
            prop_assert!(counting_residual(mu, i, 2 * half, zeta).abs() < 1e-10);
        }
        prop_assert!(sol.mu.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bst_commutes_with_affine_maps(a in -2.0..2.0f64, b in -3.0..3.0f64, s in 0.5..4.0f64, shift in -5.0..5.0f64) {
        let pts: Vec<(f64, f64)> = (3..9).map(|k| (1u32 << k) as f64).map(|l| (l, a + b / l + 0.3 / (l * l))).collect();
        let mapped: Vec<(f64, f64)> = pts.iter().map(|&(l, f)| (l, s * f + shift)).collect();
        let x = bst_extrapolate(&pts, Omega::Fixed(1.0)).unwrap().estimate;
        let y = bst_extrapolate(&mapped, Omega::Fixed(1.0)).unwrap().estimate;
        prop_assert!((y - (s * x + shift)).abs() < 1e-9 * (1.0 + y.abs()));
    }
}

#[test]
fn permutation_squares_to_identity() {
    let p = graded_permutation();
    assert_eq!(p.mul(&p).matrix(), GradedOperator::identity(2).matrix());
}
