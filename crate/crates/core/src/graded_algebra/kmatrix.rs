use nalgebra::DMatrix;

use super::GradedOperator;
use crate::params::{BoundaryParams, C64};

fn three_by_three(rows: [[C64; 3]; 3]) -> GradedOperator {
    let m = DMatrix::from_fn(3, 3, |i, j| rows[i][j]);
    GradedOperator::from_matrix(1, m).expect("3x3 by construction")
}

/// Left reflection matrix.
pub fn k_minus(u: C64, params: &BoundaryParams) -> GradedOperator {
    let k = params.left();
    let xi = C64::new(params.xi, 0.0);
    let z = C64::new(0.0, 0.0);
    three_by_three([
        [xi + u, z, z],
        [z, xi + k.c * u, 2.0 * k.c1 * u],
        [z, 2.0 * k.c2 * u, xi - k.c * u],
    ])
}

/// `d K^-(u) / du`; constant in `u`.
pub fn k_minus_derivative(params: &BoundaryParams) -> GradedOperator {
    let k = params.left();
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    three_by_three([[one, z, z], [z, k.c, 2.0 * k.c1], [z, 2.0 * k.c2, -k.c]])
}

/// Right (dual) reflection matrix.
pub fn k_plus(u: C64, params: &BoundaryParams) -> GradedOperator {
    let k = params.right();
    let xp = C64::new(params.xi_prime, 0.0);
    let half = C64::new(params.eta / 2.0, 0.0);
    let w = half - u;
    let z = C64::new(0.0, 0.0);
    three_by_three([
        [xp - u, z, z],
        [z, xp - half + k.c * w, 2.0 * k.c1 * w],
        [z, 2.0 * k.c2 * w, xp - half - k.c * w],
    ])
}

pub fn k_plus_derivative(params: &BoundaryParams) -> GradedOperator {
    let k = params.right();
    let z = C64::new(0.0, 0.0);
    let m1 = C64::new(-1.0, 0.0);
    three_by_three([[m1, z, z], [z, -k.c, -2.0 * k.c1], [z, -2.0 * k.c2, k.c]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::table_one;

    #[test]
    fn k_minus_at_zero_is_xi() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let k = k_minus(C64::new(0.0, 0.0), &p);
        assert_eq!(k, GradedOperator::identity(1).scale(C64::new(p.xi, 0.0)));
    }

    #[test]
    fn k_plus_at_half_eta_is_scalar() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let k = k_plus(C64::new(p.eta / 2.0, 0.0), &p);
        let expected = GradedOperator::identity(1).scale(C64::new(p.xi_prime - p.eta / 2.0, 0.0));
        assert!(k.relative_distance(&expected) < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let u = C64::new(0.3, 0.2);
        let h = C64::new(1e-3, 0.0);
        // both matrices are linear, so the difference quotient is exact up to rounding
        let fd_m = k_minus(u + h, &p).sub(&k_minus(u, &p)).scale(1.0 / h);
        let fd_p = k_plus(u + h, &p).sub(&k_plus(u, &p)).scale(1.0 / h);
        assert!(fd_m.relative_distance(&k_minus_derivative(&p)) < 1e-12);
        assert!(fd_p.relative_distance(&k_plus_derivative(&p)) < 1e-12);
    }
}
