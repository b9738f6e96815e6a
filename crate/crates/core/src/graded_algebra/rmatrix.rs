use nalgebra::DMatrix;

use super::{GradedOperator, Grading, LOCAL_DIM};
use crate::params::C64;

/// `(Π)_{(a α),(b β)} = δ_{a β} δ_{α b} (-1)^{ε_b ε_β}` on two factors.
pub fn graded_permutation() -> GradedOperator {
    let g = Grading::SU12;
    let d = LOCAL_DIM * LOCAL_DIM;
    let mut m = DMatrix::zeros(d, d);
    for a in 0..LOCAL_DIM {
        for alpha in 0..LOCAL_DIM {
            // b = alpha, beta = a
            let s = if g.parity(alpha) & g.parity(a) == 1 { -1.0 } else { 1.0 };
            m[(a * LOCAL_DIM + alpha, alpha * LOCAL_DIM + a)] = C64::new(s, 0.0);
        }
    }
    GradedOperator::from_matrix(2, m).expect("9x9 by construction")
}

/// `R(u) = u + η Π`.
pub fn r_matrix(u: C64, eta: f64) -> GradedOperator {
    let p = graded_permutation();
    let d = LOCAL_DIM * LOCAL_DIM;
    let m = DMatrix::<C64>::identity(d, d) * u + p.matrix() * C64::new(eta, 0.0);
    GradedOperator::from_matrix(2, m).expect("9x9 by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(a: usize, alpha: usize) -> usize {
        a * LOCAL_DIM + alpha
    }

    #[test]
    fn permutation_entries() {
        let p = graded_permutation();
        assert_eq!(p.entry(idx(0, 0), idx(0, 0)), C64::new(1.0, 0.0));
        assert_eq!(p.entry(idx(1, 2), idx(2, 1)), C64::new(-1.0, 0.0));
        assert_eq!(p.entry(idx(0, 1), idx(1, 0)), C64::new(1.0, 0.0));
        assert_eq!(p.entry(idx(1, 1), idx(1, 1)), C64::new(-1.0, 0.0));
        assert_eq!(p.mul(&p), GradedOperator::identity(2));
    }

    #[test]
    fn initial_condition_and_trivial_eta() {
        let eta = 0.7;
        let r0 = r_matrix(C64::new(0.0, 0.0), eta);
        assert_eq!(r0, graded_permutation().scale(C64::new(eta, 0.0)));
        assert_eq!(r_matrix(C64::new(1.0, 0.0), 0.0), GradedOperator::identity(2));
    }

    #[test]
    fn r21_equals_r12() {
        let r = r_matrix(C64::new(0.3, -1.1), 1.0);
        let swapped = r.embed(&[1, 0], 2).unwrap();
        assert!(swapped.relative_distance(&r) < 1e-15);
    }
}
