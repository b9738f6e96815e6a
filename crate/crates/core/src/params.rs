//! Boundary parameters of the open chain and the couplings derived from them.
//!
//! The left reflection matrix is fixed by `(xi, theta, phi)` and the right one
//! by `(xi_prime, theta_prime, phi_prime, epsilon)`. The angle form solves the
//! integrability constraint `c^2 + 4 c1 c2 = 1` identically; the raw couplings
//! can still be overridden for diagnostics that deliberately break it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Sign of `h1 . hL`, selecting the branch of the right boundary couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSign {
    Plus,
    Minus,
}

impl FieldSign {
    pub fn value(self) -> f64 {
        match self {
            FieldSign::Plus => 1.0,
            FieldSign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 1.0 {
            Ok(FieldSign::Plus)
        } else if v == -1.0 {
            Ok(FieldSign::Minus)
        } else {
            Err(Error::validation(format!("epsilon must be +1 or -1, got {v}")))
        }
    }
}

/// The three couplings `(c, c1, c2)` of one reflection matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KCouplings {
    pub c: C64,
    pub c1: C64,
    pub c2: C64,
}

impl KCouplings {
    /// `c^2 + 4 c1 c2 - 1`; zero whenever the reflection equation holds.
    pub fn constraint_defect(&self) -> C64 {
        self.c * self.c + 4.0 * self.c1 * self.c2 - 1.0
    }
}

/// Physical inputs as they appear in a run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub eta: f64,
    pub xi: f64,
    pub theta: f64,
    pub phi: f64,
    pub xi_prime: f64,
    pub theta_prime: f64,
    pub phi_prime: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryParams {
    pub eta: f64,
    pub xi: f64,
    pub theta: f64,
    pub phi: f64,
    pub xi_prime: f64,
    pub theta_prime: f64,
    pub phi_prime: f64,
    pub epsilon: FieldSign,
    left: KCouplings,
    right: KCouplings,
    h: C64,
    overridden: bool,
}

impl BoundaryParams {
    /// Builds and validates a parameter set.
    ///
    /// The admissible `(xi, xi_prime)` regions depend on `epsilon`:
    /// `+1` needs `xi < 0, xi' < 1` or `xi > 0, xi' > 1`; `-1` needs
    /// `xi < 0, xi' > 1` or `xi > 0, xi' < 1`.
    pub fn new(raw: RawParams) -> Result<Self> {
        let RawParams {
            eta,
            xi,
            theta,
            phi,
            xi_prime,
            theta_prime,
            phi_prime,
            epsilon,
        } = raw;
        for (name, v) in [
            ("eta", eta),
            ("xi", xi),
            ("theta", theta),
            ("phi", phi),
            ("xi_prime", xi_prime),
            ("theta_prime", theta_prime),
            ("phi_prime", phi_prime),
        ] {
            if !v.is_finite() {
                return Err(Error::validation(format!("{name} must be finite, got {v}")));
            }
        }
        if eta == 0.0 {
            return Err(Error::validation("eta must be nonzero"));
        }
        if xi == 0.0 {
            return Err(Error::validation("xi must be nonzero (chi_1 diverges)"));
        }
        if xi_prime == eta {
            return Err(Error::validation("xi_prime must differ from eta (chi_L diverges)"));
        }
        let sign = FieldSign::from_value(epsilon)?;
        let allowed = match sign {
            FieldSign::Plus => (xi < 0.0 && xi_prime < 1.0) || (xi > 0.0 && xi_prime > 1.0),
            FieldSign::Minus => (xi < 0.0 && xi_prime > 1.0) || (xi > 0.0 && xi_prime < 1.0),
        };
        if !allowed {
            return Err(Error::validation(format!(
                "(xi, xi_prime) = ({xi}, {xi_prime}) is outside the admissible region for epsilon = {epsilon}"
            )));
        }

        let e = sign.value();
        let left = KCouplings {
            c: C64::new(theta.cos(), 0.0),
            c1: C64::from_polar(theta.sin() / 2.0, phi),
            c2: C64::from_polar(theta.sin() / 2.0, -phi),
        };
        let right = KCouplings {
            c: C64::new(-e * theta_prime.cos(), 0.0),
            c1: C64::from_polar(-e * theta_prime.sin() / 2.0, phi_prime),
            c2: C64::from_polar(-e * theta_prime.sin() / 2.0, -phi_prime),
        };
        let h = C64::new(angle_form_h(theta, phi, theta_prime, phi_prime, sign), 0.0);
        Ok(BoundaryParams {
            eta,
            xi,
            theta,
            phi,
            xi_prime,
            theta_prime,
            phi_prime,
            epsilon: sign,
            left,
            right,
            h,
            overridden: false,
        })
    }

    /// Replaces the left couplings verbatim. No constraint check is made.
    pub fn with_left_couplings(mut self, left: KCouplings) -> Self {
        self.left = left;
        self.h = generic_h(&self.left, &self.right);
        self.overridden = true;
        self
    }

    /// Replaces the right couplings verbatim. No constraint check is made.
    pub fn with_right_couplings(mut self, right: KCouplings) -> Self {
        self.right = right;
        self.h = generic_h(&self.left, &self.right);
        self.overridden = true;
        self
    }

    pub fn raw(&self) -> RawParams {
        RawParams {
            eta: self.eta,
            xi: self.xi,
            theta: self.theta,
            phi: self.phi,
            xi_prime: self.xi_prime,
            theta_prime: self.theta_prime,
            phi_prime: self.phi_prime,
            epsilon: self.epsilon.value(),
        }
    }

    pub fn left(&self) -> &KCouplings {
        &self.left
    }

    pub fn right(&self) -> &KCouplings {
        &self.right
    }

    pub fn couplings_overridden(&self) -> bool {
        self.overridden
    }

    /// Coefficient of the inhomogeneous term, `1 + c c' + 2 c1 c2' + 2 c1' c2`.
    pub fn h(&self) -> C64 {
        self.h
    }

    /// True when the boundary fields are parallel or anti-parallel.
    pub fn is_diagonalizable_pair(&self) -> bool {
        self.h == C64::new(0.0, 0.0)
    }

    /// Bulk-independent scale of the left boundary terms, `eta / (2 xi)`.
    pub fn left_scale(&self) -> f64 {
        self.eta / (2.0 * self.xi)
    }

    /// `eta / (2 (eta - xi'))`.
    pub fn right_scale(&self) -> f64 {
        self.eta / (2.0 * (self.eta - self.xi_prime))
    }

    pub fn chi_1(&self) -> f64 {
        1.0 - self.left_scale()
    }

    pub fn chi_l(&self) -> f64 {
        1.0 - self.right_scale()
    }

    /// Left boundary field `(h^x, h^y, h^z)`; complex only for overridden couplings.
    pub fn field_1(&self) -> [C64; 3] {
        field(self.left_scale(), &self.left)
    }

    pub fn field_l(&self) -> [C64; 3] {
        field(self.right_scale(), &self.right)
    }

    /// `zeta = eta/2 - xi'`, the boundary parameter of the ground-state analysis.
    pub fn zeta(&self) -> f64 {
        self.eta / 2.0 - self.xi_prime
    }

    /// The same parameters with the right field turned parallel to the left one.
    pub fn parallel_counterpart(&self) -> Result<Self> {
        BoundaryParams::new(RawParams {
            theta_prime: self.theta,
            phi_prime: self.phi,
            epsilon: 1.0,
            ..self.raw()
        })
    }
}

fn field(scale: f64, k: &KCouplings) -> [C64; 3] {
    let i = C64::i();
    [scale * (k.c2 + k.c1), scale * (k.c2 - k.c1) * i, -scale * k.c]
}

fn generic_h(left: &KCouplings, right: &KCouplings) -> C64 {
    1.0 + left.c * right.c + 2.0 * left.c1 * right.c2 + 2.0 * right.c1 * left.c2
}

/// `1 - eps [cos t cos t' + sin t sin t' cos(p - p')]`, rearranged into sums
/// of squares so that parallel and anti-parallel fields give zero exactly.
fn angle_form_h(theta: f64, phi: f64, theta_p: f64, phi_p: f64, sign: FieldSign) -> f64 {
    let dphi = phi - phi_p;
    match sign {
        FieldSign::Plus => {
            let a = ((theta - theta_p) / 2.0).sin();
            let b = (dphi / 2.0).sin();
            2.0 * a * a + 2.0 * theta.sin() * theta_p.sin() * b * b
        }
        FieldSign::Minus => {
            let a = ((theta + theta_p) / 2.0).cos();
            let b = (dphi / 2.0).cos();
            2.0 * a * a + 2.0 * theta.sin() * theta_p.sin() * b * b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::table_one;
    use std::f64::consts::PI;

    #[test]
    fn constraints_hold_by_construction() {
        let p = BoundaryParams::new(table_one()).unwrap();
        assert!(p.left().constraint_defect().norm() < 1e-15);
        assert!(p.right().constraint_defect().norm() < 1e-15);
    }

    #[test]
    fn h_matches_coupling_form() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let g = generic_h(p.left(), p.right());
        assert!((g - p.h()).norm() < 1e-14, "{g} vs {}", p.h());
    }

    #[test]
    fn region_rules() {
        let mut raw = table_one();
        raw.xi = -0.6;
        assert!(BoundaryParams::new(raw).unwrap_err().is_validation());
        raw.xi_prime = 0.4;
        assert!(BoundaryParams::new(raw).is_ok());
        raw.epsilon = -1.0;
        assert!(BoundaryParams::new(raw).is_err());
        raw.xi_prime = 1.4;
        assert!(BoundaryParams::new(raw).is_ok());
        raw.epsilon = 0.5;
        assert!(BoundaryParams::new(raw).is_err());
    }

    #[test]
    fn parallel_and_antiparallel_fields_give_zero_h() {
        let mut raw = table_one();
        raw.theta_prime = raw.theta;
        raw.phi_prime = raw.phi;
        assert_eq!(BoundaryParams::new(raw).unwrap().h(), C64::new(0.0, 0.0));

        raw.epsilon = -1.0;
        raw.xi_prime = 0.5;
        raw.theta_prime = PI - raw.theta;
        raw.phi_prime = raw.phi + PI;
        let h = BoundaryParams::new(raw).unwrap().h();
        assert!(h.norm() < 1e-30, "{h}");
    }

    #[test]
    fn chemical_potential_signs_at_unit_eta() {
        let mut raw = table_one();
        raw.xi = -0.1;
        raw.xi_prime = 0.3;
        let p = BoundaryParams::new(raw).unwrap();
        assert!(p.chi_1() > 1.0);
        assert!(p.chi_l() >= 0.0 && p.chi_l() < 1.0);
        raw.xi_prime = 0.5;
        assert_eq!(BoundaryParams::new(raw).unwrap().chi_l(), 0.0);
        raw.xi_prime = 0.75;
        assert!(BoundaryParams::new(raw).unwrap().chi_l() < 0.0);
    }

    #[test]
    fn fields_are_real_for_angle_parameters() {
        let p = BoundaryParams::new(table_one()).unwrap();
        for comp in p.field_1().iter().chain(p.field_l().iter()) {
            assert!(comp.im.abs() < 1e-15);
        }
        // h1^z = -(eta / 2 xi) cos(theta)
        assert!((p.field_1()[2].re + p.left_scale() * (PI / 5.0).cos()).abs() < 1e-15);
    }
}
