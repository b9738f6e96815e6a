//! The inhomogeneous T-Q relation and the Bethe equations it implies.

use super::dual::{Dual, Scalar};
use super::BetheRoots;
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, C64};

/// Parameter values entering the T-Q relation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Coeffs {
    pub eta: f64,
    pub xi: f64,
    pub xp: f64,
    pub h: C64,
    pub sites: u32,
}

impl Coeffs {
    pub fn new(params: &BoundaryParams, sites: usize) -> Self {
        Coeffs {
            eta: params.eta,
            xi: params.xi,
            xp: params.xi_prime,
            h: params.h(),
            sites: sites as u32,
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Q(u) = Π (u - v)(u + v + η)`
pub(crate) fn q<S: Scalar>(u: S, v: &[S], eta: f64) -> S {
    v.iter().fold(S::real(1.0), |acc, &x| acc * (u - x) * (u + x + c(eta)))
}

/// `Q1(u) = Π (u - λ)(u + λ)`
pub(crate) fn q1<S: Scalar>(u: S, lam: &[S]) -> S {
    lam.iter().fold(S::real(1.0), |acc, &x| acc * (u - x) * (u + x))
}

pub(crate) fn lambda_generic<S: Scalar>(u: S, v: &[S], lam: &[S], k: &Coeffs) -> S {
    let (eta, xi, xp) = (c(k.eta), c(k.xi), c(k.xp));
    let two_l = 2 * k.sites;
    let w3 = -u + xp - S::constant(eta * (xp * 2.0 - eta)) / (u * c(2.0) + eta);
    let abar = (u - eta / 2.0) / (u + eta / 2.0) * (u + xp) * (u + xi);
    let dbar = (u - xp) * (u - xi);
    let qu = q(u, v, k.eta);
    let qm = q(u - eta, v, k.eta);
    let q1u = q1(u, lam);
    let q1p = q1(u + eta, lam);
    let q1m = q1(u - eta, lam);
    let u2l = u.powi(two_l);
    w3 * (u + xi) * (u + eta).powi(two_l) * qm / qu - u2l * abar * qm * q1p / (qu * q1u) - u2l * dbar * q1m / q1u
        + u2l * u * (u - eta / 2.0) * qm / q1u * (k.h * 2.0)
}

/// `Λ(u)` for the given roots.
pub fn eval_lambda(u: C64, roots: &BetheRoots) -> Result<C64> {
    let k = Coeffs::new(&roots.params, roots.sites);
    let tiny = 1e-300;
    if q(u, &roots.v, k.eta).norm() < tiny || q1(u, &roots.lam).norm() < tiny || (u * 2.0 + k.eta).norm() < tiny {
        return Err(Error::Pole { re: u.re, im: u.im });
    }
    Ok(lambda_generic(u, &roots.v, &roots.lam, &k))
}

/// The two additive terms of the charge-root equation at `x = v_j`:
/// `(x - ξ' + η)(x + η)^{2L} Q1(x) + x^{2L} (x + ξ') Q1(x + η) = 0`.
///
/// This is the vanishing residue of `Λ` at `u = v_j` with the common factors
/// `(x - η/2)(x + ξ)/(x + η/2)` divided out.
pub(crate) fn charge_terms<S: Scalar>(x: S, lam: &[S], k: &Coeffs) -> [S; 2] {
    let (eta, xp) = (c(k.eta), c(k.xp));
    let two_l = 2 * k.sites;
    [
        (x - xp + eta) * (x + eta).powi(two_l) * q1(x, lam),
        x.powi(two_l) * (x + xp) * q1(x + eta, lam),
    ]
}

/// The three additive terms of the spin-root equation at `x = λ_l`, multiplied by `(x + η/2)`.
pub(crate) fn spin_terms<S: Scalar>(x: S, v: &[S], lam: &[S], k: &Coeffs) -> [S; 3] {
    let (eta, xi, xp) = (c(k.eta), c(k.xi), c(k.xp));
    let half = eta / 2.0;
    let qx = q(x, v, k.eta);
    let qm = q(x - eta, v, k.eta);
    [
        (x - half) * (x + xp) * (x + xi) * qm * q1(x + eta, lam),
        (x + half) * (x - xp) * (x - xi) * qx * q1(x - eta, lam),
        -(x * (x - half) * (x + half) * qx * qm * (k.h * 2.0)),
    ]
}

fn relative<S: Scalar, const N: usize>(terms: [S; N]) -> C64 {
    let sum = terms.iter().fold(C64::new(0.0, 0.0), |a, t| a + t.value());
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.value().norm()));
    if scale == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        sum / scale
    }
}

/// Relative residuals of the charge and spin equations, each divided by the
/// largest additive term of its equation.
pub fn bae_residuals(roots: &BetheRoots) -> (Vec<C64>, Vec<C64>) {
    let k = Coeffs::new(&roots.params, roots.sites);
    let charge = roots.v.iter().map(|&x| relative(charge_terms(x, &roots.lam, &k))).collect();
    let spin = roots.lam.iter().map(|&x| relative(spin_terms(x, &roots.v, &roots.lam, &k))).collect();
    (charge, spin)
}

/// Largest modulus among all relative residuals (0 for the empty configuration).
pub fn max_relative_residual(roots: &BetheRoots) -> f64 {
    let (a, b) = bae_residuals(roots);
    a.iter().chain(&b).map(|z| if z.is_nan() { f64::INFINITY } else { z.norm() }).fold(0.0, f64::max)
}

/// Tolerance on the imaginary part of the energy sum.
pub const ENERGY_IMAG_TOL: f64 = 1e-8;

/// `E = Σ η² / (v (v + η)) + 2M`.
pub fn energy_from_roots(roots: &BetheRoots) -> Result<f64> {
    let eta = roots.params.eta;
    let sum = roots
        .v
        .iter()
        .fold(C64::new(0.0, 0.0), |acc, &v| acc + eta * eta / (v * (v + eta)));
    let e = sum + 2.0 * roots.m() as f64;
    if !e.re.is_finite() || !e.im.is_finite() {
        return Err(Error::Unphysical("energy diverges (root at 0 or -eta)".into()));
    }
    if e.im.abs() > ENERGY_IMAG_TOL * e.re.abs().max(1.0) {
        return Err(Error::Unphysical(format!("energy has imaginary part {:e}", e.im)));
    }
    Ok(e.re)
}

/// Energy read off `Λ` through the logarithmic derivative at `u = 0`.
pub fn energy_from_lambda(roots: &BetheRoots) -> Result<C64> {
    let k = Coeffs::new(&roots.params, roots.sites);
    let lift = |zs: &[C64]| zs.iter().map(|&z| Dual::constant(z)).collect::<Vec<_>>();
    let l = lambda_generic(Dual::variable(C64::new(0.0, 0.0)), &lift(&roots.v), &lift(&roots.lam), &k);
    if l.re.norm() == 0.0 || !l.re.is_finite() {
        return Err(Error::Pole { re: 0.0, im: 0.0 });
    }
    let p = &roots.params;
    let constant = -p.eta / (2.0 * p.xi) + (p.eta - 2.0 * p.xi_prime) / (2.0 * (p.eta - p.xi_prime))
        - roots.sites as f64
        + 1.0
        + 2.0 * roots.m() as f64;
    Ok(l.eps / l.re * (p.eta / 2.0) + constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RawParams;
    use crate::presets::table_one;

    fn params() -> BoundaryParams {
        BoundaryParams::new(table_one()).unwrap()
    }

    #[test]
    fn empty_configuration() {
        let r = BetheRoots::empty(params(), 2);
        assert_eq!(energy_from_roots(&r).unwrap(), 0.0);
        assert!((energy_from_lambda(&r).unwrap() - 0.0).norm() < 1e-12);
        assert_eq!(max_relative_residual(&r), 0.0);
    }

    #[test]
    fn single_root_energy() {
        let r = BetheRoots::new(vec![C64::new(-0.5, -0.5801)], vec![C64::new(0.1, 0.0)], params(), 2);
        // dE/d(Im v) ≈ 3.4, so rounding v to 4 decimals moves E by up to 1.7e-4
        assert!((energy_from_roots(&r).unwrap() - 0.295101).abs() < 1.7e-4);
        let far = BetheRoots::new(vec![C64::new(-0.5, 1e8)], vec![], params(), 2);
        assert!((energy_from_roots(&far).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_energy_is_unphysical() {
        let r = BetheRoots::new(vec![C64::new(0.3, 0.4)], vec![], params(), 2);
        assert!(matches!(energy_from_roots(&r), Err(Error::Unphysical(_))));
    }

    #[test]
    fn inhomogeneous_term_vanishes_for_parallel_fields() {
        let raw = RawParams {
            theta_prime: table_one().theta,
            phi_prime: table_one().phi,
            ..table_one()
        };
        let p = BoundaryParams::new(raw).unwrap();
        assert_eq!(p.h(), C64::new(0.0, 0.0));
        let k = Coeffs::new(&p, 2);
        let v = [C64::new(-0.5, 0.3)];
        let lam = [C64::new(0.7, 0.1)];
        let terms = spin_terms(C64::new(0.2, 0.9), &v, &lam, &k);
        assert_eq!(terms[2], C64::new(0.0, 0.0));
    }

    #[test]
    fn reflection_of_a_charge_root_leaves_lambda_unchanged() {
        let p = params();
        let a = BetheRoots::new(vec![C64::new(0.2, 0.3)], vec![C64::new(0.4, -0.1)], p, 2);
        let b = BetheRoots::new(vec![C64::new(-1.2, -0.3)], vec![C64::new(-0.4, 0.1)], p, 2);
        for u in [C64::new(0.7, 0.1), C64::new(-0.3, 1.2)] {
            let la = eval_lambda(u, &a).unwrap();
            let lb = eval_lambda(u, &b).unwrap();
            assert!((la - lb).norm() <= 1e-10 * la.norm().max(1.0));
        }
    }

    #[test]
    fn pole_is_reported() {
        let r = BetheRoots::new(vec![C64::new(0.2, 0.0)], vec![], params(), 2);
        assert!(matches!(eval_lambda(C64::new(0.2, 0.0), &r), Err(Error::Pole { .. })));
    }
}
