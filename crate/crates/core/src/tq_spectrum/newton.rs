//! Damped Newton iteration on the polynomial form of the nested Bethe equations.

use nalgebra::{DMatrix, DVector};

use super::dual::{Dual, Scalar};
use super::relation::{charge_terms, spin_terms, Coeffs};
use crate::params::C64;

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Stop once the largest relative residual drops below this.
    pub converge: f64,
    /// Largest relative residual for which a run counts as a solution.
    pub accept: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 200,
            converge: 1e-12,
            accept: 1e-10,
        }
    }
}

fn split<S: Copy>(z: &[S], m: usize) -> (&[S], &[S]) {
    z.split_at(m)
}

/// Polynomial residuals `(charge..., spin...)`.
fn equations<S: Scalar>(z: &[S], m: usize, k: &Coeffs) -> Vec<S> {
    let (v, lam) = split(z, m);
    let mut out = Vec::with_capacity(z.len());
    for &x in v {
        let [a, b] = charge_terms(x, lam, k);
        out.push(a + b);
    }
    for &x in lam {
        let [a, b, c] = spin_terms(x, v, lam, k);
        out.push(a + b + c);
    }
    out
}

/// Largest relative residual, each equation scaled by its largest term.
pub(crate) fn relative_residual(z: &[C64], m: usize, k: &Coeffs) -> f64 {
    let (v, lam) = split(z, m);
    let rel = |terms: &[C64]| {
        let scale = terms.iter().fold(0.0f64, |s, t| s.max(t.norm()));
        let sum: C64 = terms.iter().sum();
        if scale == 0.0 {
            0.0
        } else {
            sum.norm() / scale
        }
    };
    let mut worst = 0.0f64;
    for &x in v {
        worst = worst.max(rel(&charge_terms(x, lam, k)));
    }
    for &x in lam {
        worst = worst.max(rel(&spin_terms(x, v, lam, k)));
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}

fn jacobian(z: &[C64], m: usize, k: &Coeffs) -> DMatrix<C64> {
    let n = z.len();
    let mut jac = DMatrix::zeros(n, n);
    for col in 0..n {
        let lifted: Vec<Dual> = z
            .iter()
            .enumerate()
            .map(|(i, &x)| if i == col { Dual::variable(x) } else { Dual::constant(x) })
            .collect();
        for (row, e) in equations(&lifted, m, k).into_iter().enumerate() {
            jac[(row, col)] = e.eps;
        }
    }
    jac
}

/// Result of one Newton run.
#[derive(Debug, Clone)]
pub struct NewtonRun {
    pub z: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
    pub accepted: bool,
}

/// Solves for `z = (v_1..v_M, λ_1..λ_M̄)` from a starting guess.
///
/// Steps come from the exact Jacobian of the polynomial equations; each step
/// is halved until the relative residual decreases.
pub(crate) fn newton(z0: &[C64], m: usize, k: &Coeffs, opts: &NewtonOptions) -> Option<NewtonRun> {
    let mut z = z0.to_vec();
    if z.is_empty() {
        return Some(NewtonRun {
            z,
            residual: 0.0,
            iterations: 0,
            accepted: true,
        });
    }
    let mut res = relative_residual(&z, m, k);
    if !res.is_finite() {
        return None;
    }
    let mut iterations = 0;
    while iterations < opts.max_iterations && res > opts.converge {
        iterations += 1;
        let f = DVector::from_vec(equations(&z, m, k));
        let step = jacobian(&z, m, k).lu().solve(&(-f))?;
        if step.iter().any(|s| !s.is_finite()) {
            return None;
        }
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let trial: Vec<C64> = z.iter().zip(step.iter()).map(|(a, d)| a + d * t).collect();
            let r = relative_residual(&trial, m, k);
            if r < res {
                z = trial;
                res = r;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    Some(NewtonRun {
        accepted: res <= opts.accept,
        z,
        residual: res,
        iterations,
    })
}
