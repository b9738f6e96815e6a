//! Recovering Bethe roots from a sampled transfer-matrix eigenvalue.
//!
//! Given `Λ(u)` at a set of points, the monic polynomials `Q` (in
//! `w = u(u + η)`) and `Q1` (in `u²`) are fitted so that the T-Q relation holds
//! at every sample; their zeros are then used as Newton seeds.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dual::{Dual, Scalar};
use super::relation::Coeffs;
use super::solve::random_start;
use crate::params::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Monic polynomial `x^n + Σ a_k x^k`.
fn monic<S: Scalar>(coeffs: &[S], x: S) -> S {
    coeffs.iter().rev().fold(S::real(1.0), |acc, &a| acc * x + a)
}

struct Problem<'a> {
    samples: &'a [(C64, C64)],
    m: usize,
    k: Coeffs,
}

impl Problem<'_> {
    /// Polynomial-cleared T-Q relation at one sample, relative to the size
    /// of its terms. The scale is frozen at the current point, so it does not
    /// enter the Jacobian.
    fn residual<S: Scalar>(&self, z: &[S], u: C64, lambda: C64) -> S {
        let terms = self.terms(z, u, lambda);
        let scale: f64 = terms.iter().map(|t| t.value().norm()).sum::<f64>() + f64::MIN_POSITIVE;
        terms.into_iter().fold(S::real(0.0), |acc, t| acc + t) * c(1.0 / scale)
    }

    /// The five additive terms of the cleared relation; they sum to zero on a solution.
    fn terms<S: Scalar>(&self, z: &[S], u: C64, lambda: C64) -> [S; 5] {
        let k = &self.k;
        let (q, r) = z.split_at(self.m);
        let (eta, xi, xp) = (c(k.eta), c(k.xi), c(k.xp));
        let two_l = 2 * k.sites;
        let qf = |x: C64| monic(q, S::constant(x * (x + eta)));
        let q1f = |x: C64| monic(r, S::constant(x * x));
        let (qu, qm) = (qf(u), qf(u - eta));
        let (q1u, q1p, q1m) = (q1f(u), q1f(u + eta), q1f(u - eta));
        let a = u * 2.0 + eta;
        let w = (xp - u) * a - eta * (xp * 2.0 - eta);
        let u2l = u.powu(two_l);
        [
            qu * q1u * (a * lambda),
            -(qm * q1u * (w * (xi + u) * (u + eta).powu(two_l))),
            qm * q1p * (u2l * (u * 2.0 - eta) * (u + xp) * (u + xi)),
            qu * q1m * (a * u2l * (u - xp) * (u - xi)),
            -(qu * qm * (k.h * 2.0 * a * u2l * u * (u - eta / 2.0))),
        ]
    }

    /// Best spin coefficients for fixed charge coefficients.
    ///
    /// The relation is affine in the coefficients of `Q1`, so this is a linear
    /// least-squares problem; rows are weighted by the term sizes at `z`.
    fn spin_given_charge(&self, z: &[C64]) -> Option<(Vec<C64>, f64)> {
        let (q, r) = z.split_at(self.m);
        let nr = r.len();
        let sum = |zz: &[C64], u: C64, l: C64| self.terms(zz, u, l).into_iter().sum::<C64>();
        let mut a = DMatrix::zeros(self.samples.len(), nr);
        let mut b = DVector::zeros(self.samples.len());
        let mut trial: Vec<C64> = q.iter().copied().chain(std::iter::repeat_n(c(0.0), nr)).collect();
        for (row, &(u, l)) in self.samples.iter().enumerate() {
            let weight = 1.0 / (self.terms(z, u, l).iter().map(|t| t.norm()).sum::<f64>() + f64::MIN_POSITIVE);
            trial[self.m..].iter_mut().for_each(|x| *x = c(0.0));
            let base = sum(&trial, u, l);
            b[row] = -base * weight;
            for col in 0..nr {
                trial[self.m + col] = c(1.0);
                a[(row, col)] = (sum(&trial, u, l) - base) * weight;
                trial[self.m + col] = c(0.0);
            }
        }
        let r = if nr == 0 {
            DVector::zeros(0)
        } else {
            a.clone().svd(true, true).solve(&b, 1e-14).ok()?
        };
        let cost = (&a * &r - &b).norm_squared();
        Some((r.iter().copied().collect(), cost))
    }

    fn values(&self, z: &[C64]) -> DVector<C64> {
        DVector::from_iterator(self.samples.len(), self.samples.iter().map(|&(u, l)| self.residual(z, u, l)))
    }

    fn jacobian(&self, z: &[C64]) -> DMatrix<C64> {
        let n = z.len();
        let mut jac = DMatrix::zeros(self.samples.len(), n);
        for col in 0..n {
            let lifted: Vec<Dual> = z
                .iter()
                .enumerate()
                .map(|(i, &x)| if i == col { Dual::variable(x) } else { Dual::constant(x) })
                .collect();
            for (row, &(u, l)) in self.samples.iter().enumerate() {
                jac[(row, col)] = self.residual(&lifted, u, l).eps;
            }
        }
        jac
    }
}

/// Complex Levenberg-Marquardt from one starting point; returns `(z, cost)`.
fn levenberg_marquardt(p: &Problem, mut z: Vec<C64>) -> (Vec<C64>, f64) {
    let mut f = p.values(&z);
    let mut cost = f.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..3000 {
        if cost < 1e-30 {
            break;
        }
        let jac = p.jacobian(&z);
        let jh = jac.adjoint();
        let a = &jh * &jac;
        let g = &jh * &f;
        let mut improved = false;
        while mu < 1e14 {
            let mut damped = a.clone();
            for i in 0..damped.nrows() {
                damped[(i, i)] += c(mu * (1.0 + a[(i, i)].re));
            }
            let Some(step) = damped.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<C64> = z.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
            let ft = p.values(&trial);
            let ct = ft.norm_squared();
            if ct.is_finite() && ct < cost {
                let rel_gain = (cost - ct) / cost;
                z = trial;
                f = ft;
                cost = ct;
                mu = (mu / 5.0).max(1e-15);
                improved = rel_gain > 1e-14;
                break;
            }
            mu *= 5.0;
        }
        if !improved {
            break;
        }
    }
    (z, cost)
}

/// Low-order coefficients of the monic polynomial with the given zeros.
fn monic_from_roots(zeros: impl Iterator<Item = C64>) -> Vec<C64> {
    let mut p = vec![c(1.0)];
    for r in zeros {
        p.push(c(0.0));
        for i in (1..p.len()).rev() {
            p[i] = p[i - 1] - r * p[i];
        }
        p[0] = -r * p[0];
    }
    p.pop();
    p
}

/// Roots of a monic complex polynomial from its companion matrix.
pub(crate) fn monic_roots(coeffs: &[C64]) -> Option<Vec<C64>> {
    let n = coeffs.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut comp = DMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = c(1.0);
    }
    for (i, &a) in coeffs.iter().enumerate() {
        comp[(i, n - 1)] = -a;
    }
    let schur = nalgebra::Schur::new(comp);
    let (_, t) = schur.unpack();
    let roots: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    roots.iter().all(|r| r.is_finite()).then_some(roots)
}

/// Fits `(v, λ)` with `M` charge and `M̄` spin roots to samples `(u, Λ(u))`.
///
/// Returns the best root candidates and the final normalized cost.
pub(crate) fn fit_roots(
    samples: &[(C64, C64)],
    m: usize,
    mbar: usize,
    k: Coeffs,
    starts: usize,
    seed: u64,
) -> Option<(Vec<C64>, Vec<C64>, f64)> {
    let p = Problem { samples, m, k };
    let n = m + mbar;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<C64>, f64)> = None;
    let target = 1e-24 * samples.len() as f64;
    for attempt in 0..starts.max(1) {
        let z0: Vec<C64> = if attempt % 2 == 0 {
            // coefficients of a plausible root configuration
            let roots = random_start(&mut rng, m, mbar, k.eta);
            let (v, lam) = roots.split_at(m);
            let mut z = monic_from_roots(v.iter().map(|&x| x * (x + k.eta)));
            z.extend(monic_from_roots(lam.iter().map(|&x| x * x)));
            z
        } else {
            (0..n)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    C64::new(3.0 * a, 3.0 * b)
                })
                .collect()
        };
        let (z, cost) = levenberg_marquardt(&p, z0);
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((z, cost));
        }
        if best.as_ref().is_some_and(|(_, b)| *b < target) {
            break;
        }
    }
    let (mut z, mut cost) = best?;
    if let Some((r, c2)) = p.spin_given_charge(&z) {
        if c2 < cost {
            z.truncate(m);
            z.extend(r);
            cost = c2;
        }
    }
    let (q, r) = z.split_at(m);
    let eta = k.eta;
    let v = monic_roots(q)?
        .into_iter()
        .map(|w| (-eta + (c(eta * eta) + w * 4.0).sqrt()) / 2.0)
        .collect();
    let lam = monic_roots(r)?.into_iter().map(|s| s.sqrt()).collect();
    Some((v, lam, cost))
}
