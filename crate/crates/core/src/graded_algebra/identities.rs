use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{k_minus, k_plus, r_matrix, GradedOperator};
use crate::error::{Error, Result};
use crate::params::{BoundaryParams, C64};

/// Largest residual seen for one identity.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub residuals: Vec<IdentityResidual>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.passed)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.max_residual)
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> C64 {
    // uniform in the disk |u| <= 2
    let r = 2.0 * rng.random::<f64>().sqrt();
    let t = rng.random_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, t)
}

fn r_at(u: C64, eta: f64, positions: &[usize], total: usize) -> GradedOperator {
    r_matrix(u, eta).embed(positions, total).expect("positions are valid")
}

pub(crate) fn ybe_residual(u: C64, v: C64, eta: f64) -> f64 {
    let r12 = r_at(u - v, eta, &[0, 1], 3);
    let r13 = r_at(u, eta, &[0, 2], 3);
    let r23 = r_at(v, eta, &[1, 2], 3);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    lhs.relative_distance(&rhs)
}

pub(crate) fn unitarity_residual(u: C64, eta: f64) -> f64 {
    let lhs = r_at(u, eta, &[0, 1], 2).mul(&r_at(-u, eta, &[1, 0], 2));
    let rho = -(u - eta) * (u + eta);
    lhs.relative_distance(&GradedOperator::identity(2).scale(rho))
}

pub(crate) fn crossing_residual(u: C64, eta: f64) -> Result<f64> {
    let a = r_at(-u + eta, eta, &[0, 1], 2).super_transpose(0)?;
    let b = r_at(u, eta, &[1, 0], 2).super_transpose(0)?;
    let rho = -u * (u - eta);
    Ok(a.mul(&b).relative_distance(&GradedOperator::identity(2).scale(rho)))
}

pub(crate) fn re_residual(u: C64, v: C64, params: &BoundaryParams) -> Result<f64> {
    let eta = params.eta;
    let k1 = k_minus(u, params).embed(&[0], 2)?;
    let k2 = k_minus(v, params).embed(&[1], 2)?;
    let lhs = r_at(u - v, eta, &[0, 1], 2)
        .mul(&k1)
        .mul(&r_at(u + v, eta, &[1, 0], 2))
        .mul(&k2);
    let rhs = k2
        .mul(&r_at(u + v, eta, &[0, 1], 2))
        .mul(&k1)
        .mul(&r_at(u - v, eta, &[1, 0], 2));
    Ok(lhs.relative_distance(&rhs))
}

pub(crate) fn dual_re_residual(u: C64, v: C64, params: &BoundaryParams) -> Result<f64> {
    let eta = params.eta;
    let k1 = k_plus(v, params).embed(&[0], 2)?;
    let k2 = k_plus(u, params).embed(&[1], 2)?;
    let e = C64::new(eta, 0.0);
    let lhs = r_at(u - v, eta, &[0, 1], 2)
        .mul(&k1)
        .mul(&r_at(e - u - v, eta, &[1, 0], 2))
        .mul(&k2);
    let rhs = k2
        .mul(&r_at(e - u - v, eta, &[0, 1], 2))
        .mul(&k1)
        .mul(&r_at(u - v, eta, &[1, 0], 2));
    Ok(lhs.relative_distance(&rhs))
}

/// Checks the Yang-Baxter, unitarity, crossing-unitarity, reflection and dual
/// reflection equations at `samples` random points `(u, v)` with `|u|, |v| <= 2`.
///
/// Residuals are `max|lhs - rhs| / max(1, max|lhs|)`.
pub fn verify_identities(params: &BoundaryParams, samples: usize, tol: f64, seed: u64) -> Result<IdentityReport> {
    if samples == 0 {
        return Err(Error::validation("samples must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 5];
    let eta = params.eta;
    for _ in 0..samples {
        let u = random_point(&mut rng);
        let v = random_point(&mut rng);
        let r = [
            ybe_residual(u, v, eta),
            unitarity_residual(u, eta),
            crossing_residual(u, eta)?,
            re_residual(u, v, params)?,
            dual_re_residual(u, v, params)?,
        ];
        for (w, x) in worst.iter_mut().zip(r) {
            // NaN must not slip through as "small"
            *w = if x.is_nan() { f64::INFINITY } else { w.max(x) };
        }
    }
    let names = ["yang_baxter", "unitarity", "crossing_unitarity", "reflection", "dual_reflection"];
    Ok(IdentityReport {
        samples,
        tol,
        seed,
        residuals: names
            .iter()
            .zip(worst)
            .map(|(&name, max_residual)| IdentityResidual {
                name,
                max_residual,
                passed: max_residual <= tol,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::KCouplings;
    use crate::presets::table_one;

    #[test]
    fn table_one_parameters_pass() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let report = verify_identities(&p, 20, 1e-12, 7).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn broken_constraint_fails_reflection() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let k = *p.left();
        let broken = p.with_left_couplings(KCouplings {
            c1: k.c1 + 1e-3,
            ..k
        });
        let report = verify_identities(&broken, 5, 1e-10, 7).unwrap();
        assert!(report.get("reflection").unwrap() > 1e-10);
        assert!(report.get("yang_baxter").unwrap() <= 1e-12);
    }

    #[test]
    fn coincident_points() {
        let p = BoundaryParams::new(table_one()).unwrap();
        let u = C64::new(0.4, 0.9);
        assert!(re_residual(u, u, &p).unwrap() <= 1e-12);
        assert!(dual_re_residual(u, u, &p).unwrap() <= 1e-12);
    }

    #[test]
    fn zero_samples_rejected() {
        let p = BoundaryParams::new(table_one()).unwrap();
        assert!(verify_identities(&p, 0, 1e-10, 1).unwrap_err().is_validation());
    }
}
