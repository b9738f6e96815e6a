use nalgebra::{DMatrix, DVector};

use super::{build_hamiltonian_with, number_operator, BasisOrdering, LatticeSpec};
use crate::error::{Error, Result};
use crate::graded_algebra::{
    dim, embedded_entries, graded_permutation, k_minus, k_minus_derivative, k_plus, k_plus_derivative,
    GradedOperator, LOCAL_DIM,
};
use crate::params::{BoundaryParams, C64};

/// A graded permutation as a map `x[c] -> sign[c] * y[target[c]]`.
#[derive(Debug, Clone)]
struct SignedPerm {
    target: Vec<u32>,
    sign: Vec<f64>,
}

impl SignedPerm {
    fn of_permutation(positions: [usize; 2], total: usize) -> Self {
        let d = dim(total);
        let mut target = vec![0u32; d];
        let mut sign = vec![0.0; d];
        let entries = embedded_entries(&graded_permutation(), &positions, total).expect("valid positions");
        debug_assert_eq!(entries.len(), d);
        for (r, c, v) in entries {
            target[c] = r as u32;
            sign[c] = v.re;
        }
        SignedPerm { target, sign }
    }
}

/// Matrix-free double-row transfer matrix of an open chain.
///
/// The auxiliary space is the leading tensor factor of an `(L + 1)`-factor
/// space, so its supertrace needs no extra graded sign.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    sites: usize,
    params: BoundaryParams,
    aux_site: Vec<SignedPerm>,
    site_aux: Vec<SignedPerm>,
}

type Dual = (DVector<C64>, Option<DVector<C64>>);

impl TransferMatrix {
    pub fn new(spec: &LatticeSpec) -> Self {
        let total = spec.sites() + 1;
        TransferMatrix {
            sites: spec.sites(),
            params: *spec.params(),
            aux_site: (1..total).map(|j| SignedPerm::of_permutation([0, j], total)).collect(),
            site_aux: (1..total).map(|j| SignedPerm::of_permutation([j, 0], total)).collect(),
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// `R(u) = u + ηΠ` along with its derivative `dR/du = 1`.
    fn apply_r(&self, u: C64, perm: &SignedPerm, (x, dx): Dual) -> Dual {
        let eta = self.params.eta;
        let permute = |v: &DVector<C64>| {
            let mut out = DVector::zeros(v.len());
            for c in 0..v.len() {
                out[perm.target[c] as usize] += v[c] * (perm.sign[c] * eta);
            }
            out
        };
        let y = &x * u + permute(&x);
        let dy = dx.map(|d| &d * u + permute(&d) + &x);
        (y, dy)
    }

    fn apply_aux(k: &GradedOperator, dk: &GradedOperator, (x, dx): Dual) -> Dual {
        let block = x.len() / LOCAL_DIM;
        let apply = |m: &GradedOperator, v: &DVector<C64>| {
            let mut out = DVector::zeros(v.len());
            for i in 0..LOCAL_DIM {
                for j in 0..LOCAL_DIM {
                    let kij = m.entry(i, j);
                    if kij == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for r in 0..block {
                        out[i * block + r] += kij * v[j * block + r];
                    }
                }
            }
            out
        };
        let y = apply(k, &x);
        let dy = dx.map(|d| apply(k, &d) + apply(dk, &x));
        (y, dy)
    }

    fn run(&self, u: C64, psi: &DVector<C64>, derivative: bool) -> Dual {
        let d = psi.len();
        let kp = k_plus(u, &self.params);
        let km = k_minus(u, &self.params);
        let dkp = k_plus_derivative(&self.params);
        let dkm = k_minus_derivative(&self.params);
        let mut out = DVector::zeros(d);
        let mut dout = derivative.then(|| DVector::zeros(d));
        for i in 0..LOCAL_DIM {
            let mut x = DVector::zeros(LOCAL_DIM * d);
            x.rows_mut(i * d, d).copy_from(psi);
            let mut state: Dual = (x, derivative.then(|| DVector::zeros(LOCAL_DIM * d)));
            for perm in self.site_aux.iter().rev() {
                state = self.apply_r(u, perm, state);
            }
            state = Self::apply_aux(&km, &dkm, state);
            for perm in &self.aux_site {
                state = self.apply_r(u, perm, state);
            }
            state = Self::apply_aux(&kp, &dkp, state);
            let s = C64::new(crate::graded_algebra::Grading::SU12.sign(i), 0.0);
            out += state.0.rows(i * d, d) * s;
            if let (Some(acc), Some(ds)) = (dout.as_mut(), state.1.as_ref()) {
                *acc += ds.rows(i * d, d) * s;
            }
        }
        (out, dout)
    }

    /// `t(u) ψ`
    pub fn apply(&self, u: C64, psi: &DVector<C64>) -> DVector<C64> {
        self.run(u, psi, false).0
    }

    /// `(t(u) ψ, t'(u) ψ)` with the derivative carried exactly through every factor.
    pub fn apply_with_derivative(&self, u: C64, psi: &DVector<C64>) -> (DVector<C64>, DVector<C64>) {
        let (y, dy) = self.run(u, psi, true);
        (y, dy.expect("derivative requested"))
    }

    /// `<ψ| t(u) |ψ> / <ψ|ψ>`
    pub fn expectation(&self, u: C64, psi: &DVector<C64>) -> C64 {
        psi.dotc(&self.apply(u, psi)) / psi.norm_squared()
    }

    pub fn dense(&self, u: C64) -> GradedOperator {
        let d = dim(self.sites);
        let mut m = DMatrix::zeros(d, d);
        let mut e = DVector::zeros(d);
        for c in 0..d {
            e[c] = C64::new(1.0, 0.0);
            m.set_column(c, &self.apply(u, &e));
            e[c] = C64::new(0.0, 0.0);
        }
        GradedOperator::from_matrix(self.sites, m).expect("dimension matches")
    }

    pub fn dense_with_derivative(&self, u: C64) -> (GradedOperator, GradedOperator) {
        let d = dim(self.sites);
        let mut m = DMatrix::zeros(d, d);
        let mut dm = DMatrix::zeros(d, d);
        let mut e = DVector::zeros(d);
        for c in 0..d {
            e[c] = C64::new(1.0, 0.0);
            let (y, dy) = self.apply_with_derivative(u, &e);
            m.set_column(c, &y);
            dm.set_column(c, &dy);
            e[c] = C64::new(0.0, 0.0);
        }
        (
            GradedOperator::from_matrix(self.sites, m).expect("dimension matches"),
            GradedOperator::from_matrix(self.sites, dm).expect("dimension matches"),
        )
    }
}

/// Dense `t(u)` on `3^L` states.
pub fn build_transfer_matrix(u: C64, spec: &LatticeSpec) -> GradedOperator {
    TransferMatrix::new(spec).dense(u)
}

/// `max|[t(u), t(v)]| / max(1, max|t(u) t(v)|)`
pub fn transfer_commutator_residual(spec: &LatticeSpec, u: C64, v: C64) -> f64 {
    let tm = TransferMatrix::new(spec);
    let a = tm.dense(u);
    let b = tm.dense(v);
    a.mul(&b).relative_distance(&b.mul(&a))
}

pub fn hamiltonian_identity_residual(spec: &LatticeSpec) -> Result<f64> {
    hamiltonian_identity_residual_with(spec, BasisOrdering::Standard)
}

/// Largest entry of `(η/2) t'(0) t(0)^{-1} + const + 2N - H`.
pub fn hamiltonian_identity_residual_with(spec: &LatticeSpec, ordering: BasisOrdering) -> Result<f64> {
    if spec.sites() > 5 {
        return Err(Error::validation(format!(
            "the identity check is limited to L <= 5, got {}",
            spec.sites()
        )));
    }
    let p = spec.params();
    let l = spec.sites() as f64;
    let (t0, dt0) = TransferMatrix::new(spec).dense_with_derivative(C64::new(0.0, 0.0));
    // X t(0) = t'(0)  <=>  t(0)^T X^T = t'(0)^T
    let lu = t0.matrix().transpose().lu();
    let xt = lu
        .solve(&dt0.matrix().transpose())
        .ok_or_else(|| Error::Singular("t(0) is not invertible".into()))?;
    let log_derivative = xt.transpose();
    let constant = -p.eta / (2.0 * p.xi) + (p.eta - 2.0 * p.xi_prime) / (2.0 * (p.eta - p.xi_prime)) - l + 1.0;
    let d = spec.dim();
    let from_transfer = log_derivative * C64::new(p.eta / 2.0, 0.0)
        + DMatrix::<C64>::identity(d, d) * C64::new(constant, 0.0)
        + number_operator(spec.sites()).matrix() * C64::new(2.0, 0.0);
    let h = build_hamiltonian_with(spec, ordering)?;
    let residual = (from_transfer - h.matrix()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if !residual.is_finite() {
        return Err(Error::Numerical("non-finite residual in the Hamiltonian identity".into()));
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{real_root_region, table_one};

    fn spec(l: usize) -> LatticeSpec {
        LatticeSpec::new(l, BoundaryParams::new(table_one()).unwrap()).unwrap()
    }

    #[test]
    fn matrix_free_matches_explicit_construction() {
        // t(u) = str_0 { K+_0 T_0 K-_0 T^_0 } assembled from dense embeddings
        let s = spec(2);
        let u = C64::new(0.37, -0.21);
        let p = s.params();
        let n = 3;
        let r = |pos: [usize; 2]| crate::graded_algebra::r_matrix(u, p.eta).embed(&pos, n).unwrap();
        let t = r([0, 2]).mul(&r([0, 1]));
        let th = r([1, 0]).mul(&r([2, 0]));
        let kp = k_plus(u, p).embed(&[0], n).unwrap();
        let km = k_minus(u, p).embed(&[0], n).unwrap();
        let explicit = kp.mul(&t).mul(&km).mul(&th).supertrace(0).unwrap();
        let free = build_transfer_matrix(u, &s);
        assert!(free.relative_distance(&explicit) < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let tm = TransferMatrix::new(&spec(2));
        let u = C64::new(0.2, 0.1);
        let h = 1e-4;
        let (_, dt) = tm.dense_with_derivative(u);
        let fd = tm
            .dense(u + h)
            .sub(&tm.dense(u - h))
            .scale(C64::new(1.0 / (2.0 * h), 0.0));
        assert!(dt.relative_distance(&fd) < 1e-6);
    }

    #[test]
    fn transfer_matrices_commute() {
        for l in [2, 3] {
            let r = transfer_commutator_residual(&spec(l), C64::new(0.3, 0.8), C64::new(-1.1, 0.4));
            assert!(r < 1e-12, "L = {l}: {r}");
        }
    }

    #[test]
    fn hamiltonian_identity_holds() {
        assert!(hamiltonian_identity_residual(&spec(2)).unwrap() < 1e-10);
        let other = LatticeSpec::new(3, BoundaryParams::new(real_root_region(0.7)).unwrap()).unwrap();
        assert!(hamiltonian_identity_residual(&other).unwrap() < 1e-10);
    }

    #[test]
    fn swapped_spin_labels_break_the_identity() {
        let r = hamiltonian_identity_residual_with(&spec(2), BasisOrdering::SpinSwapped).unwrap();
        assert!(r > 1e-3, "{r}");
    }
}
