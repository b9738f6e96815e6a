use serde::{Deserialize, Serialize};

use crate::params::{BoundaryParams, C64};

/// Charge roots `v` and spin roots `lam` of one eigenstate.
#[derive(Debug, Clone)]
pub struct BetheRoots {
    pub v: Vec<C64>,
    pub lam: Vec<C64>,
    pub params: BoundaryParams,
    pub sites: usize,
}

/// Places `v` in the half plane `Re v >= -η/2` of its `v ↔ -v-η` orbit,
/// taking `Im v >= 0` on the boundary line.
pub fn canonical_v(v: C64, eta: f64) -> C64 {
    let shifted = v + eta / 2.0;
    let tie = shifted.re.abs() <= 1e-9 * (1.0 + shifted.norm());
    if shifted.re < 0.0 && !tie || tie && shifted.im < 0.0 {
        -v - eta
    } else {
        v
    }
}

/// Representative of `{λ, -λ}` with `Re λ >= 0` (`Im λ >= 0` on the imaginary axis).
pub fn canonical_lambda(l: C64) -> C64 {
    let tie = l.re.abs() <= 1e-9 * (1.0 + l.norm());
    if l.re < 0.0 && !tie || tie && l.im < 0.0 {
        -l
    } else {
        l
    }
}

fn sort_key(z: &C64) -> (i64, f64) {
    // coarse real part first so that conjugate pairs keep a stable order
    ((z.re * 1e6).round() as i64, z.im)
}

fn sort(zs: &mut [C64]) {
    zs.sort_by(|a, b| {
        let (ka, ia) = sort_key(a);
        let (kb, ib) = sort_key(b);
        ka.cmp(&kb).then(ia.total_cmp(&ib))
    });
}

impl BetheRoots {
    pub fn new(v: Vec<C64>, lam: Vec<C64>, params: BoundaryParams, sites: usize) -> Self {
        BetheRoots { v, lam, params, sites }
    }

    pub fn empty(params: BoundaryParams, sites: usize) -> Self {
        BetheRoots::new(Vec::new(), Vec::new(), params, sites)
    }

    /// `M`
    pub fn m(&self) -> usize {
        self.v.len()
    }

    /// `M̄`
    pub fn mbar(&self) -> usize {
        self.lam.len()
    }

    pub fn canonicalize(&mut self) {
        let eta = self.params.eta;
        for v in &mut self.v {
            *v = canonical_v(*v, eta);
        }
        for l in &mut self.lam {
            *l = canonical_lambda(*l);
        }
        sort(&mut self.v);
        sort(&mut self.lam);
    }

    pub fn canonicalized(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Component-wise agreement of two canonical configurations.
    pub fn same_as(&self, other: &BetheRoots, tol: f64) -> bool {
        self.v.len() == other.v.len()
            && self.lam.len() == other.lam.len()
            && self.v.iter().zip(&other.v).all(|(a, b)| (a - b).norm() <= tol)
            && self.lam.iter().zip(&other.lam).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Closure of the root set under complex conjugation (per orbit).
    pub fn conjugation_defect(&self) -> f64 {
        let eta = self.params.eta;
        let defect = |set: &[C64], canon: &dyn Fn(C64) -> C64| {
            set.iter()
                .map(|z| {
                    let c = canon(z.conj());
                    set.iter().map(|w| (canon(*w) - c).norm()).fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        defect(&self.v, &|z| canonical_v(z, eta)).max(defect(&self.lam, &canonical_lambda))
    }
}

/// Serialized form of a solved configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootRecord {
    #[serde(rename = "L")]
    pub sites: usize,
    pub params: crate::params::RawParams,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Mbar")]
    pub mbar: usize,
    pub v: Vec<[f64; 2]>,
    pub lam: Vec<[f64; 2]>,
    #[serde(rename = "E")]
    pub energy: f64,
    pub residual: f64,
}

impl RootRecord {
    pub fn from_roots(roots: &BetheRoots, energy: f64, residual: f64) -> Self {
        let pairs = |zs: &[C64]| zs.iter().map(|z| [z.re, z.im]).collect();
        RootRecord {
            sites: roots.sites,
            params: roots.params.raw(),
            m: roots.m(),
            mbar: roots.mbar(),
            v: pairs(&roots.v),
            lam: pairs(&roots.lam),
            energy,
            residual,
        }
    }

    /// Root values only; parameters are taken from the caller.
    pub fn to_roots(&self, params: BoundaryParams) -> BetheRoots {
        let unpack = |p: &[[f64; 2]]| p.iter().map(|&[a, b]| C64::new(a, b)).collect();
        BetheRoots::new(unpack(&self.v), unpack(&self.lam), params, self.sites)
    }
}
