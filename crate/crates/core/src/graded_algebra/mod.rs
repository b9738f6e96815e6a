//! su(1|2)-graded linear algebra on tensor powers of a 3-dimensional space.
//!
//! Basis index 0 is bosonic (empty site), indices 1 and 2 are fermionic. Tensor
//! factors are ordered with factor 0 as the most significant digit of the
//! global index. All graded signs derive from a single rule for the tensor
//! product of homogeneous operators:
//!
//! ```text
//! (A ⊗ B)_{(a α),(b β)} = A_{ab} B_{αβ} (-1)^{ε_α (ε_a + ε_b)}
//! ```
//!
//! which for `n` factors generalizes to the sign `(-1)^{Σ_{k<l} (ε_{a_k} + ε_{b_k}) ε_{a_l}}`.

mod identities;
mod kmatrix;
mod rmatrix;

pub use identities::{verify_identities, IdentityReport, IdentityResidual};
pub use kmatrix::{k_minus, k_minus_derivative, k_plus, k_plus_derivative};
pub use rmatrix::{graded_permutation, r_matrix};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::C64;

/// Local dimension of one tensor factor.
pub const LOCAL_DIM: usize = 3;

/// Grassmann parities of the three basis states of one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    parities: [u8; LOCAL_DIM],
}

impl Grading {
    /// The su(1|2) grading `(0, 1, 1)`.
    pub const SU12: Grading = Grading { parities: [0, 1, 1] };

    #[inline]
    pub fn parity(&self, index: usize) -> u8 {
        self.parities[index]
    }

    pub fn parities(&self) -> [u8; LOCAL_DIM] {
        self.parities
    }

    /// `(-1)^{ε_i}`
    #[inline]
    pub fn sign(&self, index: usize) -> f64 {
        if self.parities[index] == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Dense operator on `factors` graded tensor factors.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    factors: usize,
    matrix: DMatrix<C64>,
    grading: Grading,
}

pub fn dim(factors: usize) -> usize {
    LOCAL_DIM.pow(factors as u32)
}

/// Base-3 digits of `index`, most significant first.
#[inline]
pub fn digits(mut index: usize, factors: usize, out: &mut [u8]) {
    for k in (0..factors).rev() {
        out[k] = (index % LOCAL_DIM) as u8;
        index /= LOCAL_DIM;
    }
}

#[inline]
pub fn index_of(digits: &[u8]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * LOCAL_DIM + d as usize)
}

/// Sign of the graded tensor product of elementary matrices `E_{a_k b_k}`.
#[inline]
pub fn graded_sign(grading: &Grading, rows: &[u8], cols: &[u8]) -> f64 {
    let mut odd_so_far = 0u8;
    let mut exponent = 0u8;
    for (&a, &b) in rows.iter().zip(cols) {
        exponent ^= odd_so_far & grading.parity(a as usize);
        odd_so_far ^= grading.parity(a as usize) ^ grading.parity(b as usize);
    }
    if exponent == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Sparse entries `(row, col, value)` of a local operator embedded at
/// `positions` inside `total` factors.
///
/// The local operator is first expanded in graded elementary tensors over its
/// own factor order, each elementary factor is moved to its global slot
/// (picking up `(-1)^{|E_i||E_j|}` for every inverted pair), and the result is
/// read back through the global sign rule.
pub fn embedded_entries(
    op: &GradedOperator,
    positions: &[usize],
    total: usize,
) -> Result<Vec<(usize, usize, C64)>> {
    let k = op.factors;
    if positions.len() != k {
        return Err(Error::validation(format!(
            "operator acts on {k} factor(s) but {} position(s) were given",
            positions.len()
        )));
    }
    for (i, &p) in positions.iter().enumerate() {
        if p >= total {
            return Err(Error::FactorOutOfRange { index: p, factors: total });
        }
        if positions[..i].contains(&p) {
            return Err(Error::validation(format!("position {p} repeated")));
        }
    }
    let g = op.grading;
    let local_dim = dim(k);
    let global_dim = dim(total);

    // Coefficients of the local expansion, with the reordering sign folded in.
    let mut local = Vec::new();
    let mut a = vec![0u8; k];
    let mut b = vec![0u8; k];
    for col in 0..local_dim {
        digits(col, k, &mut b);
        for row in 0..local_dim {
            let v = op.matrix[(row, col)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            digits(row, k, &mut a);
            let mut s = graded_sign(&g, &a, &b);
            for i in 0..k {
                for j in (i + 1)..k {
                    if positions[i] > positions[j] {
                        let pi = g.parity(a[i] as usize) ^ g.parity(b[i] as usize);
                        let pj = g.parity(a[j] as usize) ^ g.parity(b[j] as usize);
                        if pi & pj == 1 {
                            s = -s;
                        }
                    }
                }
            }
            local.push((a.clone(), b.clone(), v * s));
        }
    }

    let mut out = Vec::with_capacity(global_dim / local_dim.max(1) * local.len());
    let mut rows = vec![0u8; total];
    let mut cols = vec![0u8; total];
    for col in 0..global_dim {
        digits(col, total, &mut cols);
        for (la, lb, v) in &local {
            if positions.iter().zip(lb).any(|(&p, &d)| cols[p] != d) {
                continue;
            }
            rows.copy_from_slice(&cols);
            for (&p, &d) in positions.iter().zip(la) {
                rows[p] = d;
            }
            let s = graded_sign(&g, &rows, &cols);
            out.push((index_of(&rows), col, *v * s));
        }
    }
    Ok(out)
}

impl GradedOperator {
    /// Wraps a square matrix of dimension `3^factors`.
    pub fn from_matrix(factors: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let d = dim(factors);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::validation(format!(
                "matrix is {}x{} but {factors} factor(s) need {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(GradedOperator {
            factors,
            matrix,
            grading: Grading::SU12,
        })
    }

    pub fn identity(factors: usize) -> Self {
        let d = dim(factors);
        GradedOperator {
            factors,
            matrix: DMatrix::identity(d, d),
            grading: Grading::SU12,
        }
    }

    pub fn zeros(factors: usize) -> Self {
        let d = dim(factors);
        GradedOperator {
            factors,
            matrix: DMatrix::zeros(d, d),
            grading: Grading::SU12,
        }
    }

    /// `diag((-1)^{ε})` on every factor.
    pub fn parity_operator(factors: usize) -> Self {
        let g = Grading::SU12;
        let d = dim(factors);
        let mut digs = vec![0u8; factors];
        let diag = nalgebra::DVector::from_fn(d, |i, _| {
            digits(i, factors, &mut digs);
            let odd = digs.iter().fold(0u8, |acc, &x| acc ^ g.parity(x as usize));
            C64::new(if odd == 1 { -1.0 } else { 1.0 }, 0.0)
        });
        GradedOperator {
            factors,
            matrix: DMatrix::from_diagonal(&diag),
            grading: g,
        }
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Value of a zero-factor operator (what a full supertrace leaves behind).
    pub fn scalar(&self) -> Option<C64> {
        (self.factors == 0).then(|| self.matrix[(0, 0)])
    }

    /// Acts as `self` on `positions` (in the operator's own factor order) and
    /// as the identity on the remaining factors of a `total`-factor space.
    pub fn embed(&self, positions: &[usize], total: usize) -> Result<GradedOperator> {
        let d = dim(total);
        let mut m = DMatrix::zeros(d, d);
        for (r, c, v) in embedded_entries(self, positions, total)? {
            m[(r, c)] += v;
        }
        Ok(GradedOperator {
            factors: total,
            matrix: m,
            grading: self.grading,
        })
    }

    /// Super transposition on a single factor:
    /// `(A^{st})_{ij} = A_{ji} (-1)^{ε_i (ε_i + ε_j)}`.
    pub fn super_transpose(&self, factor: usize) -> Result<GradedOperator> {
        self.check_factor(factor)?;
        let n = self.factors;
        let d = dim(n);
        let g = self.grading;
        let mut out = DMatrix::zeros(d, d);
        let mut a = vec![0u8; n];
        let mut b = vec![0u8; n];
        let mut ta = vec![0u8; n];
        let mut tb = vec![0u8; n];
        for col in 0..d {
            digits(col, n, &mut b);
            for row in 0..d {
                let v = self.matrix[(row, col)];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                digits(row, n, &mut a);
                let coeff = v * graded_sign(&g, &a, &b);
                let (i, j) = (a[factor], b[factor]);
                let local = if g.parity(j as usize) & (g.parity(i as usize) ^ g.parity(j as usize)) == 1 {
                    -1.0
                } else {
                    1.0
                };
                ta.copy_from_slice(&a);
                tb.copy_from_slice(&b);
                ta[factor] = j;
                tb[factor] = i;
                let s = graded_sign(&g, &ta, &tb);
                out[(index_of(&ta), index_of(&tb))] += coeff * local * s;
            }
        }
        Ok(GradedOperator {
            factors: n,
            matrix: out,
            grading: g,
        })
    }

    /// Partial supertrace `Σ_i (-1)^{ε_i} <i| · |i>` over one factor.
    pub fn supertrace(&self, factor: usize) -> Result<GradedOperator> {
        self.check_factor(factor)?;
        let n = self.factors;
        let g = self.grading;
        let rest = n - 1;
        let d = dim(rest);
        let mut out = DMatrix::zeros(d, d);
        let mut a = vec![0u8; rest];
        let mut b = vec![0u8; rest];
        let mut full_a = vec![0u8; n];
        let mut full_b = vec![0u8; n];
        for col in 0..d {
            digits(col, rest, &mut b);
            for row in 0..d {
                digits(row, rest, &mut a);
                // parity carried by the factors to the left of the traced one
                let left_parity = a[..factor]
                    .iter()
                    .zip(&b[..factor])
                    .fold(0u8, |acc, (&x, &y)| acc ^ g.parity(x as usize) ^ g.parity(y as usize));
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..LOCAL_DIM as u8 {
                    splice(&a, factor, i, &mut full_a);
                    splice(&b, factor, i, &mut full_b);
                    let mut s = g.sign(i as usize);
                    if left_parity & g.parity(i as usize) == 1 {
                        s = -s;
                    }
                    acc += self.matrix[(index_of(&full_a), index_of(&full_b))] * s;
                }
                out[(row, col)] = acc;
            }
        }
        Ok(GradedOperator {
            factors: rest,
            matrix: out,
            grading: g,
        })
    }

    pub fn mul(&self, other: &GradedOperator) -> GradedOperator {
        assert_eq!(self.factors, other.factors, "factor count mismatch");
        GradedOperator {
            factors: self.factors,
            matrix: &self.matrix * &other.matrix,
            grading: self.grading,
        }
    }

    pub fn scale(&self, s: C64) -> GradedOperator {
        GradedOperator {
            factors: self.factors,
            matrix: &self.matrix * s,
            grading: self.grading,
        }
    }

    pub fn sub(&self, other: &GradedOperator) -> GradedOperator {
        assert_eq!(self.factors, other.factors, "factor count mismatch");
        GradedOperator {
            factors: self.factors,
            matrix: &self.matrix - &other.matrix,
            grading: self.grading,
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max|self - other| / max(1, max|self|)`.
    pub fn relative_distance(&self, other: &GradedOperator) -> f64 {
        self.sub(other).max_abs() / self.max_abs().max(1.0)
    }

    fn check_factor(&self, factor: usize) -> Result<()> {
        if factor >= self.factors {
            Err(Error::FactorOutOfRange {
                index: factor,
                factors: self.factors,
            })
        } else {
            Ok(())
        }
    }
}

fn splice(src: &[u8], at: usize, value: u8, out: &mut [u8]) {
    out[..at].copy_from_slice(&src[..at]);
    out[at] = value;
    out[at + 1..].copy_from_slice(&src[at..]);
}
