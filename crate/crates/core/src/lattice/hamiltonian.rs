use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use super::{electrons, LatticeSpec};
use crate::error::{Error, Result};
use crate::graded_algebra::GradedOperator;
use crate::params::{BoundaryParams, C64};

use super::eigen::DENSE_SITE_LIMIT;

/// Which local index carries spin down.
///
/// `SpinSwapped` exchanges the two fermionic labels in the Hamiltonian only,
/// which breaks the correspondence with the transfer matrix. It exists to
/// show that the identity check is sensitive to the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisOrdering {
    #[default]
    Standard,
    SpinSwapped,
}

/// `χ n + 2 h·S` on one site in the basis `(empty, down, up)`, as `[new][old]`.
fn boundary_block(chi: f64, field: [C64; 3], ordering: BasisOrdering) -> [[C64; 3]; 3] {
    let [hx, hy, hz] = field;
    let i = C64::i();
    let z = C64::new(0.0, 0.0);
    let mut m = [[z; 3]; 3];
    m[1][1] = chi - hz;
    m[2][2] = chi + hz;
    m[2][1] = hx - i * hy;
    m[1][2] = hx + i * hy;
    if ordering == BasisOrdering::SpinSwapped {
        m.swap(1, 2);
        for row in m.iter_mut() {
            row.swap(1, 2);
        }
    }
    m
}

fn digit(state: usize, site: usize, sites: usize) -> usize {
    (state / 3usize.pow((sites - 1 - site) as u32)) % 3
}

fn with_digit(state: usize, site: usize, sites: usize, value: usize) -> usize {
    let p = 3usize.pow((sites - 1 - site) as u32);
    state - digit(state, site, sites) * p + value * p
}

/// Calls `f(row, value)` for every nonzero `H[row, col]` in column `col`.
///
/// Bulk terms: hopping with amplitude `+1` and, on doubly occupied bonds,
/// `+1` on the diagonal and `-1` for the spin flip when the spins differ.
pub fn hamiltonian_entries(
    params: &BoundaryParams,
    sites: usize,
    ordering: BasisOrdering,
    col: usize,
    mut f: impl FnMut(usize, C64),
) {
    let one = C64::new(1.0, 0.0);
    let mut diag = C64::new(0.0, 0.0);
    for j in 0..sites - 1 {
        let a = digit(col, j, sites);
        let b = digit(col, j + 1, sites);
        if a == b {
            continue;
        }
        let swapped = with_digit(with_digit(col, j, sites, b), j + 1, sites, a);
        if a != 0 && b != 0 {
            diag += one;
            f(swapped, -one);
        } else {
            f(swapped, one);
        }
    }
    let left = boundary_block(params.chi_1(), params.field_1(), ordering);
    let right = boundary_block(params.chi_l(), params.field_l(), ordering);
    for (site, block) in [(0, &left), (sites - 1, &right)] {
        let old = digit(col, site, sites);
        for (new, row) in block.iter().enumerate() {
            let v = row[old];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            if new == old {
                diag += v;
            } else {
                f(with_digit(col, site, sites, new), v);
            }
        }
    }
    if diag != C64::new(0.0, 0.0) {
        f(col, diag);
    }
}

/// Dense Hamiltonian; limited to `L <= 7`.
pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<GradedOperator> {
    build_hamiltonian_with(spec, BasisOrdering::Standard)
}

pub fn build_hamiltonian_with(spec: &LatticeSpec, ordering: BasisOrdering) -> Result<GradedOperator> {
    if spec.sites() > DENSE_SITE_LIMIT {
        return Err(Error::validation(format!(
            "dense Hamiltonian limited to L <= {DENSE_SITE_LIMIT}, got {}",
            spec.sites()
        )));
    }
    let d = spec.dim();
    let mut m = DMatrix::zeros(d, d);
    for col in 0..d {
        hamiltonian_entries(spec.params(), spec.sites(), ordering, col, |row, v| m[(row, col)] += v);
    }
    GradedOperator::from_matrix(spec.sites(), m)
}

/// Diagonal total electron number.
pub fn number_operator(sites: usize) -> GradedOperator {
    let d = crate::graded_algebra::dim(sites);
    let diag = nalgebra::DVector::from_fn(d, |i, _| C64::new(electrons(i, sites) as f64, 0.0));
    GradedOperator::from_matrix(sites, DMatrix::from_diagonal(&diag)).expect("dimension matches")
}

/// `max |[H, N]|` over all matrix entries.
pub fn number_commutator_residual(spec: &LatticeSpec) -> f64 {
    let l = spec.sites();
    let mut worst = 0.0f64;
    for col in 0..spec.dim() {
        let nc = electrons(col, l) as f64;
        hamiltonian_entries(spec.params(), l, BasisOrdering::Standard, col, |row, v| {
            worst = worst.max(v.norm() * (nc - electrons(row, l) as f64).abs());
        });
    }
    worst
}

/// Fixed-electron-number block of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct Sector {
    pub electrons: usize,
    /// Global basis indices, ascending; position in this list is the local index.
    pub states: Vec<usize>,
    pub matrix: CsrMatrix<C64>,
}

impl Sector {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (r, c, v) in self.matrix.triplet_iter() {
            m[(r, c)] += *v;
        }
        m
    }

    /// Lifts a sector vector into the full `3^L` space.
    pub fn embed_vector(&self, local: &nalgebra::DVector<C64>, full_dim: usize) -> nalgebra::DVector<C64> {
        let mut out = nalgebra::DVector::zeros(full_dim);
        for (k, &s) in self.states.iter().enumerate() {
            out[s] = local[k];
        }
        out
    }
}

/// Sparse block of `H` with `n` electrons.
pub fn sector_hamiltonian(spec: &LatticeSpec, n: usize) -> Result<Sector> {
    let l = spec.sites();
    if n > l {
        return Err(Error::validation(format!("{n} electrons do not fit on {l} sites")));
    }
    let states: Vec<usize> = (0..spec.dim()).filter(|&s| electrons(s, l) == n).collect();
    let mut lookup = std::collections::HashMap::with_capacity(states.len());
    for (k, &s) in states.iter().enumerate() {
        lookup.insert(s, k);
    }
    let mut coo = CooMatrix::new(states.len(), states.len());
    for (k, &s) in states.iter().enumerate() {
        hamiltonian_entries(spec.params(), l, BasisOrdering::Standard, s, |row, v| {
            let r = *lookup.get(&row).expect("H conserves the electron number");
            coo.push(r, k, v);
        });
    }
    Ok(Sector {
        electrons: n,
        states,
        matrix: CsrMatrix::from(&coo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RawParams;
    use crate::presets::table_one;

    fn spec(l: usize) -> LatticeSpec {
        LatticeSpec::new(l, BoundaryParams::new(table_one()).unwrap()).unwrap()
    }

    #[test]
    fn hermitian_for_real_parameters() {
        let h = build_hamiltonian(&spec(3)).unwrap();
        let m = h.matrix();
        assert!((m - m.adjoint()).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn conserves_electron_number() {
        assert_eq!(number_commutator_residual(&spec(4)), 0.0);
    }

    #[test]
    fn vacuum_is_a_zero_mode() {
        let h = build_hamiltonian(&spec(3)).unwrap();
        assert!(h.matrix().column(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn sectors_reassemble_the_dense_matrix() {
        let s = spec(3);
        let dense = build_hamiltonian(&s).unwrap();
        let mut total = 0;
        for n in 0..=3 {
            let sec = sector_hamiltonian(&s, n).unwrap();
            total += sec.dim();
            let block = sec.to_dense();
            for (i, &a) in sec.states.iter().enumerate() {
                for (j, &b) in sec.states.iter().enumerate() {
                    assert_eq!(block[(i, j)], dense.entry(a, b));
                }
            }
        }
        assert_eq!(total, 27);
    }

    #[test]
    fn single_site_fields_enter_as_zeeman_terms() {
        // one electron on a two-site chain with zero fields on the right end
        let raw = RawParams {
            theta_prime: 0.0,
            ..table_one()
        };
        let p = BoundaryParams::new(raw).unwrap();
        let h = build_hamiltonian(&LatticeSpec::new(2, p).unwrap()).unwrap();
        // |down, empty> has index 1*3 + 0 = 3
        let down_empty = 3;
        let hz = p.field_1()[2];
        assert!((h.entry(down_empty, down_empty) - (p.chi_1() - hz)).norm() < 1e-15);
    }
}
