//! BST (Bulirsch-Stoer) extrapolation of finite-size sequences to `L → ∞`.
//!
//! With `T_{-1}^{(n)} = 0` and `T_0^{(n)} = F_{L_n}`,
//!
//! ```text
//! T_m^{(n)} = T_{m-1}^{(n+1)} + (T_{m-1}^{(n+1)} - T_{m-1}^{(n)}) /
//!     { (L_n / L_{n+m})^{-ω} [1 - (T_{m-1}^{(n+1)} - T_{m-1}^{(n)}) /
//!                                 (T_{m-1}^{(n+1)} - T_{m-2}^{(n+1)})] - 1 }.
//! ```

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Denominators smaller than this invalidate an entry.
const TINY: f64 = 1e-300;
pub const OMEGA_MIN: f64 = 0.5;
pub const OMEGA_MAX: f64 = 3.0;
pub const OMEGA_STEP: f64 = 0.01;

/// Exponent choice for the extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Omega {
    Fixed(f64),
    /// Scan `[0.5, 3]` in steps of `0.01` and keep the smallest spread.
    Auto,
}

#[derive(Debug, Clone, Serialize)]
pub struct BstTable {
    /// `levels[m][n] = T_m^{(n)}`; `None` marks an invalid entry.
    pub levels: Vec<Vec<Option<f64>>>,
    pub omega: f64,
    /// Range of the valid entries in the last two columns.
    pub spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BstResult {
    pub estimate: f64,
    pub table: BstTable,
}

fn validate(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::validation(format!("BST needs at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(l, f)| !(l > 0.0) || !l.is_finite() || !f.is_finite()) {
        return Err(Error::validation("BST points must have finite values and positive sizes"));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::validation("BST sizes must be strictly increasing"));
    }
    Ok(())
}

fn build(points: &[(f64, f64)], omega: f64) -> Vec<Vec<Option<f64>>> {
    let n = points.len();
    let mut levels: Vec<Vec<Option<f64>>> = vec![points.iter().map(|p| Some(p.1)).collect()];
    for m in 1..n {
        let prev = &levels[m - 1];
        let before: Vec<Option<f64>> = if m >= 2 { levels[m - 2].clone() } else { vec![Some(0.0); n] };
        let column: Vec<Option<f64>> = (0..n - m)
            .map(|i| {
                let up = prev[i + 1]?;
                let diff = up - prev[i]?;
                if diff == 0.0 {
                    return Some(up);
                }
                let inner = up - before[i + 1]?;
                if inner.abs() < TINY {
                    return None;
                }
                let ratio = (points[i].0 / points[i + m].0).powf(-omega);
                let denominator = ratio * (1.0 - diff / inner) - 1.0;
                if denominator.abs() < TINY {
                    return None;
                }
                let value = up + diff / denominator;
                value.is_finite().then_some(value)
            })
            .collect();
        levels.push(column);
    }
    levels
}

fn spread(levels: &[Vec<Option<f64>>]) -> f64 {
    let tail: Vec<f64> = levels
        .iter()
        .rev()
        .filter(|c| c.iter().any(Option::is_some))
        .take(2)
        .flat_map(|c| c.iter().flatten().copied())
        .collect();
    let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
    if tail.is_empty() {
        f64::INFINITY
    } else {
        hi - lo
    }
}

fn deepest(levels: &[Vec<Option<f64>>]) -> Option<f64> {
    levels.iter().rev().find_map(|c| c.iter().rev().flatten().next().copied())
}

fn table_for(points: &[(f64, f64)], omega: f64) -> BstTable {
    let levels = build(points, omega);
    let spread = spread(&levels);
    BstTable { levels, omega, spread }
}

/// Extrapolates `(L, F_L)` pairs sorted by strictly increasing `L`.
///
/// The estimate is the deepest valid entry of the table.
pub fn bst_extrapolate(points: &[(f64, f64)], omega: Omega) -> Result<BstResult> {
    validate(points)?;
    let table = match omega {
        Omega::Fixed(w) => {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::validation(format!("omega must be positive, got {w}")));
            }
            table_for(points, w)
        }
        Omega::Auto => {
            let steps = ((OMEGA_MAX - OMEGA_MIN) / OMEGA_STEP).round() as usize;
            (0..=steps)
                .into_par_iter()
                .map(|k| table_for(points, OMEGA_MIN + k as f64 * OMEGA_STEP))
                .filter(|t| deepest(&t.levels).is_some())
                .min_by(|a, b| a.spread.total_cmp(&b.spread).then(a.omega.total_cmp(&b.omega)))
                .ok_or_else(|| Error::Numerical("every BST table was invalid".into()))?
        }
    };
    let estimate = deepest(&table.levels).ok_or_else(|| Error::Numerical("every BST entry was invalid".into()))?;
    Ok(BstResult { estimate, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes() -> Vec<f64> {
        (3..=10).map(|k| (1u32 << k) as f64).collect()
    }

    #[test]
    fn constant_sequence() {
        let pts: Vec<(f64, f64)> = sizes().into_iter().map(|l| (l, 0.37)).collect();
        let r = bst_extrapolate(&pts, Omega::Fixed(1.0)).unwrap();
        assert_eq!(r.estimate, 0.37);
        assert_eq!(r.table.spread, 0.0);
    }

    #[test]
    fn first_column_is_input() {
        let pts: Vec<(f64, f64)> = sizes().into_iter().map(|l| (l, 1.0 + 1.0 / l)).collect();
        let r = bst_extrapolate(&pts, Omega::Fixed(1.0)).unwrap();
        for (entry, p) in r.table.levels[0].iter().zip(&pts) {
            assert_eq!(entry.unwrap(), p.1);
        }
    }

    #[test]
    fn pure_power_law_is_eliminated() {
        for (w0, a, b) in [(1.0, 0.4, -1.3), (2.0, -1.0, 0.5), (0.75, 2.0, 3.0)] {
            let pts: Vec<(f64, f64)> = sizes().into_iter().map(|l| (l, a + b * l.powf(-w0))).collect();
            let r = bst_extrapolate(&pts, Omega::Fixed(w0)).unwrap();
            for entry in r.table.levels[2].iter().flatten() {
                assert!((entry - a).abs() < 1e-10, "omega {w0}: {entry} vs {a}");
            }
        }
    }

    #[test]
    fn auto_omega_finds_exponent() {
        let pts: Vec<(f64, f64)> = sizes().into_iter().map(|l| (l, 0.2 + 0.8 / l + 0.3 / (l * l))).collect();
        let r = bst_extrapolate(&pts, Omega::Auto).unwrap();
        assert!((r.estimate - 0.2).abs() < 1e-8, "{}", r.estimate);
    }

    #[test]
    fn linear_in_the_sequence() {
        let pts: Vec<(f64, f64)> = sizes().into_iter().map(|l| (l, 1.5 - 0.7 / l + 0.2 / l.powf(1.5))).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(l, f)| (l, 4.0 * f)).collect();
        let a = bst_extrapolate(&pts, Omega::Fixed(1.0)).unwrap().estimate;
        let b = bst_extrapolate(&scaled, Omega::Fixed(1.0)).unwrap().estimate;
        assert!((b - 4.0 * a).abs() < 1e-12 * b.abs().max(1.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bst_extrapolate(&[(1.0, 1.0), (2.0, 1.0)], Omega::Auto).unwrap_err().is_validation());
        assert!(bst_extrapolate(&[(1.0, 1.0), (3.0, 1.0), (2.0, 1.0)], Omega::Auto).unwrap_err().is_validation());
        assert!(bst_extrapolate(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)], Omega::Fixed(-1.0)).unwrap_err().is_validation());
    }
}
