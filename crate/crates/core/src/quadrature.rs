//! Adaptive Gauss-Legendre quadrature on finite intervals.
//!
//! Each panel is integrated with a 7- and a 15-point rule; their difference is
//! the error estimate. The panel with the largest estimate is bisected until
//! the total estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

const MAX_PANELS: usize = 20_000;
/// Error estimates below this fraction of the panel's absolute integral are
/// rounding noise.
const ROUNDOFF: f64 = 1e-15;

fn rules() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| {
        (
            GaussLegendre::new(7.try_into().expect("nonzero")),
            GaussLegendre::new(15.try_into().expect("nonzero")),
        )
    })
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    magnitude: f64,
    err: f64,
}

impl Panel {
    fn new(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        let (coarse, fine) = rules();
        let rough = coarse.integrate(lo, hi, f);
        let value = fine.integrate(lo, hi, f);
        if !value.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let magnitude = fine.integrate(lo, hi, |x| f(x).abs());
        let err = (value - rough).abs();
        Ok(Panel { lo, hi, value, magnitude, err })
    }

    fn splittable(&self) -> bool {
        self.err > ROUNDOFF * self.magnitude && 0.5 * (self.lo + self.hi) > self.lo
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // splittable panels first, then by error
        self.splittable()
            .cmp(&other.splittable())
            .then(self.err.total_cmp(&other.err))
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Panels whose error is at the rounding level of their contents are not
/// split further; the result is accepted once only such panels remain.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::validation("integration limits must be finite"));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel::new(&f, a, b)?);
    let total_err = |h: &BinaryHeap<Panel>| h.iter().map(|p| p.err).sum::<f64>();
    loop {
        let err = total_err(&heap);
        let worst = heap.peek().expect("nonempty");
        if err <= tol || !worst.splittable() {
            break;
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::Numerical(format!("quadrature did not reach {tol:e} (estimate {err:e})")));
        }
        let p = heap.pop().expect("nonempty");
        let mid = 0.5 * (p.lo + p.hi);
        heap.push(Panel::new(&f, p.lo, mid)?);
        heap.push(Panel::new(&f, mid, p.hi)?);
    }
    Ok(QuadratureResult {
        value: heap.iter().map(|p| p.value).sum(),
        error_estimate: total_err(&heap),
        panels: heap.len(),
    })
}

/// Integrates over consecutive breakpoints, splitting the tolerance evenly.
pub fn integrate_pieces(f: impl Fn(f64) -> f64, breaks: &[f64], tol: f64) -> Result<QuadratureResult> {
    let pieces = breaks.windows(2).filter(|w| w[1] > w[0]).count().max(1);
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        panels: 0,
    };
    for w in breaks.windows(2).filter(|w| w[1] > w[0]) {
        let part = integrate(&f, w[0], w[1], tol / pieces as f64)?;
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.panels += part.panels;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 2.0 * x, -1.0, 2.0, 1e-14).unwrap();
        assert!((r.value - (64.0 - 1.0) / 6.0 + 3.0).abs() < 1e-13);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn peaked_integrand() {
        let eps = 1e-4;
        let r = integrate_pieces(|x| eps / (x * x + eps * eps), &[-1.0, 0.0, 1.0], 1e-12).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() < 1e-11, "{}", r.value - exact);
    }
}
