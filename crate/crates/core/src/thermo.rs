//! Thermodynamic-limit quantities: kernels, Fermi boundaries, the bulk energy
//! density and the surface energy.
//!
//! The surface energy is
//!
//! ```text
//! E_b(ζ) = -π ∫_{-1/2}^{1/2} a_1(μ) a_{2ζ}(μ) dμ + (2/π) arctan(1/(2ζ)) + Δ,
//! ```
//!
//! with `Δ = 1` for `ζ >= 0` and `Δ = 3 - 1/(1/4 - ζ²)` for `-1/2 < ζ < 0`.
//! The kernel integral is evaluated both by quadrature and in closed form.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_pieces};

/// Absolute tolerance of every quadrature in this module.
pub const QUADRATURE_TOL: f64 = 1e-12;
/// Closed form and quadrature must agree this well.
pub const CROSS_CHECK_TOL: f64 = 1e-9;
/// Below this distance from `ζ = 1/2` the closed form switches to its series.
const SERIES_WINDOW: f64 = 1e-5;

/// `a_n(u) = n / (2π (u² + n²/4))`, with the sign of `n` carried through.
pub fn kernel_a(n: f64, u: f64) -> Result<f64> {
    if n == 0.0 || !n.is_finite() {
        return Err(Error::validation(format!("kernel index must be finite and nonzero, got {n}")));
    }
    Ok(n / (2.0 * PI * (u * u + 0.25 * n * n)))
}

/// Fermi boundary `B` (for `ζ >= 0`) or `B̃` (for `ζ < 0`) at finite `L`.
pub fn fermi_boundary(sites: usize, zeta: f64) -> f64 {
    let arc = half_inverse_arctan(zeta);
    let denominator = 4.0 * sites as f64 + 4.0 * zeta / (1.0 + 4.0 * zeta * zeta);
    if zeta >= 0.0 {
        0.5 + (PI - 2.0 * arc) / denominator
    } else {
        0.5 - (PI + 2.0 * arc) / denominator
    }
}

/// `arctan(1/(2ζ))`, equal to `π/2` at `ζ = 0`.
fn half_inverse_arctan(zeta: f64) -> f64 {
    if zeta == 0.0 {
        FRAC_PI_2
    } else {
        (0.5 / zeta).atan()
    }
}

/// `∫_{-1/2}^{1/2} a_1(μ)² dμ = (2 + π) / (2π²)`.
pub fn kernel_square_integral() -> f64 {
    (2.0 + PI) / (2.0 * PI * PI)
}

/// Ground-state energy per site, `-2π ∫ a_1² + 1 = -2/π`.
///
/// Fails if the quadrature and closed form of the integral disagree.
pub fn bulk_density() -> Result<f64> {
    let quad = integrate(|m| a1(m).powi(2), -0.5, 0.5, QUADRATURE_TOL)?.value;
    let closed = kernel_square_integral();
    if (quad - closed).abs() > QUADRATURE_TOL * 10.0 {
        return Err(Error::Numerical(format!("bulk integral: quadrature {quad} vs closed form {closed}")));
    }
    Ok(-2.0 * PI * closed + 1.0)
}

fn a1(m: f64) -> f64 {
    1.0 / (2.0 * PI * (m * m + 0.25))
}

/// `∫_{-1/2}^{1/2} a_1(μ) a_{2ζ}(μ) dμ` from partial fractions.
///
/// At `ζ = 0` the limit from above, `2/π`, is returned.
pub fn kernel_integral_closed(zeta: f64) -> f64 {
    if zeta == 0.0 {
        return 2.0 / PI;
    }
    let c = zeta.abs();
    let d = c - 0.5;
    // [π - (2/c) arctan(1/(2c))] / (c² - 1/4), regular at c = 1/2
    let ratio = if d.abs() < SERIES_WINDOW {
        let g1 = -2.0 * PI - 4.0;
        let g2 = 12.0 + 4.0 * PI;
        let g3 = -80.0 / 3.0 - 8.0 * PI;
        -(g1 + g2 * d + g3 * d * d) / (1.0 + d)
    } else {
        (PI - 2.0 / c * (0.5 / c).atan()) / (c * c - 0.25)
    };
    2.0 * zeta / (4.0 * PI * PI) * ratio
}

/// The same integral by adaptive quadrature, split at `0` and `±2|ζ|`.
pub fn kernel_integral_quadrature(zeta: f64) -> Result<f64> {
    if zeta == 0.0 {
        // a_{2ζ} tends to a delta function at the origin
        return Ok(a1(0.0));
    }
    let s = 2.0 * zeta.abs();
    let mut breaks = vec![-0.5, 0.0, 0.5];
    if s < 0.5 {
        breaks.extend([-s, s]);
    }
    breaks.sort_by(f64::total_cmp);
    let n = 2.0 * zeta;
    Ok(integrate_pieces(|m| a1(m) * n / (2.0 * PI * (m * m + 0.25 * n * n)), &breaks, QUADRATURE_TOL)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceRegion {
    RealRoots,
    BoundState,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfaceEnergyResult {
    pub zeta: f64,
    pub region: SurfaceRegion,
    /// From the closed-form kernel integral.
    pub value: f64,
    /// From the quadrature of the kernel integral.
    pub quadrature_value: f64,
    pub delta_term: f64,
}

fn region(zeta: f64) -> Result<SurfaceRegion> {
    if zeta >= 0.0 && zeta.is_finite() {
        Ok(SurfaceRegion::RealRoots)
    } else if zeta > -0.5 && zeta < 0.0 {
        Ok(SurfaceRegion::BoundState)
    } else {
        Err(Error::validation(format!("surface energy needs zeta > -1/2, got {zeta}")))
    }
}

/// `Δ`: `1` for real roots, `3 - 1/(1/4 - ζ²)` with the bound root.
pub fn delta_term(zeta: f64) -> Result<f64> {
    Ok(match region(zeta)? {
        SurfaceRegion::RealRoots => 1.0,
        SurfaceRegion::BoundState => 3.0 - 1.0 / (0.25 - zeta * zeta),
    })
}

/// The unified surface-energy formula for a given kernel integral.
fn unified(integral: f64, zeta: f64, delta: f64) -> f64 {
    -PI * integral + 2.0 / PI * half_inverse_arctan(zeta) + delta
}

/// Surface energy `E_b(ζ)` for `ζ > -1/2`.
pub fn surface_energy(zeta: f64) -> Result<SurfaceEnergyResult> {
    let region = region(zeta)?;
    let delta = delta_term(zeta)?;
    let quadrature_value = unified(kernel_integral_quadrature(zeta)?, zeta, delta);
    let value = unified(kernel_integral_closed(zeta), zeta, delta);
    if (value - quadrature_value).abs() > CROSS_CHECK_TOL {
        return Err(Error::Numerical(format!(
            "surface energy at zeta = {zeta}: closed form {value} vs quadrature {quadrature_value}"
        )));
    }
    Ok(SurfaceEnergyResult {
        zeta,
        region,
        value,
        quadrature_value,
        delta_term: delta,
    })
}
