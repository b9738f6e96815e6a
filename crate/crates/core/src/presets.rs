//! Parameter sets used throughout the tests, examples and CLI defaults.

use std::f64::consts::PI;

use crate::params::RawParams;

/// Two-site benchmark: `eta = 1, xi = 0.6, theta = pi/5, phi = pi/3,
/// xi' = 1.5, theta' = 2pi/3, phi' = pi/4`, `epsilon = +1`.
pub fn table_one() -> RawParams {
    RawParams {
        eta: 1.0,
        xi: 0.6,
        theta: PI / 5.0,
        phi: PI / 3.0,
        xi_prime: 1.5,
        theta_prime: 2.0 * PI / 3.0,
        phi_prime: PI / 4.0,
        epsilon: 1.0,
    }
}

/// Real-root ground-state region: `xi = -0.1`, `zeta = 0.05`, `theta' = 0`,
/// `phi = phi' = 0`, with the left polar angle free.
pub fn real_root_region(theta: f64) -> RawParams {
    RawParams {
        eta: 1.0,
        xi: -0.1,
        theta,
        phi: 0.0,
        xi_prime: 0.45,
        theta_prime: 0.0,
        phi_prime: 0.0,
        epsilon: 1.0,
    }
}

/// Bound-state region: `xi = -0.1`, `xi' = 0.95`, `theta = 0.15`,
/// `phi = phi' = 0`, with the right polar angle free.
pub fn bound_state_region(theta_prime: f64) -> RawParams {
    RawParams {
        eta: 1.0,
        xi: -0.1,
        theta: 0.15,
        phi: 0.0,
        xi_prime: 0.95,
        theta_prime,
        phi_prime: 0.0,
        epsilon: 1.0,
    }
}
