//! Gaussian tail probability.

use std::f64::consts::SQRT_2;

/// Q(x) = P(N(0,1) > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}
