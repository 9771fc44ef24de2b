//! Special functions used by the analytic formulas.
//!
//! | function | notes |
//! |---|---|
//! | [`ln_gamma`] | x > 0 |
//! | [`bessel_k`] | integer order, x > 0 |
//! | [`gauss_2f1`] | real z in (−1, 1) |
//! | [`q_function`] | Gaussian tail |
//! | [`wishart_max_eig_coeffs`] | largest-eigenvalue CDF tables, M_S, M_R ≤ 4 |

mod bessel;
mod gamma;
mod hyp2f1;
mod qfunc;
pub mod real;
mod wishart;

pub use bessel::{bessel_k, bessel_k_flagged, bessel_k_scaled};
pub use gamma::{digamma, gamma, ln_gamma, rgamma};
pub(crate) use gamma::{binomial, factorial};
pub use hyp2f1::gauss_2f1;
pub(crate) use hyp2f1::hyp2f1_w;
pub use qfunc::q_function;
pub use wishart::{supported_dims, wishart_max_eig_coeffs, EigCoeff, EigCoeffTable};
