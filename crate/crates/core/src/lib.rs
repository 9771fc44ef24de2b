//! Sum-BER analysis of amplify-and-forward beamforming two-way relay networks.
//!
//! Five relaying protocols are modelled through unified end-to-end SNRs. The
//! crate provides a Monte-Carlo link simulator, exact CDFs and closed-form
//! sum-BER lower bounds, high-SNR asymptotics with weight optimization and
//! inter-protocol gaps.

pub mod asymptotic;
pub mod channel_sim;
pub mod closed_form;
mod error;
pub mod quad;
pub mod scenario;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
