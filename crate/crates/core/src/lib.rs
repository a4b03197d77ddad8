//! RIS reconfiguration, handover and signaling rate models for
//! RIS-assisted mobile networks, with a Monte Carlo cross-check.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod protocol;
pub mod quadrature;
pub mod region;
pub mod scenario;
pub mod stochastic;

pub use error::{Error, Result};
