//! Density-matrix reconstruction from a tomography set: linear inversion as
//! the fast diagnostic, a positivity-constrained maximum-likelihood fit as
//! the production path, and Monte-Carlo error propagation on top.

mod linear;
mod mle;
mod monte_carlo;
mod params;
mod result;


pub use linear::{linear_invert, LINEAR_PSD_FLAG};
pub use mle::{mle_reconstruct, mle_reconstruct_with, MleConfig, Objective, LAMBDA_FLOOR};
pub use monte_carlo::{monte_carlo, monte_carlo_with, McQuantity, MonteCarloSummary, QuantitySummary};
pub use params::{CholeskyParams, PARAM_COUNT};
pub use result::{Method, ReconstructionResult};
