//! Three-photon polarization tomography pipeline: coincidence-count
//! simulation, density-matrix reconstruction, and entanglement analysis.

pub mod analysis;
pub mod error;
pub mod exec;
pub(crate) mod optim;
pub mod qlin;
pub mod reconstruct;
pub mod tomo;

pub use error::{Error, Result};
