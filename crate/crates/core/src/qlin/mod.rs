//! Complex linear algebra for multi-qubit polarization states.
//!
//! Conventions, used everywhere in this crate:
//!
//! * **Qubit order is big-endian.** Qubit 0 is the most significant bit of a
//!   computational-basis index. For the three-photon states handled here the
//!   photons are ordered (A, B, 1): photon A is qubit 0, photon B is qubit 1,
//!   the mode-1 photon is qubit 2.
//! * **H maps to 0, V maps to 1** in the computational basis, so index 0 of a
//!   3-qubit state is |HHH⟩ and index 7 is |VVV⟩.
//!
//! All values are immutable after construction; operations are pure functions
//! and safe to share across threads.

mod density;
pub(crate) mod eigen;
mod operator;
mod pure;
pub mod random;
pub mod states;
mod unitary;

#[cfg(test)]
mod tests;

pub use density::DensityMatrix;
pub use eigen::Eigendecomposition;
pub use operator::HermitianOperator;
pub use pure::PureState;
pub use unitary::LocalUnitary;

use num_complex::Complex64;

/// Pure states must be normalized to unit Euclidean norm within this bound.
pub const NORM_TOL: f64 = 1e-12;

/// Hermiticity bound: max |M - M†| entrywise.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Density matrices must have unit trace within this bound.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues above this floor count as non-negative; density matrices with
/// smaller eigenvalues are rejected as unphysical.
pub const PSD_FLOOR: f64 = -1e-9;

/// Reconstructed unitaries must satisfy |U·U† - I| within this bound.
pub const UNITARY_TOL: f64 = 1e-10;

/// Eigendecomposition residual bound, max |H - VΛV†|.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;

/// Projection outcomes with probability below this floor are degenerate.
pub const PROJECTION_PROB_FLOOR: f64 = 1e-14;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Number of qubits for a dimension that must be a power of two.
pub(crate) fn qubit_count_for_dim(dim: usize) -> Option<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return None;
    }
    Some(dim.trailing_zeros() as usize)
}

/// Bit of `index` addressing `qubit` under the big-endian convention.
#[inline]
pub(crate) fn qubit_bit(index: usize, qubit: usize, qubit_count: usize) -> usize {
    (index >> (qubit_count - 1 - qubit)) & 1
}
