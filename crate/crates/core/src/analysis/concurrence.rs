use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlin::{eigen, DensityMatrix, HermitianOperator, PSD_FLOOR};

/// Eigenvalues of ρ below this fraction of the largest are treated as exact
/// zeros when taking square roots; √ amplifies spectral roundoff (√1e-16 =
/// 1e-8) and would otherwise poison the λ differences.
const RELATIVE_RANK_CUTOFF: f64 = 1e-13;

/// Wootters concurrence of a two-qubit state: max(0, λ₁−λ₂−λ₃−λ₄) where the
/// λᵢ are the descending square roots of the eigenvalues of
/// ρ·(σy⊗σy)·ρ*·(σy⊗σy).
///
/// Computed as the singular values of S = D^{1/2}·V†·(σy⊗σy)·V*·D^{1/2} with
/// ρ = V·D·V†: S·S† is similar to the textbook product, so the spectra agree,
/// but singular values stay non-negative and numerically clean. The input
/// must be genuinely positive semidefinite; unrepaired linear-inversion
/// output is exactly the kind of matrix this rejects.
pub fn concurrence2(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubit_count() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a 2-qubit state, got {} qubits",
            rho.qubit_count()
        )));
    }
    let (vals, vecs) = eigen::hermitian_eigen(rho.entries());
    let min_eig = *vals.last().unwrap();
    if min_eig < PSD_FLOOR {
        return Err(Error::NonPhysical(format!(
            "state has eigenvalue {min_eig:e}; concurrence needs a positive semidefinite input"
        )));
    }
    let cutoff = vals[0].max(0.0) * RELATIVE_RANK_CUTOFF;
    let sqrt_p: Vec<f64> = vals
        .iter()
        .map(|&p| if p > cutoff { p.sqrt() } else { 0.0 })
        .collect();

    let y = HermitianOperator::pauli_y();
    let yy = y.tensor(&y);
    let conj_vecs = DMatrix::from_fn(4, 4, |i, j| vecs[(i, j)].conj());
    let core = vecs.adjoint() * yy.entries() * conj_vecs;
    let s = DMatrix::from_fn(4, 4, |i, j| {
        Complex64::new(sqrt_p[i] * sqrt_p[j], 0.0) * core[(i, j)]
    });

    let mut sigma: Vec<f64> = s.svd(false, false).singular_values.iter().cloned().collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((sigma[0] - sigma[1] - sigma[2] - sigma[3]).max(0.0))
}
