use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::mle::poisson_log_likelihood;
use super::params::DIM;
use super::result::{Method, ReconstructionResult};
use crate::error::{Error, Result};
use crate::qlin::{c64, DensityMatrix};
use crate::tomo::{setting_states, TomographySet, SETTING_COUNT};

/// Linear inversion flags the result unphysical below this eigenvalue.
pub const LINEAR_PSD_FLAG: f64 = -1e-6;

/// Real coordinates of an 8×8 Hermitian matrix: 8 diagonal entries, then a
/// symmetric and an antisymmetric coefficient per (i<j) pair.
fn hermitian_coordinate_count() -> usize {
    DIM * DIM
}

fn pair_index(i: usize, j: usize) -> usize {
    // (i, j) with i < j, enumerated row-major.
    let before = i * (2 * DIM - i - 1) / 2;
    DIM + 2 * (before + (j - i - 1))
}

fn hermitian_from_coords(x: &[f64]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(DIM, DIM, c64(0.0, 0.0));
    for k in 0..DIM {
        m[(k, k)] = c64(x[k], 0.0);
    }
    for i in 0..DIM {
        for j in (i + 1)..DIM {
            let base = pair_index(i, j);
            let z = c64(x[base], x[base + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// The fixed design matrix: row ν holds the Hermitian coordinates of the
/// Born probability ⟨ψ_ν|·|ψ_ν⟩. Built and LU-factored once.
fn design() -> &'static (DMatrix<f64>, nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) {
    static DESIGN: OnceLock<(DMatrix<f64>, nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>)> =
        OnceLock::new();
    DESIGN.get_or_init(|| {
        let n = hermitian_coordinate_count();
        let mut a = DMatrix::zeros(SETTING_COUNT, n);
        for (nu, psi) in setting_states().iter().enumerate() {
            let amp = psi.amplitudes();
            for k in 0..DIM {
                a[(nu, k)] = amp[k].norm_sqr();
            }
            for i in 0..DIM {
                for j in (i + 1)..DIM {
                    let z = amp[i].conj() * amp[j];
                    let base = pair_index(i, j);
                    a[(nu, base)] = 2.0 * z.re;
                    a[(nu, base + 1)] = -2.0 * z.im;
                }
            }
        }
        let lu = a.clone().lu();
        (a, lu)
    })
}

/// Direct inversion of the Born-rule system: estimates the flux from the
/// {H,V}³ block, solves the 64×64 real system for the Hermitian coordinates
/// of ρ, and flags the result unphysical when an eigenvalue falls below
/// [`LINEAR_PSD_FLAG`]. Fast and unbiased, but noisy data routinely drives
/// it outside the physical cone; the likelihood fit is the production path.
pub fn linear_invert(set: &TomographySet) -> Result<ReconstructionResult> {
    let flux = set.hv_block_total();
    if !(flux > 0.0) {
        return Err(Error::InvalidArgument(
            "flux is not estimable: the {H,V} block has no counts".into(),
        ));
    }
    let counts: Vec<f64> = set.records().iter().map(|r| r.corrected_count()).collect();
    let b = DVector::from_iterator(SETTING_COUNT, counts.iter().map(|c| c / flux));

    let (a, lu) = design();
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::SingularSystem("projector design matrix did not factor".into()))?;

    // The projector set is informationally complete, so the solve must
    // reproduce the data essentially exactly.
    let residual = (a * &x - &b).iter().map(|r| r.abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if residual > 1e-8 * scale {
        return Err(Error::SingularSystem(format!(
            "inversion residual {residual:e} exceeds tolerance"
        )));
    }

    let m = hermitian_from_coords(x.as_slice());
    let rho = DensityMatrix::new_indefinite(m)?;
    let physical = rho.min_eigenvalue() >= LINEAR_PSD_FLAG;
    let probs: Vec<f64> = setting_states()
        .iter()
        .map(|psi| {
            let v = psi.amplitudes();
            v.dotc(&(rho.entries() * v)).re
        })
        .collect();
    let log_likelihood = poisson_log_likelihood(&counts, &probs, flux);

    Ok(ReconstructionResult {
        rho,
        flux,
        log_likelihood,
        iterations: 0,
        converged: true,
        method: Method::Linear,
        physical,
    })
}
