use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlin::{c64, DensityMatrix};

/// Dimension of the reconstructed state space.
pub(crate) const DIM: usize = 8;

/// Number of real parameters: 8 diagonal + 2·28 off-diagonal.
pub const PARAM_COUNT: usize = DIM * DIM;

/// The 64 real numbers parameterizing a lower-triangular complex matrix T
/// with real diagonal; ρ(t) = T†T / Tr(T†T) is Hermitian, unit-trace, and
/// positive semidefinite for any non-zero t.
///
/// Layout: `t[0..8]` are the diagonal entries T₀₀..T₇₇; the remainder holds
/// (re, im) pairs for the strictly-lower entries in row-major order
/// (1,0), (2,0), (2,1), (3,0), ….
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyParams {
    t: Vec<f64>,
}

impl CholeskyParams {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.len() != PARAM_COUNT {
            return Err(Error::InvalidArgument(format!(
                "{} parameters given, {PARAM_COUNT} required",
                t.len()
            )));
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "parameters must be finite".into(),
            ));
        }
        Ok(Self { t })
    }

    /// T = I/√d, the maximally mixed fallback start.
    pub fn maximally_mixed() -> Self {
        let mut t = vec![0.0; PARAM_COUNT];
        let diag = (1.0 / DIM as f64).sqrt();
        t[..DIM].fill(diag);
        Self { t }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.t
    }

    /// The lower-triangular T with real diagonal encoded by `t`.
    pub(crate) fn t_matrix_from(t: &[f64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(DIM, DIM, c64(0.0, 0.0));
        for k in 0..DIM {
            m[(k, k)] = c64(t[k], 0.0);
        }
        let mut cursor = DIM;
        for i in 1..DIM {
            for j in 0..i {
                m[(i, j)] = c64(t[cursor], t[cursor + 1]);
                cursor += 2;
            }
        }
        m
    }

    pub(crate) fn t_matrix(&self) -> DMatrix<Complex64> {
        Self::t_matrix_from(&self.t)
    }

    /// ρ(t) = T†T / Tr(T†T).
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let t = self.t_matrix();
        let s = t.adjoint() * &t;
        let trace = s.trace().re;
        if !(trace > f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument(
                "all-zero parameter vector has no state".into(),
            ));
        }
        let m = s.scale(1.0 / trace);
        let m = (m.clone() + m.adjoint()).scale(0.5);
        DensityMatrix::new(m)
    }

    /// Factors a density matrix back into parameters (the warm start for the
    /// likelihood fit). The input is blended with a whisper of the maximally
    /// mixed state so the factorization exists even for rank-deficient ρ.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != DIM {
            return Err(Error::DimensionMismatch(format!(
                "expected dim {DIM}, got {}",
                rho.dim()
            )));
        }
        let delta = 1e-10;
        let mut a = rho.entries().scale(1.0 - delta);
        for k in 0..DIM {
            a[(k, k)] += c64(delta / DIM as f64, 0.0);
        }

        // Lower-triangular T with T†T = A, via the exchange trick: reverse
        // both index orders, take the standard LL† Cholesky, reverse back.
        let rev = DMatrix::from_fn(DIM, DIM, |i, j| a[(DIM - 1 - i, DIM - 1 - j)]);
        let l = cholesky_lower(&rev)?;
        let mut t_mat = DMatrix::from_element(DIM, DIM, c64(0.0, 0.0));
        for i in 0..DIM {
            for j in 0..=i {
                // T = J·L†·J
                t_mat[(i, j)] = l[(DIM - 1 - j, DIM - 1 - i)].conj();
            }
        }

        let mut t = vec![0.0; PARAM_COUNT];
        for k in 0..DIM {
            t[k] = t_mat[(k, k)].re;
        }
        let mut cursor = DIM;
        for i in 1..DIM {
            for j in 0..i {
                t[cursor] = t_mat[(i, j)].re;
                t[cursor + 1] = t_mat[(i, j)].im;
                cursor += 2;
            }
        }
        Self::new(t)
    }
}

/// Standard complex Cholesky A = L·L† for Hermitian positive-definite A.
fn cholesky_lower(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut l = DMatrix::from_element(n, n, c64(0.0, 0.0));
    for j in 0..n {
        let mut s = a[(j, j)].re;
        for k in 0..j {
            s -= l[(j, k)].norm_sqr();
        }
        if s <= 0.0 {
            return Err(Error::NonPhysical(format!(
                "Cholesky pivot {j} is non-positive ({s:e})"
            )));
        }
        let d = s.sqrt();
        l[(j, j)] = c64(d, 0.0);
        for i in (j + 1)..n {
            let mut c = a[(i, j)];
            for k in 0..j {
                c -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = c / d;
        }
    }
    Ok(l)
}
