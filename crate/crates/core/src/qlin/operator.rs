use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::{hermitian_eigen, Eigendecomposition};
use super::{c64, qubit_count_for_dim, PureState, HERMITICITY_TOL};
use crate::error::{Error, Result};

/// A Hermitian operator on n qubits (trace unconstrained): observables,
/// projectors, witness operators.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: DMatrix<Complex64>,
    qubit_count: usize,
}

impl HermitianOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidState(format!(
                "operator is {}x{}, not square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let qubit_count = qubit_count_for_dim(entries.nrows()).ok_or_else(|| {
            Error::InvalidState(format!(
                "dimension {} is not a power of two",
                entries.nrows()
            ))
        })?;
        let dev = (&entries - entries.adjoint())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        if dev > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "operator deviates from Hermitian by {dev:e}"
            )));
        }
        Ok(Self {
            entries,
            qubit_count,
        })
    }

    pub fn identity(qubit_count: usize) -> Self {
        let d = 1usize << qubit_count;
        Self {
            entries: DMatrix::from_diagonal_element(d, d, c64(1.0, 0.0)),
            qubit_count,
        }
    }

    /// The rank-1 projector |ψ⟩⟨ψ|.
    pub fn projector(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        let d = psi.dim();
        Self {
            entries: DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()),
            qubit_count: psi.qubit_count(),
        }
    }

    pub fn pauli_x() -> Self {
        Self {
            entries: DMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]),
            qubit_count: 1,
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            entries: DMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)]),
            qubit_count: 1,
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            entries: DMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)]),
            qubit_count: 1,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Kronecker composition; `self` supplies the most significant qubits.
    pub fn tensor(&self, other: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            entries: self.entries.kronecker(&other.entries),
            qubit_count: self.qubit_count + other.qubit_count,
        }
    }

    pub fn scaled(&self, factor: f64) -> HermitianOperator {
        HermitianOperator {
            entries: self.entries.scale(factor),
            qubit_count: self.qubit_count,
        }
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "adding dim {} to dim {}",
                other.dim(),
                self.dim()
            )));
        }
        Ok(HermitianOperator {
            entries: &self.entries + &other.entries,
            qubit_count: self.qubit_count,
        })
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.add(&other.scaled(-1.0))
    }

    /// Eigenvalues (descending) and orthonormal eigenvectors.
    pub fn eigendecompose(&self) -> Eigendecomposition {
        let (eigenvalues, eigenvectors) = hermitian_eigen(&self.entries);
        Eigendecomposition {
            eigenvalues,
            eigenvectors,
        }
    }
}
