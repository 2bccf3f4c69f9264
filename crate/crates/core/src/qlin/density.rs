use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::hermitian_eigen;
use super::{
    c64, qubit_count_for_dim, HermitianOperator, PureState, HERMITICITY_TOL, PSD_FLOOR, TRACE_TOL,
};
use crate::error::{Error, Result};

/// A d×d density matrix: Hermitian, unit trace, positive semidefinite up to
/// the numerical floor [`PSD_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    qubit_count: usize,
}

fn check_hermitian(m: &DMatrix<Complex64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidState(format!(
            "matrix is {}x{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let qubit_count = qubit_count_for_dim(m.nrows()).ok_or_else(|| {
        Error::InvalidState(format!("dimension {} is not a power of two", m.nrows()))
    })?;
    let dev = (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if dev > HERMITICITY_TOL {
        return Err(Error::InvalidState(format!(
            "matrix deviates from Hermitian by {dev:e}"
        )));
    }
    Ok(qubit_count)
}

impl DensityMatrix {
    /// Builds a density matrix, enforcing hermiticity, unit trace, and
    /// positive semidefiniteness (eigenvalues ≥ [`PSD_FLOOR`]).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::new_indefinite(entries)?;
        let min = rho.min_eigenvalue();
        if min < PSD_FLOOR {
            return Err(Error::NonPhysical(format!(
                "minimum eigenvalue {min:e} is below the {PSD_FLOOR:e} floor"
            )));
        }
        Ok(rho)
    }

    /// Builds a Hermitian unit-trace matrix without the positivity check.
    ///
    /// Linear inversion of noisy counts can produce indefinite matrices; this
    /// constructor lets them be represented so the negativity can be reported
    /// rather than silently repaired. Everything else should use [`Self::new`].
    pub fn new_indefinite(entries: DMatrix<Complex64>) -> Result<Self> {
        let qubit_count = check_hermitian(&entries)?;
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {trace} deviates from 1 by more than {TRACE_TOL:e}"
            )));
        }
        Ok(Self {
            entries,
            qubit_count,
        })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.dim();
        let a = psi.amplitudes();
        let entries = DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj());
        Self {
            entries,
            qubit_count: psi.qubit_count(),
        }
    }

    /// The maximally mixed state I/d on `qubit_count` qubits.
    pub fn maximally_mixed(qubit_count: usize) -> Self {
        let d = 1usize << qubit_count;
        let w = c64(1.0 / d as f64, 0.0);
        Self {
            entries: DMatrix::from_diagonal_element(d, d, w),
            qubit_count,
        }
    }

    /// Convex mixture Σ wᵢ ρᵢ; weights must be non-negative and sum to 1.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let (first_w, first) = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let d = first.dim();
        let mut total = 0.0;
        let mut entries = DMatrix::from_element(d, d, c64(0.0, 0.0));
        for &(w, rho) in std::iter::once(&(*first_w, *first)).chain(components.iter().skip(1)) {
            if w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            if rho.dim() != d {
                return Err(Error::DimensionMismatch(
                    "mixture components differ in dimension".into(),
                ));
            }
            entries += rho.entries.scale(w);
            total += w;
        }
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Self::new(entries)
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

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Whether all eigenvalues sit above `floor`.
    pub fn is_positive_semidefinite(&self, floor: f64) -> bool {
        self.min_eigenvalue() >= floor
    }

    /// Clamps negative eigenvalues to zero and renormalizes the trace.
    ///
    /// This is the one deliberate repair point for unphysical matrices; it is
    /// never applied implicitly.
    pub fn sanitized(&self) -> Result<Self> {
        let (vals, vecs) = hermitian_eigen(&self.entries);
        let clamped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        if total <= 0.0 {
            return Err(Error::NonPhysical(
                "matrix has no positive eigenvalues to keep".into(),
            ));
        }
        let d = self.dim();
        let mut entries = DMatrix::from_element(d, d, c64(0.0, 0.0));
        for (k, &v) in clamped.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let col = vecs.column(k);
            let w = c64(v / total, 0.0);
            for i in 0..d {
                for j in 0..d {
                    entries[(i, j)] += w * col[i] * col[j].conj();
                }
            }
        }
        // Symmetrize away eigenvector roundoff before validating.
        let entries = (entries.clone() + entries.adjoint()).scale(0.5);
        Self::new(entries)
    }

    /// Kronecker composition ρ_a ⊗ ρ_b; `self` supplies the most significant
    /// qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            entries: self.entries.kronecker(&other.entries),
            qubit_count: self.qubit_count + other.qubit_count,
        }
    }

    /// Traces out every qubit not listed in `keep`. Kept qubits retain their
    /// relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.qubit_count;
        if keep.is_empty() {
            return Err(Error::InvalidArgument("empty keep set".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || *sorted.last().unwrap() >= n {
            return Err(Error::InvalidArgument(format!(
                "keep set {keep:?} is not a set of valid qubit indices for n={n}"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !sorted.contains(q)).collect();
        let dk = 1usize << sorted.len();
        let dt = 1usize << traced.len();

        // Expands a kept-subsystem index and a traced-subsystem index into a
        // full index, respecting each qubit's original bit position.
        let expand = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in sorted.iter().enumerate() {
                let bit = (kept_idx >> (sorted.len() - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (traced_idx >> (traced.len() - 1 - pos)) & 1;
                full |= bit << (n - 1 - q);
            }
            full
        };

        let mut out = DMatrix::from_element(dk, dk, c64(0.0, 0.0));
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = c64(0.0, 0.0);
                for e in 0..dt {
                    acc += self.entries[(expand(a, e), expand(b, e))];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(DensityMatrix {
            entries: out,
            qubit_count: sorted.len(),
        })
    }

    /// ⟨ψ|ρ|ψ⟩, clamped to [0, 1].
    pub fn fidelity_pure(&self, psi: &PureState) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state dim {} vs matrix dim {}",
                psi.dim(),
                self.dim()
            )));
        }
        let v = psi.amplitudes();
        let val = v.dotc(&(&self.entries * v));
        debug_assert!(val.im.abs() <= 1e-10, "fidelity residue {}", val.im);
        Ok(val.re.clamp(0.0, 1.0))
    }

    /// Tr(obs·ρ). The imaginary residue must stay below 1e-10; both inputs
    /// are Hermitian so anything larger is a usage bug.
    pub fn expectation(&self, obs: &HermitianOperator) -> Result<f64> {
        if obs.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "observable dim {} vs matrix dim {}",
                obs.dim(),
                self.dim()
            )));
        }
        let mut acc = c64(0.0, 0.0);
        let d = self.dim();
        let o = obs.entries();
        for i in 0..d {
            for k in 0..d {
                acc += o[(i, k)] * self.entries[(k, i)];
            }
        }
        assert!(
            acc.im.abs() <= 1e-10,
            "expectation of Hermitian operator has imaginary residue {:e}",
            acc.im
        );
        Ok(acc.re)
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "trace distance between dim {} and dim {}",
                self.dim(),
                other.dim()
            )));
        }
        let diff = &self.entries - &other.entries;
        let (vals, _) = hermitian_eigen(&diff);
        Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
    }
}
