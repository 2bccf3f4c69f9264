use nalgebra::DVector;
use num_complex::Complex64;

use super::{qubit_bit, qubit_count_for_dim, DensityMatrix, NORM_TOL, PROJECTION_PROB_FLOOR};
use crate::error::{Error, Result};

/// A pure multi-qubit state: a unit-norm complex amplitude vector of length
/// 2^n in the big-endian computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
    qubit_count: usize,
}

impl PureState {
    /// Builds a state from amplitudes, requiring unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubit_count = qubit_count_for_dim(amplitudes.len()).ok_or_else(|| {
            Error::InvalidState(format!(
                "amplitude vector length {} is not a power of two",
                amplitudes.len()
            ))
        })?;
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 by more than {NORM_TOL:e}"
            )));
        }
        Ok(Self {
            amplitudes: v,
            qubit_count,
        })
    }

    /// Builds a state from arbitrary non-zero amplitudes, rescaling to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let qubit_count = qubit_count_for_dim(amplitudes.len()).ok_or_else(|| {
            Error::InvalidState(format!(
                "amplitude vector length {} is not a power of two",
                amplitudes.len()
            ))
        })?;
        let mut v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm < PROJECTION_PROB_FLOOR.sqrt() {
            return Err(Error::InvalidState(
                "cannot normalize a (numerically) zero vector".into(),
            ));
        }
        v /= Complex64::new(norm, 0.0);
        Ok(Self {
            amplitudes: v,
            qubit_count,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// The inner product ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "inner product between dim {} and dim {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Kronecker composition |self⟩ ⊗ |other⟩; `self` supplies the most
    /// significant qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let (da, db) = (self.dim(), other.dim());
        let mut out = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                out.push(self.amplitudes[i] * other.amplitudes[j]);
            }
        }
        PureState {
            amplitudes: DVector::from_vec(out),
            qubit_count: self.qubit_count + other.qubit_count,
        }
    }

    /// Projects one qubit onto a single-qubit state and drops it, returning
    /// the renormalized state on the remaining qubits and the outcome
    /// probability. Outcomes with probability below
    /// [`PROJECTION_PROB_FLOOR`] are rejected as degenerate.
    pub fn project_qubit(&self, qubit: usize, onto: &PureState) -> Result<(PureState, f64)> {
        if onto.qubit_count() != 1 {
            return Err(Error::InvalidArgument(format!(
                "projection target must be a 1-qubit state, got {} qubits",
                onto.qubit_count()
            )));
        }
        if qubit >= self.qubit_count {
            return Err(Error::InvalidArgument(format!(
                "qubit index {qubit} out of range for a {}-qubit state",
                self.qubit_count
            )));
        }
        if self.qubit_count == 1 {
            return Err(Error::InvalidArgument(
                "cannot drop the last remaining qubit".into(),
            ));
        }
        let n = self.qubit_count;
        let rem_dim = self.dim() / 2;
        let shift = n - 1 - qubit; // bit position of `qubit` in a full index
        let low_mask = (1usize << shift) - 1;
        let mut reduced = Vec::with_capacity(rem_dim);
        for j in 0..rem_dim {
            // Splice the projected qubit's bit back into the reduced index.
            let high = (j & !low_mask) << 1;
            let low = j & low_mask;
            let mut amp = Complex64::new(0.0, 0.0);
            for s in 0..2usize {
                let full = high | (s << shift) | low;
                amp += onto.amplitudes[s].conj() * self.amplitudes[full];
            }
            reduced.push(amp);
        }
        let v = DVector::from_vec(reduced);
        let probability = v.norm_squared();
        if probability < PROJECTION_PROB_FLOOR {
            return Err(Error::DegenerateProjection {
                probability,
                floor: PROJECTION_PROB_FLOOR,
            });
        }
        let v = v / Complex64::new(probability.sqrt(), 0.0);
        Ok((
            PureState {
                amplitudes: v,
                qubit_count: n - 1,
            },
            probability,
        ))
    }

    /// Reorders qubits so that output qubit `q` is input qubit `perm[q]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.qubit_count;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        let mut out = DVector::from_element(self.dim(), Complex64::new(0.0, 0.0));
        for i in 0..self.dim() {
            // Output qubit q carries the bit of input qubit perm[q].
            let mut dst = 0usize;
            for q in 0..n {
                dst |= qubit_bit(i, perm[q], n) << (n - 1 - q);
            }
            out[dst] = self.amplitudes[i];
        }
        Ok(PureState {
            amplitudes: out,
            qubit_count: n,
        })
    }

    /// The rank-1 density matrix |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}
