use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;

use super::{c64, DensityMatrix, PureState};
use crate::error::{Error, Result};

/// A tensor product of single-qubit unitaries, each parameterized by Euler
/// angles as Rz(α)·Ry(β)·Rz(γ) with the global phase dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    angles: Vec<[f64; 3]>,
}

fn rz(theta: f64) -> Matrix2<Complex64> {
    let h = theta / 2.0;
    Matrix2::new(
        Complex64::from_polar(1.0, -h),
        c64(0.0, 0.0),
        c64(0.0, 0.0),
        Complex64::from_polar(1.0, h),
    )
}

fn ry(theta: f64) -> Matrix2<Complex64> {
    let h = theta / 2.0;
    Matrix2::new(
        c64(h.cos(), 0.0),
        c64(-h.sin(), 0.0),
        c64(h.sin(), 0.0),
        c64(h.cos(), 0.0),
    )
}

impl LocalUnitary {
    pub fn new(angles: Vec<[f64; 3]>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidArgument("no qubits".into()));
        }
        Ok(Self { angles })
    }

    pub fn identity(qubit_count: usize) -> Self {
        Self {
            angles: vec![[0.0; 3]; qubit_count],
        }
    }

    /// Uniform angle draws: α, γ ∈ [0, 2π), β ∈ [0, π].
    pub fn random<R: Rng + ?Sized>(qubit_count: usize, rng: &mut R) -> Self {
        let angles = (0..qubit_count)
            .map(|_| {
                [
                    rng.random_range(0.0..std::f64::consts::TAU),
                    rng.random_range(0.0..std::f64::consts::PI),
                    rng.random_range(0.0..std::f64::consts::TAU),
                ]
            })
            .collect();
        Self { angles }
    }

    pub fn qubit_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[[f64; 3]] {
        &self.angles
    }

    /// Flat parameter view [α₀, β₀, γ₀, α₁, …], the optimizer's coordinates.
    pub fn to_flat(&self) -> Vec<f64> {
        self.angles.iter().flatten().copied().collect()
    }

    pub fn from_flat(params: &[f64]) -> Result<Self> {
        if params.is_empty() || params.len() % 3 != 0 {
            return Err(Error::InvalidArgument(format!(
                "{} parameters is not a multiple of 3",
                params.len()
            )));
        }
        Ok(Self {
            angles: params.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        })
    }

    /// The 2×2 unitary acting on one qubit.
    pub fn single(&self, qubit: usize) -> Matrix2<Complex64> {
        let [a, b, g] = self.angles[qubit];
        rz(a) * ry(b) * rz(g)
    }

    /// The full 2^n×2^n tensor-product matrix.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(1, 1, c64(1.0, 0.0));
        for q in 0..self.angles.len() {
            let u = self.single(q);
            let u = DMatrix::from_fn(2, 2, |i, j| u[(i, j)]);
            m = m.kronecker(&u);
        }
        m
    }

    /// U|ψ⟩.
    pub fn apply_pure(&self, psi: &PureState) -> Result<PureState> {
        if psi.qubit_count() != self.qubit_count() {
            return Err(Error::DimensionMismatch(format!(
                "unitary on {} qubits applied to {}-qubit state",
                self.qubit_count(),
                psi.qubit_count()
            )));
        }
        let v = self.matrix() * psi.amplitudes();
        PureState::new(v.iter().copied().collect())
    }

    /// UρU†.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.qubit_count() != self.qubit_count() {
            return Err(Error::DimensionMismatch(format!(
                "unitary on {} qubits applied to {}-qubit matrix",
                self.qubit_count(),
                rho.qubit_count()
            )));
        }
        let u = self.matrix();
        let m = &u * rho.entries() * u.adjoint();
        // Symmetrize away the roundoff from the two multiplications.
        let m = (m.clone() + m.adjoint()).scale(0.5);
        DensityMatrix::new(m)
    }
}
