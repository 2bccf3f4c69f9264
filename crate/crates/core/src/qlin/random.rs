//! Seeded random states and operators, used by the statistical tests and the
//! Monte-Carlo machinery.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{c64, DensityMatrix, HermitianOperator, PureState};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Haar-ish random pure state: complex Gaussian amplitudes, normalized.
pub fn random_pure<R: Rng + ?Sized>(qubit_count: usize, rng: &mut R) -> PureState {
    let d = 1usize << qubit_count;
    let v: Vec<Complex64> = (0..d).map(|_| gaussian_c64(rng)).collect();
    PureState::normalized(v).expect("gaussian vector is non-zero")
}

/// Random density matrix GG†/Tr(GG†) with G a d×rank complex Ginibre matrix;
/// `rank = d` gives a full-rank state.
pub fn random_density<R: Rng + ?Sized>(
    qubit_count: usize,
    rank: usize,
    rng: &mut R,
) -> DensityMatrix {
    let d = 1usize << qubit_count;
    let rank = rank.clamp(1, d);
    let g = DMatrix::from_fn(d, rank, |_, _| gaussian_c64(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    let m = m.scale(1.0 / trace);
    let m = (m.clone() + m.adjoint()).scale(0.5);
    DensityMatrix::new(m).expect("Ginibre product is a valid state")
}

/// Random Hermitian operator (G + G†)/2 with Ginibre G.
pub fn random_hermitian<R: Rng + ?Sized>(qubit_count: usize, rng: &mut R) -> HermitianOperator {
    let d = 1usize << qubit_count;
    let g = DMatrix::from_fn(d, d, |_, _| gaussian_c64(rng));
    let m = (g.clone() + g.adjoint()).scale(0.5);
    HermitianOperator::new(m).expect("symmetrized matrix is Hermitian")
}
