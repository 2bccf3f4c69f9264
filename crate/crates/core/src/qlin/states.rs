//! The named polarization states the experiment is built from.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{c64, DensityMatrix, PureState};
use crate::error::Result;

/// |H⟩, horizontal: computational 0.
pub fn ket_h() -> PureState {
    PureState::new(vec![c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap()
}

/// |V⟩, vertical: computational 1.
pub fn ket_v() -> PureState {
    PureState::new(vec![c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap()
}

/// |D⟩ = (|H⟩+|V⟩)/√2, diagonal.
pub fn ket_d() -> PureState {
    PureState::new(vec![c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)]).unwrap()
}

/// |A⟩ = (|H⟩−|V⟩)/√2, antidiagonal.
pub fn ket_a() -> PureState {
    PureState::new(vec![c64(FRAC_1_SQRT_2, 0.0), c64(-FRAC_1_SQRT_2, 0.0)]).unwrap()
}

/// |R⟩ = (|H⟩−i|V⟩)/√2, right circular.
pub fn ket_r() -> PureState {
    PureState::new(vec![c64(FRAC_1_SQRT_2, 0.0), c64(0.0, -FRAC_1_SQRT_2)]).unwrap()
}

/// |L⟩ = (|H⟩+i|V⟩)/√2, left circular.
pub fn ket_l() -> PureState {
    PureState::new(vec![c64(FRAC_1_SQRT_2, 0.0), c64(0.0, FRAC_1_SQRT_2)]).unwrap()
}

/// Computational basis state |index⟩ on `qubit_count` qubits.
pub fn basis_state(qubit_count: usize, index: usize) -> PureState {
    let d = 1usize << qubit_count;
    assert!(index < d, "basis index {index} out of range for dim {d}");
    let mut v = vec![c64(0.0, 0.0); d];
    v[index] = c64(1.0, 0.0);
    PureState::new(v).unwrap()
}

/// The Bell state |φ⁺⟩ = (|HH⟩+|VV⟩)/√2.
pub fn phi_plus() -> PureState {
    PureState::new(vec![
        c64(FRAC_1_SQRT_2, 0.0),
        c64(0.0, 0.0),
        c64(0.0, 0.0),
        c64(FRAC_1_SQRT_2, 0.0),
    ])
    .unwrap()
}

/// The n-qubit GHZ state (|0…0⟩+|1…1⟩)/√2; `ghz(3)` is (|HHH⟩+|VVV⟩)/√2.
pub fn ghz(qubit_count: usize) -> PureState {
    let d = 1usize << qubit_count;
    let mut v = vec![c64(0.0, 0.0); d];
    v[0] = c64(FRAC_1_SQRT_2, 0.0);
    v[d - 1] = c64(FRAC_1_SQRT_2, 0.0);
    PureState::new(v).unwrap()
}

/// The three-photon GHZ state on photons (A, B, 1).
pub fn ghz3() -> PureState {
    ghz(3)
}

/// Depolarized GHZ preset p·|GHZ⟩⟨GHZ| + (1−p)·I/8, the calibrated noise
/// stand-in used throughout the tests and the CLI (`werner:p`).
pub fn werner_ghz3(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(crate::error::Error::InvalidArgument(format!(
            "werner parameter {p} outside [0, 1]"
        )));
    }
    DensityMatrix::mixture(&[
        (p, &ghz3().to_density()),
        (1.0 - p, &DensityMatrix::maximally_mixed(3)),
    ])
}

/// The half-mixed two-photon state ½(|HH⟩⟨HH| + |VV⟩⟨VV|) left behind when
/// the photon pairs fail to overlap at the beam splitter.
pub fn half_mixed2() -> DensityMatrix {
    let hh = basis_state(2, 0).to_density();
    let vv = basis_state(2, 3).to_density();
    DensityMatrix::mixture(&[(0.5, &hh), (0.5, &vv)]).unwrap()
}

