use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use super::random::{random_density, random_hermitian, random_pure};
use super::states::*;
use super::*;
use crate::error::Error;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_entry_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

#[test]
fn tensor_of_basis_states() {
    let hh = ket_h().tensor(&ket_h());
    assert_eq!(hh.dim(), 4);
    assert_eq!(hh.amplitude(0), c64(1.0, 0.0));
    for k in 1..4 {
        assert_eq!(hh.amplitude(k), c64(0.0, 0.0));
    }
}

#[test]
fn tensor_of_diagonal_states() {
    let dd = ket_d().tensor(&ket_d());
    for k in 0..4 {
        assert!((dd.amplitude(k) - c64(0.5, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn tensor_of_bell_pairs() {
    // Hand expansion of ½(|HH⟩+|VV⟩)⊗(|HH⟩+|VV⟩): weight ½ on the
    // big-endian indices HHHH=0, HHVV=3, VVHH=12, VVVV=15.
    let psi = phi_plus().tensor(&phi_plus());
    assert_eq!(psi.dim(), 16);
    for k in 0..16 {
        let expect = if matches!(k, 0 | 3 | 12 | 15) { 0.5 } else { 0.0 };
        assert!(
            (psi.amplitude(k) - c64(expect, 0.0)).norm() < 1e-15,
            "index {k}"
        );
    }
}

#[test]
fn partial_trace_of_ghz_reduction() {
    // Hand expansion: tracing any qubit of GHZ leaves ½(|HH⟩⟨HH|+|VV⟩⟨VV|).
    let rho = ghz3().to_density();
    let reduced = rho.partial_trace(&[0, 1]).unwrap();
    assert!(max_entry_diff(reduced.entries(), half_mixed2().entries()) < 1e-12);
}

#[test]
fn partial_trace_of_product_state() {
    let rho = ket_h().tensor(&ket_h()).to_density();
    let reduced = rho.partial_trace(&[0]).unwrap();
    assert!(max_entry_diff(reduced.entries(), ket_h().to_density().entries()) < 1e-15);
}

#[test]
fn partial_trace_of_maximally_mixed() {
    let rho = DensityMatrix::maximally_mixed(3);
    let reduced = rho.partial_trace(&[0]).unwrap();
    assert!(max_entry_diff(reduced.entries(), DensityMatrix::maximally_mixed(1).entries()) < 1e-15);
}

#[test]
fn partial_trace_rejects_bad_keep_sets() {
    let rho = DensityMatrix::maximally_mixed(3);
    assert!(matches!(
        rho.partial_trace(&[]),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        rho.partial_trace(&[3]),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        rho.partial_trace(&[1, 1]),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn projecting_trigger_photon_yields_ghz() {
    let four = ghz(4);
    let (reduced, prob) = four.project_qubit(3, &ket_d()).unwrap();
    assert!((prob - 0.5).abs() < 1e-12);
    let overlap = reduced.inner(&ghz3()).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-12);
}

#[test]
fn projecting_onto_orthogonal_state_is_degenerate() {
    let hh = ket_h().tensor(&ket_h());
    match hh.project_qubit(0, &ket_v()) {
        Err(Error::DegenerateProjection { probability, .. }) => assert!(probability < 1e-14),
        other => panic!("expected degenerate projection, got {other:?}"),
    }
}

#[test]
fn projecting_separable_state() {
    let psi = ket_d().tensor(&ket_h());
    let (reduced, prob) = psi.project_qubit(0, &ket_h()).unwrap();
    assert!((prob - 0.5).abs() < 1e-12);
    assert!((reduced.inner(&ket_h()).unwrap().norm() - 1.0).abs() < 1e-12);
}

#[test]
fn fidelity_examples() {
    let ghz_rho = ghz3().to_density();
    assert!((ghz_rho.fidelity_pure(&ghz3()).unwrap() - 1.0).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(3);
    assert!((mixed.fidelity_pure(&ghz3()).unwrap() - 0.125).abs() < 1e-12);
    // |⟨GHZ|HHH⟩|² = ½
    let hhh = basis_state(3, 0).to_density();
    assert!((hhh.fidelity_pure(&ghz3()).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn fidelity_ignores_global_phase() {
    let mut r = rng(11);
    for _ in 0..20 {
        let rho = random_density(3, 8, &mut r);
        let psi = random_pure(3, &mut r);
        let phase = Complex64::from_polar(1.0, 2.1234);
        let shifted =
            PureState::new(psi.amplitudes().iter().map(|a| a * phase).collect()).unwrap();
        let f0 = rho.fidelity_pure(&psi).unwrap();
        let f1 = rho.fidelity_pure(&shifted).unwrap();
        assert!((f0 - f1).abs() < 1e-12);
    }
}

#[test]
fn expectation_examples() {
    let mut r = rng(12);
    let rho = random_density(3, 8, &mut r);
    let id = HermitianOperator::identity(3);
    assert!((rho.expectation(&id).unwrap() - 1.0).abs() < 1e-10);

    // ⟨ZZZ⟩ on GHZ: the HHH and VVV contributions cancel.
    let z = HermitianOperator::pauli_z();
    let zzz = z.tensor(&z).tensor(&z);
    let ghz_rho = ghz3().to_density();
    assert!(ghz_rho.expectation(&zzz).unwrap().abs() < 1e-12);

    // GHZ is a +1 eigenstate of XXX.
    let x = HermitianOperator::pauli_x();
    let xxx = x.tensor(&x).tensor(&x);
    assert!((ghz_rho.expectation(&xxx).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn expectation_is_bilinear() {
    let mut r = rng(13);
    for _ in 0..10 {
        let rho1 = random_density(2, 4, &mut r);
        let rho2 = random_density(2, 4, &mut r);
        let a = random_hermitian(2, &mut r);
        let b = random_hermitian(2, &mut r);
        let p = 0.3;
        let mix = DensityMatrix::mixture(&[(p, &rho1), (1.0 - p, &rho2)]).unwrap();
        let combo = a.scaled(1.7).add(&b.scaled(-0.4)).unwrap();

        let lhs = mix.expectation(&combo).unwrap();
        let rhs = p * (1.7 * rho1.expectation(&a).unwrap() - 0.4 * rho1.expectation(&b).unwrap())
            + (1.0 - p)
                * (1.7 * rho2.expectation(&a).unwrap() - 0.4 * rho2.expectation(&b).unwrap());
        assert!((lhs - rhs).abs() < 1e-10);
    }
}

#[test]
fn projection_probabilities_partition() {
    let mut r = rng(14);
    for _ in 0..10 {
        let psi = random_pure(3, &mut r);
        for basis in [(ket_h(), ket_v()), (ket_d(), ket_a()), (ket_r(), ket_l())] {
            let mut total = 0.0;
            for onto in [&basis.0, &basis.1] {
                match psi.project_qubit(1, onto) {
                    Ok((_, p)) => total += p,
                    Err(Error::DegenerateProjection { probability, .. }) => total += probability,
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
            assert!((total - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn mixtures_of_valid_states_are_valid() {
    let mut r = rng(15);
    for k in 0..10 {
        let rho1 = random_density(3, 8, &mut r);
        let rho2 = random_density(3, 3, &mut r);
        let p = k as f64 / 9.0;
        let mix = DensityMatrix::mixture(&[(p, &rho1), (1.0 - p, &rho2)]).unwrap();
        assert!(mix.is_positive_semidefinite(PSD_FLOOR));
    }
}

#[test]
fn partial_trace_inverts_tensor_product() {
    let mut r = rng(16);
    for _ in 0..10 {
        let a = random_density(2, 4, &mut r);
        let b = random_density(1, 2, &mut r);
        let joint = a.tensor(&b);
        let back = joint.partial_trace(&[0, 1]).unwrap();
        assert!(max_entry_diff(back.entries(), a.entries()) < 1e-10);
        let back_b = joint.partial_trace(&[2]).unwrap();
        assert!(max_entry_diff(back_b.entries(), b.entries()) < 1e-10);
    }
}

#[test]
fn eigendecompose_examples() {
    let z = HermitianOperator::pauli_z().eigendecompose();
    assert!((z.eigenvalues[0] - 1.0).abs() < 1e-14);
    assert!((z.eigenvalues[1] + 1.0).abs() < 1e-14);

    let id = HermitianOperator::identity(3).eigendecompose();
    for v in &id.eigenvalues {
        assert!((v - 1.0).abs() < 1e-14);
    }

    let proj = HermitianOperator::projector(&ghz3()).eigendecompose();
    assert!((proj.eigenvalues[0] - 1.0).abs() < 1e-12);
    for v in &proj.eigenvalues[1..] {
        assert!(v.abs() < 1e-12);
    }
}

#[test]
fn eigendecompose_reconstructs_random_operators() {
    let mut r = rng(17);
    for _ in 0..10 {
        let h = random_hermitian(3, &mut r);
        let eig = h.eigendecompose();
        let v = &eig.eigenvectors;
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            eig.eigenvalues.iter().map(|&x| c64(x, 0.0)).collect(),
        ));
        let rec = v * lam * v.adjoint();
        assert!(max_entry_diff(&rec, h.entries()) < EIGEN_RESIDUAL_TOL);
        let gram = v.adjoint() * v;
        let id = DMatrix::from_diagonal_element(8, 8, c64(1.0, 0.0));
        assert!(max_entry_diff(&gram, &id) < EIGEN_RESIDUAL_TOL);
        // descending order
        for w in eig.eigenvalues.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}

#[test]
fn local_unitaries_are_unitary_tensor_products() {
    let mut r = rng(18);
    for _ in 0..10 {
        let u = LocalUnitary::random(3, &mut r);
        let m = u.matrix();
        let gram = &m * m.adjoint();
        let id = DMatrix::from_diagonal_element(8, 8, c64(1.0, 0.0));
        assert!(max_entry_diff(&gram, &id) < UNITARY_TOL);

        // tensor structure: matrix equals the kron of the three singles
        let mut kron = DMatrix::from_element(1, 1, c64(1.0, 0.0));
        for q in 0..3 {
            let s = u.single(q);
            kron = kron.kronecker(&DMatrix::from_fn(2, 2, |i, j| s[(i, j)]));
        }
        assert!(max_entry_diff(&m, &kron) < 1e-14);
    }
}

#[test]
fn local_unitary_flat_roundtrip() {
    let u = LocalUnitary::new(vec![[0.1, 0.2, 0.3], [0.4, 0.5, 0.6], [0.7, 0.8, 0.9]]).unwrap();
    let flat = u.to_flat();
    assert_eq!(flat.len(), 9);
    let back = LocalUnitary::from_flat(&flat).unwrap();
    assert_eq!(u, back);
}

#[test]
fn permute_qubits_moves_amplitudes() {
    // |HVD⟩ with qubits reordered as (2,0,1) becomes |DHV⟩.
    let psi = ket_h().tensor(&ket_v()).tensor(&ket_d());
    let permuted = psi.permute_qubits(&[2, 0, 1]).unwrap();
    let expected = ket_d().tensor(&ket_h()).tensor(&ket_v());
    for k in 0..8 {
        assert!((permuted.amplitude(k) - expected.amplitude(k)).norm() < 1e-15);
    }
}

#[test]
fn sanitized_repairs_small_negativity() {
    // Build a slightly indefinite Hermitian unit-trace matrix.
    let d = 4;
    let mut m = DMatrix::from_diagonal_element(d, d, c64(0.0, 0.0));
    m[(0, 0)] = c64(0.7, 0.0);
    m[(1, 1)] = c64(0.35, 0.0);
    m[(2, 2)] = c64(-0.05, 0.0);
    m[(3, 3)] = c64(0.0, 0.0);
    let rho = DensityMatrix::new_indefinite(m).unwrap();
    assert!(!rho.is_positive_semidefinite(PSD_FLOOR));
    let fixed = rho.sanitized().unwrap();
    assert!(fixed.is_positive_semidefinite(PSD_FLOOR));
    assert!((fixed.entries().trace().re - 1.0).abs() < 1e-12);
    assert!((fixed.entry(0, 0).re - 0.7 / 1.05).abs() < 1e-12);
}

#[test]
fn constructors_reject_invalid_input() {
    assert!(PureState::new(vec![c64(1.0, 0.0); 3]).is_err());
    assert!(PureState::new(vec![c64(0.9, 0.0), c64(0.0, 0.0)]).is_err());

    let bad_trace = DMatrix::from_diagonal_element(2, 2, c64(1.0, 0.0));
    assert!(DensityMatrix::new(bad_trace).is_err());

    let non_herm = DMatrix::from_row_slice(2, 2, &[
        c64(0.5, 0.0), c64(0.3, 0.1),
        c64(0.3, 0.1), c64(0.5, 0.0),
    ]);
    assert!(DensityMatrix::new(non_herm).is_err());

    let indefinite = DMatrix::from_row_slice(2, 2, &[
        c64(1.5, 0.0), c64(0.0, 0.0),
        c64(0.0, 0.0), c64(-0.5, 0.0),
    ]);
    assert!(matches!(
        DensityMatrix::new(indefinite.clone()),
        Err(Error::NonPhysical(_))
    ));
    assert!(DensityMatrix::new_indefinite(indefinite).is_ok());

    assert!((ket_d().inner(&ket_a()).unwrap().norm()) < 1e-15);
    assert!((ket_r().amplitude(1) - c64(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
}
