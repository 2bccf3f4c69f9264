use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

use super::*;
use crate::qlin::random::{random_density, random_pure};
use crate::qlin::{states, DensityMatrix, LocalUnitary};
use crate::reconstruct::{monte_carlo_with, McQuantity, MleConfig};
use crate::tomo::simulate_counts;

#[test]
fn ghz_fidelity_examples() {
    let ghz = states::ghz3().to_density();
    assert!((ghz_fidelity(&ghz).unwrap() - 1.0).abs() < 1e-12);

    let werner = states::werner_ghz3(0.735).unwrap();
    assert!((ghz_fidelity(&werner).unwrap() - 0.768).abs() < 1e-3);

    let mixed = DensityMatrix::maximally_mixed(3);
    assert!((ghz_fidelity(&mixed).unwrap() - 0.125).abs() < 1e-12);

    assert!(ghz_fidelity(&DensityMatrix::maximally_mixed(2)).is_err());
}

#[test]
fn ghz_fidelity_is_affine_in_the_mixing_parameter() {
    for p in [0.0, 0.25, 0.5, 0.735, 1.0] {
        let rho = states::werner_ghz3(p).unwrap();
        let expected = p + (1.0 - p) / 8.0;
        assert!((ghz_fidelity(&rho).unwrap() - expected).abs() < 1e-10);
    }
}

#[test]
fn witness_examples() {
    let ghz = states::ghz3().to_density();
    let w = witness_minimum(&ghz, 4, 0).unwrap();
    assert!((w.value + 0.25).abs() < 1e-6, "witness {}", w.value);
    assert_eq!(w.restarts_used, 4);

    let mixed = DensityMatrix::maximally_mixed(3);
    let w = witness_minimum(&mixed, 4, 0).unwrap();
    assert!((w.value - 0.625).abs() < 1e-6, "witness {}", w.value);
}

#[test]
fn witness_of_product_state_hits_the_grid_oracle() {
    // Oracle: over product states ⊗ᵢ(cos(θᵢ/2), e^{iφᵢ}sin(θᵢ/2)), the GHZ
    // overlap is |c_a c_b c_c + e^{iΦ} s_a s_b s_c|²/2 and depends on the
    // phases only through Φ; a dense grid over (θ_a, θ_b, θ_c, Φ) bounds the
    // maximum, which analysis must match at 1/2.
    let mut oracle: f64 = 0.0;
    let n = 40;
    for ia in 0..=n {
        let (sa, ca) = (PI * ia as f64 / n as f64 / 2.0).sin_cos();
        for ib in 0..=n {
            let (sb, cb) = (PI * ib as f64 / n as f64 / 2.0).sin_cos();
            for ic in 0..=n {
                let (sc, cc) = (PI * ic as f64 / n as f64 / 2.0).sin_cos();
                let c = ca * cb * cc;
                let s = sa * sb * sc;
                // |c + e^{iΦ}s|²/2 is maximal at Φ = 0: (c+s)²/2.
                let best = (c + s) * (c + s) / 2.0;
                oracle = oracle.max(best);
            }
        }
    }
    assert!((oracle - 0.5).abs() < 1e-3, "grid oracle {oracle}");

    let hhh = states::basis_state(3, 0).to_density();
    let w = witness_minimum(&hhh, 16, 3).unwrap();
    assert!((w.value - 0.25).abs() < 1e-6, "witness {}", w.value);
}

#[test]
fn witness_result_is_self_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let rho = random_density(3, 4, &mut rng);
    let w = witness_minimum(&rho, 8, 7).unwrap();
    let recomputed = witness_value_at(&rho, &w.optimal_unitary).unwrap();
    assert!(
        (recomputed - w.value).abs() < 1e-9,
        "{} vs {}",
        recomputed,
        w.value
    );
    // Hard floor: ⟨𝒲⟩ ≥ 3/4 − 1.
    assert!(w.value >= -0.25 - 1e-12);
}

#[test]
fn witness_is_invariant_under_local_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let rho = states::werner_ghz3(0.8).unwrap();
    let base = witness_minimum(&rho, 16, 11).unwrap().value;
    for _ in 0..3 {
        let u = LocalUnitary::random(3, &mut rng);
        let rotated = u.conjugate(&rho).unwrap();
        let w = witness_minimum(&rotated, 16, 11).unwrap().value;
        assert!((w - base).abs() < 1e-6, "{w} vs {base}");
    }
}

#[test]
fn mermin_correlation_examples() {
    let ghz = states::ghz3().to_density();
    let x = BlochMeasurement::x();
    let y = BlochMeasurement::y();
    assert!((mermin_correlation(&ghz, &x, &x, &x).unwrap() - 1.0).abs() < 1e-12);
    assert!((mermin_correlation(&ghz, &y, &y, &x).unwrap() + 1.0).abs() < 1e-12);

    let mixed = DensityMatrix::maximally_mixed(3);
    assert!(mermin_correlation(&mixed, &y, &x, &y).unwrap().abs() < 1e-12);
}

#[test]
fn mermin_correlations_stay_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    for _ in 0..20 {
        let rho = random_density(3, 8, &mut rng);
        let m = BlochMeasurement::new(
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
        );
        let n = BlochMeasurement::new(
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
        );
        let k = BlochMeasurement::new(
            rng.random_range(0.0..PI),
            rng.random_range(0.0..TAU),
        );
        let e = mermin_correlation(&rho, &m, &n, &k).unwrap();
        assert!((-1.0..=1.0).contains(&e), "correlation {e}");
    }
}

#[test]
fn canonical_settings_reach_four_on_ghz() {
    // E(YYX) = E(YXY) = E(XYY) = −1 and E(XXX) = +1, so the paper's
    // combination hits |−1−1−1−1| = 4 with Y unprimed and X primed.
    let ghz = states::ghz3().to_density();
    let y = BlochMeasurement::y();
    let x = BlochMeasurement::x();
    let settings: MerminSettings = [y, x, y, x, y, x];
    assert!((mermin_value(&ghz, &settings).unwrap() - 4.0).abs() < 1e-12);

    let result = mermin_maximum(&ghz, 4, 0).unwrap();
    assert!((result.value - 4.0).abs() < 1e-4, "mermin {}", result.value);
    let recomputed = mermin_value(&ghz, &result.settings).unwrap();
    assert!((recomputed - result.value).abs() < 1e-9);
}

#[test]
fn mermin_scales_linearly_for_depolarized_ghz() {
    for p in [0.6, 0.8, 1.0] {
        let rho = states::werner_ghz3(p).unwrap();
        let m = mermin_maximum(&rho, 4, 0).unwrap().value;
        assert!((m - 4.0 * p).abs() < 1e-3, "p={p}: {m}");
    }
    let rho = states::werner_ghz3(0.735).unwrap();
    let m = mermin_maximum(&rho, 4, 0).unwrap().value;
    assert!((m - 2.94).abs() < 1e-3, "{m}");
}

#[test]
fn product_states_respect_the_local_bound() {
    // Vertex oracle: for |HHH⟩ the correlations factor into cos θ terms, so
    // M is multilinear in the three z-components and maximal at a sign
    // pattern; enumerating all 64 gives 2.
    let mut oracle: f64 = 0.0;
    for bits in 0..64u32 {
        let sign = |k: u32| if bits & (1 << k) != 0 { 1.0f64 } else { -1.0f64 };
        let (a, ap, b, bp, c, cp) = (
            sign(0),
            sign(1),
            sign(2),
            sign(3),
            sign(4),
            sign(5),
        );
        oracle = oracle.max((a * b * cp + a * bp * c + ap * b * c - ap * bp * cp).abs());
    }
    assert!((oracle - 2.0).abs() < 1e-12);

    let hhh = states::basis_state(3, 0).to_density();
    let m = mermin_maximum(&hhh, 16, 5).unwrap().value;
    assert!(m <= 2.0 + 1e-6, "mermin {m}");
}

#[test]
fn mermin_is_invariant_under_local_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let rho = states::werner_ghz3(0.9).unwrap();
    let base = mermin_maximum(&rho, 16, 13).unwrap().value;
    for _ in 0..2 {
        let u = LocalUnitary::random(3, &mut rng);
        let rotated = u.conjugate(&rho).unwrap();
        let m = mermin_maximum(&rotated, 16, 13).unwrap().value;
        assert!((m - base).abs() < 1e-6, "{m} vs {base}");
    }
}

#[test]
fn concurrence_examples() {
    let phi = states::phi_plus().to_density();
    assert!((concurrence2(&phi).unwrap() - 1.0).abs() < 1e-9);

    let half = states::half_mixed2();
    assert!(concurrence2(&half).unwrap() < 1e-9);

    let ghz = states::ghz3().to_density();
    for traced in 0..3 {
        let keep: Vec<usize> = (0..3).filter(|&q| q != traced).collect();
        let reduced = ghz.partial_trace(&keep).unwrap();
        assert!(concurrence2(&reduced).unwrap() < 1e-9, "traced {traced}");
    }

    assert!(concurrence2(&DensityMatrix::maximally_mixed(3)).is_err());
}

#[test]
fn concurrence_matches_the_pure_state_formula() {
    // For pure 2-qubit states (a, b, c, d), C = 2|ad − bc|.
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for _ in 0..10 {
        let psi = random_pure(2, &mut rng);
        let amp = psi.amplitudes();
        let oracle = 2.0 * (amp[0] * amp[3] - amp[1] * amp[2]).norm();
        let c = concurrence2(&psi.to_density()).unwrap();
        assert!((c - oracle).abs() < 1e-9, "{c} vs oracle {oracle}");
    }
}

#[test]
fn concurrence_of_two_qubit_werner_states() {
    // p·|φ⁺⟩⟨φ⁺| + (1−p)·I/4 has concurrence max(0, (3p−1)/2).
    for p in [0.2, 1.0 / 3.0, 0.6, 0.9] {
        let rho = DensityMatrix::mixture(&[
            (p, &states::phi_plus().to_density()),
            (1.0 - p, &DensityMatrix::maximally_mixed(2)),
        ])
        .unwrap();
        let expected = (0.0f64).max((3.0 * p - 1.0) / 2.0);
        let c = concurrence2(&rho).unwrap();
        assert!((c - expected).abs() < 1e-9, "p={p}: {c} vs {expected}");
    }
}

#[test]
fn concurrence_is_invariant_under_local_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    let rho = DensityMatrix::mixture(&[
        (0.7, &states::phi_plus().to_density()),
        (0.3, &DensityMatrix::maximally_mixed(2)),
    ])
    .unwrap();
    let base = concurrence2(&rho).unwrap();
    for _ in 0..5 {
        let u = LocalUnitary::random(2, &mut rng);
        let c = concurrence2(&u.conjugate(&rho).unwrap()).unwrap();
        assert!((c - base).abs() < 1e-9, "{c} vs {base}");
    }
}

#[test]
fn concurrence_rejects_indefinite_input() {
    use nalgebra::DMatrix;
    let mut m = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
    m[(0, 0)] = Complex64::new(0.6, 0.0);
    m[(1, 1)] = Complex64::new(0.5, 0.0);
    m[(2, 2)] = Complex64::new(-0.1, 0.0);
    m[(3, 3)] = Complex64::new(0.0, 0.0);
    let rho = DensityMatrix::new_indefinite(m).unwrap();
    assert!(matches!(
        concurrence2(&rho),
        Err(crate::Error::NonPhysical(_))
    ));
}

#[test]
fn full_report_on_ideal_and_mixed_states() {
    let ghz = states::ghz3().to_density();
    let opts = AnalysisOptions {
        restarts: 4,
        seed: 0,
    };
    let report = full_report(&ghz, &opts).unwrap();
    assert!((report.fidelity - 1.0).abs() < 1e-10);
    assert!((report.witness.value + 0.25).abs() < 1e-6);
    assert!((report.mermin.value - 4.0).abs() < 1e-4);
    for c in report.concurrences {
        assert!(c < 1e-9);
    }

    let mixed = DensityMatrix::maximally_mixed(3);
    let report = full_report(&mixed, &opts).unwrap();
    assert!((report.fidelity - 0.125).abs() < 1e-12);
    assert!((report.witness.value - 0.625).abs() < 1e-6);
    assert!(report.mermin.value.abs() < 1e-6);
    for c in report.concurrences {
        assert!(c < 1e-9);
    }
}

#[test]
fn report_text_roundtrips_bit_exactly() {
    let rho = states::werner_ghz3(0.82).unwrap();
    let opts = AnalysisOptions {
        restarts: 4,
        seed: 1,
    };
    let mut report = full_report(&rho, &opts).unwrap();

    // Attach a Monte-Carlo block so the optional section round-trips too.
    let set = simulate_counts(&rho, 2e3, 3).unwrap();
    let quantities = [McQuantity::new("fidelity_ghz", ghz_fidelity)];
    let mc_cfg = MleConfig {
        restarts: 1,
        ..MleConfig::default()
    };
    report.uncertainties = Some(monte_carlo_with(&set, 8, 5, &quantities, &mc_cfg).unwrap());

    let text = report.to_text();
    let parsed = AnalysisReport::from_text(&text).unwrap();
    assert_eq!(parsed.to_text(), text);

    assert!(AnalysisReport::from_text("fidelity nope\n").is_err());
    assert!(AnalysisReport::from_text("unknown_key 3\n").is_err());
}

#[test]
fn dimension_errors_are_reported() {
    let two_qubit = DensityMatrix::maximally_mixed(2);
    assert!(witness_minimum(&two_qubit, 2, 0).is_err());
    assert!(mermin_maximum(&two_qubit, 2, 0).is_err());
    let x = BlochMeasurement::x();
    assert!(mermin_correlation(&two_qubit, &x, &x, &x).is_err());
    assert!(witness_minimum(&states::ghz3().to_density(), 0, 0).is_err());
}
