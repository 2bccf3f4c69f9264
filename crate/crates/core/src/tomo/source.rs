use crate::error::Result;
use crate::qlin::{states, PureState};

/// Output of the beam-splitter GHZ source: the three-photon state on
/// (A, B, 1) and the post-selection bookkeeping.
#[derive(Debug, Clone)]
pub struct GhzPreparation {
    pub state: PureState,
    /// Probability that both photons leave the beam splitter in different
    /// output ports (the parity check succeeds).
    pub pbs_success: f64,
    /// Probability that the trigger photon passes the |D⟩ projection.
    pub trigger_success: f64,
}

/// Walks the full source model: two |φ⁺⟩ pairs, the polarizing-beam-splitter
/// parity check on the inner modes, and the |D⟩ trigger projection on mode 4.
///
/// The pair state lives on modes (1, 2, 3, 4) as qubits 0..3. The parity
/// check keeps only components where modes 2 and 3 share a polarization
/// (both transmitted or both reflected, so the photons exit different
/// ports), relabels those modes to the detector ports (A, B), and the final
/// projection leaves the three-photon GHZ state on (A, B, 1).
pub fn ghz_from_pairs() -> Result<GhzPreparation> {
    let pairs = states::phi_plus().tensor(&states::phi_plus());

    // Parity check: zero every component where modes 2 and 3 disagree.
    let n = pairs.qubit_count();
    let mut kept = Vec::with_capacity(pairs.dim());
    for idx in 0..pairs.dim() {
        let bit2 = (idx >> (n - 2)) & 1;
        let bit3 = (idx >> (n - 3)) & 1;
        if bit2 == bit3 {
            kept.push(pairs.amplitude(idx));
        } else {
            kept.push(num_complex::Complex64::new(0.0, 0.0));
        }
    }
    let pbs_success: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
    let post_pbs = PureState::normalized(kept)?;

    // Reorder modes (1, 2, 3, 4) to ports (A, B, 1, 4) = inputs (2, 3, 1, 4).
    let relabeled = post_pbs.permute_qubits(&[1, 2, 0, 3])?;

    let (state, trigger_success) = relabeled.project_qubit(3, &states::ket_d())?;
    Ok(GhzPreparation {
        state,
        pbs_success,
        trigger_success,
    })
}
