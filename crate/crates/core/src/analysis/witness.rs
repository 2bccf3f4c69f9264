use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::{nelder_mead_min, NelderMeadConfig};
use crate::qlin::{states, DensityMatrix, LocalUnitary};
use crate::tomo::substream;

/// Outcome of the witness minimization ⟨𝒲⟩ = ¾ − max_U ⟨GHZ|U†ρU|GHZ⟩.
/// A negative value certifies GHZ-class entanglement.
#[derive(Debug, Clone)]
pub struct WitnessResult {
    pub value: f64,
    pub optimal_unitary: LocalUnitary,
    pub restarts_used: usize,
}

/// ⟨GHZ|U†ρU|GHZ⟩ for the local unitary with the given flat angles. U|GHZ⟩
/// is assembled directly from the per-qubit columns, avoiding the 8×8 matrix.
pub(crate) fn ghz_overlap(rho: &DensityMatrix, angles: &[f64]) -> f64 {
    let u = LocalUnitary::from_flat(angles).expect("angle count is a multiple of 3");
    let n = u.qubit_count();
    let d = 1usize << n;
    let mut all_zero = vec![Complex64::new(1.0, 0.0)];
    let mut all_one = vec![Complex64::new(1.0, 0.0)];
    for q in 0..n {
        let m = u.single(q);
        let mut next_zero = Vec::with_capacity(all_zero.len() * 2);
        let mut next_one = Vec::with_capacity(all_one.len() * 2);
        for (z, o) in all_zero.iter().zip(&all_one) {
            next_zero.push(z * m[(0, 0)]);
            next_zero.push(z * m[(1, 0)]);
            next_one.push(o * m[(0, 1)]);
            next_one.push(o * m[(1, 1)]);
        }
        all_zero = next_zero;
        all_one = next_one;
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let v = DVector::from_iterator(
        d,
        all_zero
            .iter()
            .zip(&all_one)
            .map(|(z, o)| (z + o) * inv_sqrt2),
    );
    v.dotc(&(rho.entries() * &v)).re
}

/// Minimizes the GHZ witness over local unitaries by multistart simplex
/// search: the identity seed first (it is optimal for the ideal state), then
/// `restarts - 1` random angle draws. Restarts are independent and merge by
/// best value with the lowest index winning ties.
pub fn witness_minimum(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<WitnessResult> {
    if rho.qubit_count() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "witness needs a 3-qubit state, got {} qubits",
            rho.qubit_count()
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }

    let outcomes = exec::map_indexed(restarts, |k| {
        let start = if k == 0 {
            LocalUnitary::identity(3)
        } else {
            let mut rng = substream(seed, k as u64);
            LocalUnitary::random(3, &mut rng)
        };
        nelder_mead_min(
            |angles| -ghz_overlap(rho, angles),
            &start.to_flat(),
            &NelderMeadConfig::default(),
        )
    });

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.value.partial_cmp(&b.value).unwrap())
        .map(|(k, _)| k)
        .expect("at least one restart");
    let overlap = -outcomes[best].value;

    Ok(WitnessResult {
        value: 0.75 - overlap,
        optimal_unitary: LocalUnitary::from_flat(&outcomes[best].x)?,
        restarts_used: restarts,
    })
}

/// Recomputes the witness value from a reported unitary; the optimizer's
/// result must satisfy this to within 1e-9.
pub fn witness_value_at(rho: &DensityMatrix, unitary: &LocalUnitary) -> Result<f64> {
    if rho.qubit_count() != 3 || unitary.qubit_count() != 3 {
        return Err(Error::DimensionMismatch(
            "witness recomputation needs 3-qubit inputs".into(),
        ));
    }
    let rotated = unitary.apply_pure(&states::ghz3())?;
    Ok(0.75 - rho.fidelity_pure(&rotated)?)
}
