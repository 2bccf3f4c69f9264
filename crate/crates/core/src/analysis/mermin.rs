use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::optim::{nelder_mead_min, NelderMeadConfig};
use crate::qlin::{c64, DensityMatrix, HermitianOperator};
use crate::tomo::substream;

/// A polarization analyzer direction on the Bloch sphere; the measured
/// observable is n̂·σ with eigenvalues ±1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMeasurement {
    pub theta: f64,
    pub phi: f64,
}

impl BlochMeasurement {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// σ_x direction.
    pub fn x() -> Self {
        Self::new(FRAC_PI_2, 0.0)
    }

    /// σ_y direction.
    pub fn y() -> Self {
        Self::new(FRAC_PI_2, FRAC_PI_2)
    }

    /// σ_z direction.
    pub fn z() -> Self {
        Self::new(0.0, 0.0)
    }

    /// The single-qubit observable n̂·σ.
    pub fn operator(&self) -> HermitianOperator {
        HermitianOperator::new(self.matrix2()).expect("n̂·σ is Hermitian")
    }

    fn matrix2(&self) -> DMatrix<Complex64> {
        let (st, ct) = self.theta.sin_cos();
        let off = Complex64::from_polar(st, -self.phi);
        DMatrix::from_row_slice(2, 2, &[c64(ct, 0.0), off, off.conj(), c64(-ct, 0.0)])
    }
}

/// Three-photon correlation E = Tr[ρ·(â·σ)⊗(b̂·σ)⊗(ĉ·σ)] ∈ [−1, 1].
pub fn mermin_correlation(
    rho: &DensityMatrix,
    a: &BlochMeasurement,
    b: &BlochMeasurement,
    c: &BlochMeasurement,
) -> Result<f64> {
    if rho.qubit_count() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "correlation needs a 3-qubit state, got {} qubits",
            rho.qubit_count()
        )));
    }
    let obs = a.matrix2().kronecker(&b.matrix2()).kronecker(&c.matrix2());
    let mut acc = c64(0.0, 0.0);
    let entries = rho.entries();
    for i in 0..8 {
        for k in 0..8 {
            acc += obs[(i, k)] * entries[(k, i)];
        }
    }
    Ok(acc.re)
}

/// The six analyzer settings (A, A′, B, B′, C, C′) of a Mermin evaluation.
pub type MerminSettings = [BlochMeasurement; 6];

/// Outcome of the Mermin maximization. Values above 2 are impossible under
/// local realism; the GHZ state reaches 4.
#[derive(Debug, Clone)]
pub struct MerminResult {
    pub value: f64,
    pub settings: MerminSettings,
}

fn settings_from_flat(x: &[f64]) -> MerminSettings {
    [
        BlochMeasurement::new(x[0], x[1]),
        BlochMeasurement::new(x[2], x[3]),
        BlochMeasurement::new(x[4], x[5]),
        BlochMeasurement::new(x[6], x[7]),
        BlochMeasurement::new(x[8], x[9]),
        BlochMeasurement::new(x[10], x[11]),
    ]
}

fn settings_to_flat(s: &MerminSettings) -> Vec<f64> {
    s.iter().flat_map(|m| [m.theta, m.phi]).collect()
}

/// M = |E(ABC′) + E(AB′C) + E(A′BC) − E(A′B′C′)|.
pub fn mermin_value(rho: &DensityMatrix, settings: &MerminSettings) -> Result<f64> {
    let [a, ap, b, bp, c, cp] = settings;
    Ok((mermin_correlation(rho, a, b, cp)?
        + mermin_correlation(rho, a, bp, c)?
        + mermin_correlation(rho, ap, b, c)?
        - mermin_correlation(rho, ap, bp, cp)?)
    .abs())
}

/// Maximizes the Mermin parameter over the six analyzer directions by
/// multistart simplex search. The first two starts are the canonical
/// circular/linear settings (Y on the unprimed and X on the primed analyzers
/// and the swap), which are optimal for the ideal state; the rest are random.
pub fn mermin_maximum(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<MerminResult> {
    if rho.qubit_count() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "Mermin maximization needs a 3-qubit state, got {} qubits",
            rho.qubit_count()
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }

    let canonical_yx: MerminSettings = [
        BlochMeasurement::y(),
        BlochMeasurement::x(),
        BlochMeasurement::y(),
        BlochMeasurement::x(),
        BlochMeasurement::y(),
        BlochMeasurement::x(),
    ];
    let canonical_xy: MerminSettings = [
        BlochMeasurement::x(),
        BlochMeasurement::y(),
        BlochMeasurement::x(),
        BlochMeasurement::y(),
        BlochMeasurement::x(),
        BlochMeasurement::y(),
    ];

    let outcomes = exec::map_indexed(restarts, |k| {
        let start = match k {
            0 => settings_to_flat(&canonical_yx),
            1 => settings_to_flat(&canonical_xy),
            _ => {
                let mut rng = substream(seed, k as u64);
                use rand::Rng;
                (0..12)
                    .map(|i| {
                        if i % 2 == 0 {
                            rng.random_range(0.0..std::f64::consts::PI)
                        } else {
                            rng.random_range(0.0..std::f64::consts::TAU)
                        }
                    })
                    .collect()
            }
        };
        nelder_mead_min(
            |x| -mermin_value(rho, &settings_from_flat(x)).expect("valid settings"),
            &start,
            &NelderMeadConfig::default(),
        )
    });

    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.value.partial_cmp(&b.value).unwrap())
        .map(|(k, _)| k)
        .expect("at least one restart");

    Ok(MerminResult {
        value: -outcomes[best].value,
        settings: settings_from_flat(&outcomes[best].x),
    })
}
