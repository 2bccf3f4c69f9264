use super::model::{sample_poisson, substream};
use crate::error::{Error, Result};
use crate::optim::{nelder_mead_min, NelderMeadConfig};
use crate::qlin::{states, DensityMatrix};

/// Parameters of the two-photon interference-dip scan.
#[derive(Debug, Clone)]
pub struct DipConfig {
    /// Peak coherent-overlap fraction at zero delay; equals the dip visibility.
    pub epsilon0: f64,
    /// Gaussian envelope scale of the overlap in mirror displacement (µm).
    pub width_um: f64,
    /// Mirror positions to scan (µm).
    pub positions_um: Vec<f64>,
    /// Expected four-fold counts per point far from the dip.
    pub events_per_point: f64,
}

impl DipConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon0 {} outside [0, 1]",
                self.epsilon0
            )));
        }
        if !(self.width_um > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "width {} must be positive",
                self.width_um
            )));
        }
        if !(self.events_per_point > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "events per point {} must be positive",
                self.events_per_point
            )));
        }
        Ok(())
    }
}

/// The two-photon state after the beam splitter at overlap ε: the coherent
/// |φ⁺⟩ fraction plus the half-mixed remainder ½(|HH⟩⟨HH|+|VV⟩⟨VV|).
pub fn dip_state(epsilon: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "epsilon {epsilon} outside [0, 1]"
        )));
    }
    DensityMatrix::mixture(&[
        (epsilon, &states::phi_plus().to_density()),
        (1.0 - epsilon, &states::half_mixed2()),
    ])
}

/// Overlap fraction at mirror position x: ε(x) = ε₀·exp(−x²/(2·width²)).
pub fn overlap_at(cfg: &DipConfig, position_um: f64) -> f64 {
    cfg.epsilon0 * (-position_um * position_um / (2.0 * cfg.width_um * cfg.width_um)).exp()
}

/// Expected four-fold rate at one mirror position with the analyzers set to
/// |A⟩⊗|D⟩. The coherent part is dark there, so the rate is
/// `events_per_point · 4 · ⟨AD|ρ(ε)|AD⟩ = events_per_point · (1 − ε(x))`,
/// the factor 4 pinning the far-from-dip baseline to `events_per_point`.
pub fn expected_rate(cfg: &DipConfig, position_um: f64) -> Result<f64> {
    let rho = dip_state(overlap_at(cfg, position_um))?;
    let ad = states::ket_a().tensor(&states::ket_d());
    Ok(cfg.events_per_point * 4.0 * rho.fidelity_pure(&ad)?)
}

/// Simulates the dip scan: one Poisson draw per mirror position around the
/// expected rate, on a substream derived from (seed, point index).
pub fn dip_curve(cfg: &DipConfig, seed: u64) -> Result<Vec<(f64, f64)>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.positions_um.len());
    for (k, &x) in cfg.positions_um.iter().enumerate() {
        let mean = expected_rate(cfg, x)?;
        let mut rng = substream(seed, k as u64);
        out.push((x, sample_poisson(&mut rng, mean)));
    }
    Ok(out)
}

/// Least-squares fit of a Gaussian dip to (position, count) data.
#[derive(Debug, Clone)]
pub struct DipFit {
    /// Fitted visibility (max − min)/max of the model curve.
    pub visibility: f64,
    pub baseline: f64,
    pub width_um: f64,
    pub center_um: f64,
    pub residual_sse: f64,
}

/// Fits `count ≈ B·(1 − v·exp(−(x−x₀)²/(2w²)))` and reports v as the
/// visibility. Needs at least 5 points to constrain the 4 parameters.
pub fn fit_dip(points: &[(f64, f64)]) -> Result<DipFit> {
    if points.len() < 5 {
        return Err(Error::InvalidArgument(format!(
            "{} points given, at least 5 required for a dip fit",
            points.len()
        )));
    }
    let (min_x, max_x) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    let span = (max_x - min_x).max(1e-9);
    let deepest = points
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let baseline0 = points
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(1.0);

    // Optimize in normalized coordinates so one simplex step suits every
    // parameter: p = [B/B0, v, w/span, (x0 - deepest_x)/span].
    let model = |p: &[f64], x: f64| {
        let b = p[0] * baseline0;
        let v = p[1];
        let w = p[2] * span;
        let c = deepest.0 + p[3] * span;
        let w2 = (w * w).max(1e-12);
        b * (1.0 - v * (-(x - c) * (x - c) / (2.0 * w2)).exp())
    };
    let sse = |p: &[f64]| {
        points
            .iter()
            .map(|&(x, y)| {
                let r = y - model(p, x);
                r * r
            })
            .sum::<f64>()
    };

    let v0 = (1.0 - deepest.1 / baseline0).clamp(0.0, 1.0);
    let start = [1.0, v0, 0.125, 0.0];
    let best = nelder_mead_min(&sse, &start, &NelderMeadConfig {
        initial_step: 0.1,
        ..NelderMeadConfig::default()
    });

    Ok(DipFit {
        visibility: best.x[1],
        baseline: best.x[0] * baseline0,
        width_um: (best.x[2] * span).abs(),
        center_um: deepest.0 + best.x[3] * span,
        residual_sse: best.value,
    })
}
