use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::setting::{setting_states, AnalyzerSetting, SETTING_COUNT};
use super::record::{TomographyRecord, TomographySet};
use crate::error::{Error, Result};
use crate::exec;
use crate::qlin::{DensityMatrix, HermitianOperator};

/// Acquisition time per setting, matching the experiment's 900 s runs.
pub const DEFAULT_DURATION_S: f64 = 900.0;

/// Default (flat) trigger-singles count per acquisition.
pub const DEFAULT_TRIGGER_SINGLES: u64 = 1_000_000;

/// The rank-1 projector |ψ_ν⟩⟨ψ_ν| for one analyzer setting.
pub fn projector(setting: AnalyzerSetting) -> HermitianOperator {
    HermitianOperator::projector(&setting_states()[setting.index()])
}

/// Born probability ⟨ψ_ν|ρ|ψ_ν⟩.
pub fn born_probability(rho: &DensityMatrix, setting: AnalyzerSetting) -> Result<f64> {
    rho.fidelity_pure(&setting_states()[setting.index()])
}

/// Expected coincidence count 𝒩·⟨ψ_ν|ρ|ψ_ν⟩.
pub fn expected_count(rho: &DensityMatrix, setting: AnalyzerSetting, flux: f64) -> Result<f64> {
    if !(flux > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "flux {flux} must be positive"
        )));
    }
    Ok(flux * born_probability(rho, setting)?)
}

/// Expected counts for all 64 settings in canonical order.
pub fn expected_counts(rho: &DensityMatrix, flux: f64) -> Result<Vec<f64>> {
    AnalyzerSetting::all()
        .map(|s| expected_count(rho, s, flux))
        .collect()
}

/// Accidental-coincidence background: a constant rate per setting, supplied
/// by configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundModel {
    rates: Vec<f64>,
}

impl BackgroundModel {
    /// The same accidental rate (events/s) at every setting.
    pub fn flat(rate: f64) -> Result<Self> {
        Self::per_setting(vec![rate; SETTING_COUNT])
    }

    /// One accidental rate (events/s) per setting, in canonical ν order.
    pub fn per_setting(rates: Vec<f64>) -> Result<Self> {
        if rates.len() != SETTING_COUNT {
            return Err(Error::InvalidArgument(format!(
                "{} rates given, {SETTING_COUNT} required",
                rates.len()
            )));
        }
        if let Some(bad) = rates.iter().find(|r| !(**r >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "accidental rate {bad} must be non-negative"
            )));
        }
        Ok(Self { rates })
    }

    /// Flat rate estimated from the two measured pair rates: an accidental
    /// four-fold fires when one real pair coincides with an uncorrelated pair
    /// inside the coincidence window, so the rate is roughly
    /// `forward · backward · window`.
    pub fn from_twofold_rates(forward_rate: f64, backward_rate: f64, window_s: f64) -> Result<Self> {
        if !(forward_rate >= 0.0 && backward_rate >= 0.0 && window_s >= 0.0) {
            return Err(Error::InvalidArgument(
                "two-fold rates and window must be non-negative".into(),
            ));
        }
        Self::flat(forward_rate * backward_rate * window_s)
    }

    pub fn rate(&self, setting: AnalyzerSetting) -> f64 {
        self.rates[setting.index()]
    }
}

/// Simulation parameters beyond the state itself.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub flux: f64,
    pub seed: u64,
    pub duration_s: f64,
    pub trigger_singles: u64,
    /// When present, accidental counts are added to each draw and the
    /// matching estimate is recorded for later subtraction.
    pub background: Option<BackgroundModel>,
}

impl SimulationConfig {
    pub fn new(flux: f64, seed: u64) -> Self {
        Self {
            flux,
            seed,
            duration_s: DEFAULT_DURATION_S,
            trigger_singles: DEFAULT_TRIGGER_SINGLES,
            background: None,
        }
    }
}

/// An independent RNG substream per (seed, index) pair, so per-setting and
/// per-trial draws are stable no matter how the loop is scheduled.
pub(crate) fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

pub(crate) fn sample_poisson(rng: &mut ChaCha8Rng, mean: f64) -> f64 {
    if mean < 1e-12 {
        return 0.0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng)
}

/// Simulates one full tomography acquisition: each setting's count is an
/// independent Poisson draw around 𝒩·⟨ψ_ν|ρ|ψ_ν⟩ (plus background when
/// configured), on a substream derived from (seed, ν).
pub fn simulate(rho: &DensityMatrix, cfg: &SimulationConfig) -> Result<TomographySet> {
    if !(cfg.flux > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "flux {} must be positive",
            cfg.flux
        )));
    }
    let expected = expected_counts(rho, cfg.flux)?;
    let records = exec::map_indexed(SETTING_COUNT, |nu| {
        let setting = AnalyzerSetting::from_index(nu).expect("valid index");
        let accidental = cfg
            .background
            .as_ref()
            .map(|m| m.rate(setting) * cfg.duration_s)
            .unwrap_or(0.0);
        let mut rng = substream(cfg.seed, nu as u64);
        let raw = sample_poisson(&mut rng, expected[nu] + accidental);
        TomographyRecord::new(setting, raw, cfg.duration_s, cfg.trigger_singles, accidental)
            .expect("simulated record is valid")
    });
    Ok(TomographySet::new(records)?.with_flux_hint(cfg.flux))
}

/// [`simulate`] with default duration and trigger singles and no background.
pub fn simulate_counts(rho: &DensityMatrix, flux: f64, seed: u64) -> Result<TomographySet> {
    simulate(rho, &SimulationConfig::new(flux, seed))
}

/// The noiseless diagnostic set: raw counts are the exact expected values,
/// no sampling.
pub fn noiseless_set(rho: &DensityMatrix, flux: f64) -> Result<TomographySet> {
    let expected = expected_counts(rho, flux)?;
    let records: Result<Vec<_>> = AnalyzerSetting::all()
        .map(|s| {
            TomographyRecord::new(
                s,
                expected[s.index()],
                DEFAULT_DURATION_S,
                DEFAULT_TRIGGER_SINGLES,
                0.0,
            )
        })
        .collect();
    Ok(TomographySet::new(records?)?.with_flux_hint(flux))
}

/// Attaches accidental estimates (`duration · rate`) to every record.
/// Downstream corrected counts subtract the estimate and clamp at zero.
pub fn apply_background(set: &TomographySet, model: &BackgroundModel) -> Result<TomographySet> {
    let mut out = set.clone();
    for record in out.records_mut() {
        record.accidental_estimate = record.duration_s * model.rate(record.setting);
    }
    Ok(out)
}

/// Rescales every record to the set-mean trigger flux: the scale factor is
/// `(mean singles / singles_ν)²`, squared because a four-fold rate tracks the
/// product of two pair rates. Fails if any record has zero trigger singles.
pub fn normalize_by_trigger(set: &TomographySet) -> Result<TomographySet> {
    if let Some(bad) = set.records().iter().find(|r| r.trigger_singles == 0) {
        return Err(Error::InvalidArgument(format!(
            "record {} has zero trigger singles",
            bad.setting
        )));
    }
    let mean = set
        .records()
        .iter()
        .map(|r| r.trigger_singles as f64)
        .sum::<f64>()
        / SETTING_COUNT as f64;
    let mut out = set.clone();
    for record in out.records_mut() {
        let ratio = mean / record.trigger_singles as f64;
        record.norm_factor = ratio * ratio;
    }
    Ok(out)
}
