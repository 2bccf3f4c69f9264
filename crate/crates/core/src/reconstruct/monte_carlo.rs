use super::mle::{mle_reconstruct_with, MleConfig};
use crate::error::{Error, Result};
use crate::exec;
use crate::qlin::DensityMatrix;
use crate::tomo::{sample_poisson, substream, TomographySet};

/// A named scalar the Monte-Carlo loop evaluates on each reconstructed state.
pub struct McQuantity {
    name: String,
    eval: Box<dyn Fn(&DensityMatrix) -> Result<f64> + Sync + Send>,
}

impl McQuantity {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&DensityMatrix) -> Result<f64> + Sync + Send + 'static,
    {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Mean and sample standard deviation of one quantity over the trials.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantitySummary {
    pub name: String,
    pub mean: f64,
    pub std_dev: f64,
}

/// Monte-Carlo uncertainty summary.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trial_count: usize,
    pub quantities: Vec<QuantitySummary>,
}

/// Propagates Poissonian count uncertainty: each trial redraws every
/// corrected count as Poisson(observed), reruns the likelihood fit, and
/// evaluates the quantities; the summary reports their spread. Trials run on
/// independent (seed, trial) substreams and merge in trial order, so the
/// result is deterministic however they are scheduled.
pub fn monte_carlo(
    set: &TomographySet,
    trials: usize,
    seed: u64,
    quantities: &[McQuantity],
) -> Result<MonteCarloSummary> {
    monte_carlo_with(set, trials, seed, quantities, &MleConfig::default())
}

pub fn monte_carlo_with(
    set: &TomographySet,
    trials: usize,
    seed: u64,
    quantities: &[McQuantity],
    mle: &MleConfig,
) -> Result<MonteCarloSummary> {
    if trials < 2 {
        return Err(Error::InvalidArgument(format!(
            "{trials} trials requested, at least 2 required"
        )));
    }
    let observed: Vec<f64> = set.records().iter().map(|r| r.corrected_count()).collect();

    let per_trial: Vec<Result<Vec<f64>>> = exec::map_indexed(trials, |trial| {
        let mut rng = substream(seed, trial as u64);
        let mut resampled = set.clone();
        for (record, &mean) in resampled.records_mut().iter_mut().zip(&observed) {
            record.raw_count = sample_poisson(&mut rng, mean);
            record.accidental_estimate = 0.0;
            record.norm_factor = 1.0;
        }
        let fit = mle_reconstruct_with(&resampled, None, mle).map_err(|e| Error::TrialFailed {
            trial,
            source: Box::new(e),
        })?;
        quantities
            .iter()
            .map(|q| {
                (q.eval)(&fit.rho).map_err(|e| Error::TrialFailed {
                    trial,
                    source: Box::new(e),
                })
            })
            .collect()
    });

    let mut values: Vec<Vec<f64>> = Vec::with_capacity(trials);
    for result in per_trial {
        values.push(result?);
    }

    let summaries = quantities
        .iter()
        .enumerate()
        .map(|(qi, q)| {
            let samples: Vec<f64> = values.iter().map(|v| v[qi]).collect();
            let mean = samples.iter().sum::<f64>() / trials as f64;
            let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>()
                / (trials - 1) as f64;
            QuantitySummary {
                name: q.name.clone(),
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect();

    Ok(MonteCarloSummary {
        trial_count: trials,
        quantities: summaries,
    })
}
