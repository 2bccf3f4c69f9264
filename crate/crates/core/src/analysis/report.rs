use super::concurrence::concurrence2;
use super::mermin::{mermin_maximum, BlochMeasurement, MerminResult};
use super::witness::{witness_minimum, WitnessResult};
use crate::error::{Error, Result};
use crate::qlin::{states, DensityMatrix, LocalUnitary};
use crate::reconstruct::{MonteCarloSummary, QuantitySummary};

/// GHZ fidelity ⟨GHZ|ρ|GHZ⟩ of a three-photon state.
pub fn ghz_fidelity(rho: &DensityMatrix) -> Result<f64> {
    if rho.qubit_count() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "GHZ fidelity needs a 3-qubit state, got {} qubits",
            rho.qubit_count()
        )));
    }
    rho.fidelity_pure(&states::ghz3())
}

/// Knobs for the optimizer-backed quantities.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
        }
    }
}

/// Everything the pipeline derives from one density matrix.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub fidelity: f64,
    pub witness: WitnessResult,
    pub mermin: MerminResult,
    /// Concurrence of the pair left after tracing out photon A, B, or 1.
    pub concurrences: [f64; 3],
    pub uncertainties: Option<MonteCarloSummary>,
}

/// Runs the full analysis: fidelity, witness minimum, Mermin maximum, and
/// the three two-photon concurrences. Deterministic for a fixed seed.
pub fn full_report(rho: &DensityMatrix, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let fidelity = ghz_fidelity(rho)?;
    let witness = witness_minimum(rho, opts.restarts, opts.seed)?;
    let mermin = mermin_maximum(rho, opts.restarts, opts.seed.wrapping_add(1))?;
    let mut concurrences = [0.0; 3];
    for traced in 0..3 {
        let keep: Vec<usize> = (0..3).filter(|&q| q != traced).collect();
        concurrences[traced] = concurrence2(&rho.partial_trace(&keep)?)?;
    }
    Ok(AnalysisReport {
        fidelity,
        witness,
        mermin,
        concurrences,
        uncertainties: None,
    })
}

fn fmt6(x: f64) -> String {
    format!("{x:.5e}")
}

impl AnalysisReport {
    /// Structured text rendering, scalars at 6 significant digits. Parsing
    /// the text back and re-rendering reproduces it byte for byte.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("fidelity {}\n", fmt6(self.fidelity)));
        out.push_str(&format!("witness_min {}\n", fmt6(self.witness.value)));
        out.push_str(&format!(
            "witness_restarts {}\n",
            self.witness.restarts_used
        ));
        let angles: Vec<String> = self
            .witness
            .optimal_unitary
            .to_flat()
            .iter()
            .map(|a| fmt6(*a))
            .collect();
        out.push_str(&format!("witness_angles {}\n", angles.join(" ")));
        out.push_str(&format!("mermin_max {}\n", fmt6(self.mermin.value)));
        let settings: Vec<String> = self
            .mermin
            .settings
            .iter()
            .flat_map(|m| [fmt6(m.theta), fmt6(m.phi)])
            .collect();
        out.push_str(&format!("mermin_settings {}\n", settings.join(" ")));
        out.push_str(&format!(
            "concurrence_trace_a {}\n",
            fmt6(self.concurrences[0])
        ));
        out.push_str(&format!(
            "concurrence_trace_b {}\n",
            fmt6(self.concurrences[1])
        ));
        out.push_str(&format!(
            "concurrence_trace_1 {}\n",
            fmt6(self.concurrences[2])
        ));
        if let Some(mc) = &self.uncertainties {
            out.push_str(&format!("mc_trials {}\n", mc.trial_count));
            for q in &mc.quantities {
                out.push_str(&format!(
                    "mc {} {} {}\n",
                    q.name,
                    fmt6(q.mean),
                    fmt6(q.std_dev)
                ));
            }
        }
        out
    }

    /// Parses a report rendered by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut fidelity = None;
        let mut witness_min = None;
        let mut witness_restarts = None;
        let mut witness_angles: Option<Vec<f64>> = None;
        let mut mermin_max = None;
        let mut mermin_settings: Option<Vec<f64>> = None;
        let mut concurrences = [None; 3];
        let mut mc_trials: Option<usize> = None;
        let mut mc_quantities: Vec<QuantitySummary> = Vec::new();

        for (lineno, line) in text.lines().enumerate() {
            let line_number = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: line_number,
                message,
            };
            let (key, value) = trimmed
                .split_once(char::is_whitespace)
                .unwrap_or((trimmed, ""));
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_number,
                    message: format!("invalid number {v:?}"),
                })
            };
            let parse_list = |v: &str, n: usize| -> Result<Vec<f64>> {
                let vals: Vec<f64> = v
                    .split_whitespace()
                    .map(parse_f64)
                    .collect::<Result<_>>()?;
                if vals.len() != n {
                    return Err(Error::Parse {
                        line: line_number,
                        message: format!("expected {n} values, found {}", vals.len()),
                    });
                }
                Ok(vals)
            };
            match key {
                "fidelity" => fidelity = Some(parse_f64(value)?),
                "witness_min" => witness_min = Some(parse_f64(value)?),
                "witness_restarts" => {
                    witness_restarts = Some(value.parse::<usize>().map_err(|_| {
                        bad(format!("invalid restart count {value:?}"))
                    })?)
                }
                "witness_angles" => witness_angles = Some(parse_list(value, 9)?),
                "mermin_max" => mermin_max = Some(parse_f64(value)?),
                "mermin_settings" => mermin_settings = Some(parse_list(value, 12)?),
                "concurrence_trace_a" => concurrences[0] = Some(parse_f64(value)?),
                "concurrence_trace_b" => concurrences[1] = Some(parse_f64(value)?),
                "concurrence_trace_1" => concurrences[2] = Some(parse_f64(value)?),
                "mc_trials" => {
                    mc_trials = Some(value.parse::<usize>().map_err(|_| {
                        bad(format!("invalid trial count {value:?}"))
                    })?)
                }
                "mc" => {
                    let fields: Vec<&str> = value.split_whitespace().collect();
                    if fields.len() != 3 {
                        return Err(bad("expected: mc <name> <mean> <std>".into()));
                    }
                    mc_quantities.push(QuantitySummary {
                        name: fields[0].to_string(),
                        mean: parse_f64(fields[1])?,
                        std_dev: parse_f64(fields[2])?,
                    });
                }
                other => return Err(bad(format!("unknown field {other:?}"))),
            }
        }

        let missing = |name: &str| Error::Parse {
            line: 0,
            message: format!("missing {name}"),
        };
        let angles = witness_angles.ok_or_else(|| missing("witness_angles"))?;
        let settings = mermin_settings.ok_or_else(|| missing("mermin_settings"))?;
        let uncertainties = match mc_trials {
            Some(trial_count) => Some(MonteCarloSummary {
                trial_count,
                quantities: mc_quantities,
            }),
            None if mc_quantities.is_empty() => None,
            None => {
                return Err(missing("mc_trials"));
            }
        };
        Ok(Self {
            fidelity: fidelity.ok_or_else(|| missing("fidelity"))?,
            witness: WitnessResult {
                value: witness_min.ok_or_else(|| missing("witness_min"))?,
                optimal_unitary: LocalUnitary::from_flat(&angles)?,
                restarts_used: witness_restarts.ok_or_else(|| missing("witness_restarts"))?,
            },
            mermin: MerminResult {
                value: mermin_max.ok_or_else(|| missing("mermin_max"))?,
                settings: [
                    BlochMeasurement::new(settings[0], settings[1]),
                    BlochMeasurement::new(settings[2], settings[3]),
                    BlochMeasurement::new(settings[4], settings[5]),
                    BlochMeasurement::new(settings[6], settings[7]),
                    BlochMeasurement::new(settings[8], settings[9]),
                    BlochMeasurement::new(settings[10], settings[11]),
                ],
            },
            concurrences: [
                concurrences[0].ok_or_else(|| missing("concurrence_trace_a"))?,
                concurrences[1].ok_or_else(|| missing("concurrence_trace_b"))?,
                concurrences[2].ok_or_else(|| missing("concurrence_trace_1"))?,
            ],
            uncertainties,
        })
    }
}
