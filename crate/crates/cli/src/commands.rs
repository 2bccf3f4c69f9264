use std::path::Path;

use ghz_tomo::analysis::{full_report, ghz_fidelity, mermin_maximum, witness_minimum, AnalysisOptions};
use ghz_tomo::qlin::{states, DensityMatrix};
use ghz_tomo::reconstruct::{
    linear_invert, mle_reconstruct_with, monte_carlo_with, McQuantity, MleConfig, Objective,
    ReconstructionResult,
};
use ghz_tomo::tomo::{
    dip_curve, fit_dip, normalize_by_trigger, simulate, BackgroundModel, DipConfig,
    SimulationConfig, TomographySet,
};

use crate::config::{
    AnalyzeConfig, DipCliConfig, MethodChoice, ObjectiveChoice, Preset, ReconstructConfig,
    SimulateConfig,
};
use crate::CliError;

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn resolve_state(preset: &Preset) -> Result<DensityMatrix, CliError> {
    match preset {
        Preset::Ghz => Ok(states::ghz3().to_density()),
        Preset::Werner(p) => states::werner_ghz3(*p).map_err(CliError::from),
        Preset::File(path) => {
            let text = read_file(path)?;
            let result = ReconstructionResult::from_text(&text).map_err(CliError::from)?;
            Ok(result.rho)
        }
    }
}

/// `simulate`: draw one full tomography acquisition from a preset state and
/// write the count table, echoing the generating state's true analysis
/// quantities for later comparison.
pub fn cmd_simulate(cfg: &SimulateConfig) -> Result<String, CliError> {
    let rho = resolve_state(&cfg.preset)?;
    let background = if cfg.accidental_rate > 0.0 {
        Some(BackgroundModel::flat(cfg.accidental_rate).map_err(CliError::from)?)
    } else {
        None
    };
    let sim_cfg = SimulationConfig {
        flux: cfg.flux,
        seed: cfg.seed,
        duration_s: cfg.duration_s,
        trigger_singles: cfg.trigger_singles,
        background,
    };
    let set = simulate(&rho, &sim_cfg).map_err(CliError::from)?;

    let truth = full_report(
        &rho,
        &AnalysisOptions {
            restarts: cfg.restarts,
            seed: cfg.seed,
        },
    )
    .map_err(CliError::from)?;

    let mut out = String::new();
    out.push_str("# ghz-tomo simulate\n");
    out.push_str(&format!("# config: {}\n", cfg.header_line()));
    out.push_str(&format!("# true_fidelity {:.6}\n", truth.fidelity));
    out.push_str(&format!("# true_witness_min {:.6}\n", truth.witness.value));
    out.push_str(&format!("# true_mermin_max {:.6}\n", truth.mermin.value));
    out.push_str(&format!(
        "# true_concurrences {:.6} {:.6} {:.6}\n",
        truth.concurrences[0], truth.concurrences[1], truth.concurrences[2]
    ));
    out.push_str(&set.to_table());
    write_file(&cfg.out, &out)?;

    Ok(format!(
        "wrote {} settings to {}\ntrue fidelity {:.6}, witness {:.6}, mermin {:.6}",
        set.records().len(),
        cfg.out.display(),
        truth.fidelity,
        truth.witness.value,
        truth.mermin.value
    ))
}

/// `reconstruct`: parse a count table, apply the trigger normalization, fit
/// the state, and write the result. A non-converged fit still writes its
/// output but exits with status 3.
pub fn cmd_reconstruct(cfg: &ReconstructConfig) -> Result<String, CliError> {
    let text = read_file(&cfg.input)?;
    let set = TomographySet::from_table(&text).map_err(CliError::from)?;
    let set = normalize_by_trigger(&set).map_err(CliError::from)?;

    let result = match cfg.method {
        MethodChoice::Linear => linear_invert(&set).map_err(CliError::from)?,
        MethodChoice::Mle => {
            let mle_cfg = MleConfig {
                objective: match cfg.objective {
                    ObjectiveChoice::Poisson => Objective::Poisson,
                    ObjectiveChoice::Gaussian => Objective::Gaussian,
                },
                restarts: cfg.restarts,
                seed: cfg.seed,
                ..MleConfig::default()
            };
            mle_reconstruct_with(&set, None, &mle_cfg).map_err(CliError::from)?
        }
    };

    let mut out = String::new();
    out.push_str("# ghz-tomo reconstruct\n");
    out.push_str(&format!("# config: {}\n", cfg.header_line()));
    out.push_str(&result.to_text());
    write_file(&cfg.out, &out)?;

    let summary = format!(
        "method {}, flux {:.3}, log-likelihood {:.3}, physical {}, converged {}\nwrote {}",
        result.method,
        result.flux,
        result.log_likelihood,
        result.physical,
        result.converged,
        cfg.out.display()
    );
    if !result.converged {
        return Err(CliError::non_convergence(format!(
            "fit did not converge within the iteration budget\n{summary}"
        )));
    }
    Ok(summary)
}

/// `analyze`: load a reconstructed state, compute the derived quantities,
/// and (with trials > 0) attach Monte-Carlo error bars resampled from the
/// companion count table.
pub fn cmd_analyze(cfg: &AnalyzeConfig) -> Result<String, CliError> {
    let text = read_file(&cfg.input)?;
    let result = ReconstructionResult::from_text(&text).map_err(CliError::from)?;

    let mut report = full_report(
        &result.rho,
        &AnalysisOptions {
            restarts: cfg.restarts,
            seed: cfg.seed,
        },
    )
    .map_err(CliError::from)?;

    if cfg.trials > 0 {
        let counts_path = cfg.counts.as_ref().expect("checked during resolve");
        let counts_text = read_file(counts_path)?;
        let set = TomographySet::from_table(&counts_text).map_err(CliError::from)?;
        let set = normalize_by_trigger(&set).map_err(CliError::from)?;

        let mc_restarts = cfg.mc_restarts;
        let seed = cfg.seed;
        let quantities = [
            McQuantity::new("fidelity", ghz_fidelity),
            McQuantity::new("witness_min", move |rho: &DensityMatrix| {
                witness_minimum(rho, mc_restarts, seed).map(|w| w.value)
            }),
            McQuantity::new("mermin_max", move |rho: &DensityMatrix| {
                mermin_maximum(rho, mc_restarts, seed.wrapping_add(1)).map(|m| m.value)
            }),
            McQuantity::new("concurrence_trace_a", |rho: &DensityMatrix| {
                ghz_tomo::analysis::concurrence2(&rho.partial_trace(&[1, 2])?)
            }),
            McQuantity::new("concurrence_trace_b", |rho: &DensityMatrix| {
                ghz_tomo::analysis::concurrence2(&rho.partial_trace(&[0, 2])?)
            }),
            McQuantity::new("concurrence_trace_1", |rho: &DensityMatrix| {
                ghz_tomo::analysis::concurrence2(&rho.partial_trace(&[0, 1])?)
            }),
        ];
        let mc_cfg = MleConfig {
            restarts: 1,
            seed: cfg.seed,
            ..MleConfig::default()
        };
        let summary = monte_carlo_with(&set, cfg.trials, cfg.seed, &quantities, &mc_cfg)
            .map_err(CliError::from)?;
        report.uncertainties = Some(summary);
    }

    let mut out = String::new();
    out.push_str("# ghz-tomo analyze\n");
    out.push_str(&format!("# config: {}\n", cfg.header_line()));
    out.push_str(&report.to_text());
    write_file(&cfg.out, &out)?;

    Ok(format!(
        "fidelity {:.6}, witness {:.6}, mermin {:.6}\nwrote {}",
        report.fidelity,
        report.witness.value,
        report.mermin.value,
        cfg.out.display()
    ))
}

/// `dip`: simulate the interference-dip scan, fit the Gaussian dip, and
/// write positions, counts, and the fitted visibility.
pub fn cmd_dip(cfg: &DipCliConfig) -> Result<String, CliError> {
    let dip_cfg = DipConfig {
        epsilon0: cfg.epsilon0,
        width_um: cfg.width_um,
        positions_um: cfg.position_list(),
        events_per_point: cfg.events_per_point,
    };
    let curve = dip_curve(&dip_cfg, cfg.seed).map_err(CliError::from)?;
    let fit = fit_dip(&curve).map_err(CliError::from)?;

    let mut out = String::new();
    out.push_str("# ghz-tomo dip\n");
    out.push_str(&format!("# config: {}\n", cfg.header_line()));
    out.push_str(&format!("fitted_visibility {:.5e}\n", fit.visibility));
    out.push_str(&format!("fitted_baseline {:.5e}\n", fit.baseline));
    out.push_str(&format!("fitted_width_um {:.5e}\n", fit.width_um));
    out.push_str(&format!("fitted_center_um {:.5e}\n", fit.center_um));
    out.push_str("# columns: position_um count\n");
    for (x, count) in &curve {
        out.push_str(&format!("{x} {count}\n"));
    }
    write_file(&cfg.out, &out)?;

    Ok(format!(
        "fitted visibility {:.4} over {} positions\nwrote {}",
        fit.visibility,
        curve.len(),
        cfg.out.display()
    ))
}
