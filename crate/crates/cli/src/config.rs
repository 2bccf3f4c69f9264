use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::CliError;

/// The state preparation a simulation starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    /// The ideal three-photon GHZ state.
    Ghz,
    /// Depolarized GHZ: p·|GHZ⟩⟨GHZ| + (1−p)·I/8.
    Werner(f64),
    /// A density matrix loaded from a reconstruction file.
    File(PathBuf),
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "ghz" {
            return Ok(Preset::Ghz);
        }
        if let Some(p) = s.strip_prefix("werner:") {
            let p: f64 = p
                .parse()
                .map_err(|_| CliError::config(format!("invalid werner parameter in {s:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::config(format!(
                    "werner parameter {p} outside [0, 1]"
                )));
            }
            return Ok(Preset::Werner(p));
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(CliError::config("file preset needs a path".into()));
            }
            return Ok(Preset::File(PathBuf::from(path)));
        }
        Err(CliError::config(format!(
            "unknown preset {s:?} (expected ghz, werner:P, or file:PATH)"
        )))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Ghz => write!(f, "ghz"),
            Preset::Werner(p) => write!(f, "werner:{p}"),
            Preset::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

fn load_toml<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T, CliError> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read config {}: {e}", p.display())))?;
            toml::from_str(&text)
                .map_err(|e| CliError::config(format!("config {}: {e}", p.display())))
        }
    }
}

/// Resolved parameters for `simulate`. Flags override the config file;
/// unset values take the documented defaults.
#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub preset: Preset,
    pub flux: f64,
    pub seed: u64,
    pub duration_s: f64,
    pub trigger_singles: u64,
    pub accidental_rate: f64,
    /// Restarts for the echoed true-state analysis.
    pub restarts: usize,
    pub out: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimulateFile {
    preset: Option<String>,
    flux: Option<f64>,
    seed: Option<u64>,
    duration: Option<f64>,
    trigger_singles: Option<u64>,
    accidental_rate: Option<f64>,
    restarts: Option<usize>,
    out: Option<PathBuf>,
}

impl SimulateConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn resolve(
        config: Option<&Path>,
        preset: Option<String>,
        flux: Option<f64>,
        seed: Option<u64>,
        duration: Option<f64>,
        trigger_singles: Option<u64>,
        accidental_rate: Option<f64>,
        restarts: Option<usize>,
        out: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let file: SimulateFile = load_toml(config)?;
        let preset = preset
            .or(file.preset)
            .unwrap_or_else(|| "ghz".into())
            .parse::<Preset>()?;
        let cfg = Self {
            preset,
            flux: flux.or(file.flux).unwrap_or(930.0),
            seed: seed.or(file.seed).unwrap_or(0),
            duration_s: duration.or(file.duration).unwrap_or(900.0),
            trigger_singles: trigger_singles.or(file.trigger_singles).unwrap_or(1_000_000),
            accidental_rate: accidental_rate.or(file.accidental_rate).unwrap_or(0.0),
            restarts: restarts.or(file.restarts).unwrap_or(16),
            out: out
                .or(file.out)
                .ok_or_else(|| CliError::config("simulate needs an output path (--out)".into()))?,
        };
        if !(cfg.flux > 0.0) {
            return Err(CliError::config(format!("flux {} must be positive", cfg.flux)));
        }
        if !(cfg.duration_s > 0.0) {
            return Err(CliError::config(format!(
                "duration {} must be positive",
                cfg.duration_s
            )));
        }
        if cfg.accidental_rate < 0.0 {
            return Err(CliError::config(format!(
                "accidental rate {} must be non-negative",
                cfg.accidental_rate
            )));
        }
        if cfg.restarts == 0 {
            return Err(CliError::config("restarts must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn header_line(&self) -> String {
        format!(
            "preset={} flux={} seed={} duration={} trigger-singles={} accidental-rate={} restarts={} out={}",
            self.preset,
            self.flux,
            self.seed,
            self.duration_s,
            self.trigger_singles,
            self.accidental_rate,
            self.restarts,
            self.out.display()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Mle,
    Linear,
}

impl FromStr for MethodChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "mle" => Ok(MethodChoice::Mle),
            "linear" => Ok(MethodChoice::Linear),
            other => Err(CliError::config(format!(
                "unknown method {other:?} (expected mle or linear)"
            ))),
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodChoice::Mle => write!(f, "mle"),
            MethodChoice::Linear => write!(f, "linear"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveChoice {
    Poisson,
    Gaussian,
}

impl FromStr for ObjectiveChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "poisson" => Ok(ObjectiveChoice::Poisson),
            "gaussian" => Ok(ObjectiveChoice::Gaussian),
            other => Err(CliError::config(format!(
                "unknown objective {other:?} (expected poisson or gaussian)"
            ))),
        }
    }
}

impl fmt::Display for ObjectiveChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveChoice::Poisson => write!(f, "poisson"),
            ObjectiveChoice::Gaussian => write!(f, "gaussian"),
        }
    }
}

/// Resolved parameters for `reconstruct`.
#[derive(Debug, Clone)]
pub struct ReconstructConfig {
    pub input: PathBuf,
    pub method: MethodChoice,
    pub objective: ObjectiveChoice,
    pub restarts: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ReconstructFile {
    input: Option<PathBuf>,
    method: Option<String>,
    objective: Option<String>,
    restarts: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl ReconstructConfig {
    pub fn resolve(
        config: Option<&Path>,
        input: Option<PathBuf>,
        method: Option<String>,
        objective: Option<String>,
        restarts: Option<usize>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let file: ReconstructFile = load_toml(config)?;
        let cfg = Self {
            input: input
                .or(file.input)
                .ok_or_else(|| CliError::config("reconstruct needs an input table (--input)".into()))?,
            method: method
                .or(file.method)
                .unwrap_or_else(|| "mle".into())
                .parse()?,
            objective: objective
                .or(file.objective)
                .unwrap_or_else(|| "poisson".into())
                .parse()?,
            restarts: restarts.or(file.restarts).unwrap_or(5),
            seed: seed.or(file.seed).unwrap_or(0),
            out: out
                .or(file.out)
                .ok_or_else(|| CliError::config("reconstruct needs an output path (--out)".into()))?,
        };
        if cfg.restarts == 0 {
            return Err(CliError::config("restarts must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn header_line(&self) -> String {
        format!(
            "input={} method={} objective={} restarts={} seed={} out={}",
            self.input.display(),
            self.method,
            self.objective,
            self.restarts,
            self.seed,
            self.out.display()
        )
    }
}

/// Resolved parameters for `analyze`.
#[derive(Debug, Clone)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub counts: Option<PathBuf>,
    pub trials: usize,
    pub restarts: usize,
    /// Restarts for the optimizer-backed quantities inside Monte-Carlo
    /// trials, where the full budget would be wasted.
    pub mc_restarts: usize,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AnalyzeFile {
    input: Option<PathBuf>,
    counts: Option<PathBuf>,
    trials: Option<usize>,
    restarts: Option<usize>,
    mc_restarts: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl AnalyzeConfig {
    pub fn resolve(
        config: Option<&Path>,
        input: Option<PathBuf>,
        counts: Option<PathBuf>,
        trials: Option<usize>,
        restarts: Option<usize>,
        mc_restarts: Option<usize>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let file: AnalyzeFile = load_toml(config)?;
        let cfg = Self {
            input: input
                .or(file.input)
                .ok_or_else(|| CliError::config("analyze needs an input matrix (--input)".into()))?,
            counts: counts.or(file.counts),
            trials: trials.or(file.trials).unwrap_or(0),
            restarts: restarts.or(file.restarts).unwrap_or(32),
            mc_restarts: mc_restarts.or(file.mc_restarts).unwrap_or(8),
            seed: seed.or(file.seed).unwrap_or(0),
            out: out
                .or(file.out)
                .ok_or_else(|| CliError::config("analyze needs an output path (--out)".into()))?,
        };
        if cfg.restarts == 0 || cfg.mc_restarts == 0 {
            return Err(CliError::config("restarts must be at least 1".into()));
        }
        if cfg.trials > 0 && cfg.counts.is_none() {
            return Err(CliError::config(
                "Monte-Carlo trials need the companion count table (--counts)".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn header_line(&self) -> String {
        format!(
            "input={} counts={} trials={} restarts={} mc-restarts={} seed={} out={}",
            self.input.display(),
            self.counts
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "none".into()),
            self.trials,
            self.restarts,
            self.mc_restarts,
            self.seed,
            self.out.display()
        )
    }
}

/// Resolved parameters for `dip`.
#[derive(Debug, Clone)]
pub struct DipCliConfig {
    pub epsilon0: f64,
    pub width_um: f64,
    /// Scan positions as min:max:count.
    pub positions: (f64, f64, usize),
    pub events_per_point: f64,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DipFile {
    epsilon0: Option<f64>,
    width: Option<f64>,
    positions: Option<String>,
    events_per_point: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

fn parse_positions(s: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "positions {s:?} must be min:max:count"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::config(format!("invalid position minimum {:?}", parts[0])))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::config(format!("invalid position maximum {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::config(format!("invalid position count {:?}", parts[2])))?;
    if !(max > min) {
        return Err(CliError::config(format!(
            "position range [{min}, {max}] is empty"
        )));
    }
    Ok((min, max, count))
}

impl DipCliConfig {
    pub fn resolve(
        config: Option<&Path>,
        epsilon0: Option<f64>,
        width: Option<f64>,
        positions: Option<String>,
        events_per_point: Option<f64>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let file: DipFile = load_toml(config)?;
        let cfg = Self {
            epsilon0: epsilon0.or(file.epsilon0).unwrap_or(0.69),
            width_um: width.or(file.width).unwrap_or(25.0),
            positions: parse_positions(
                &positions
                    .or(file.positions)
                    .unwrap_or_else(|| "-100:100:41".into()),
            )?,
            events_per_point: events_per_point.or(file.events_per_point).unwrap_or(2000.0),
            seed: seed.or(file.seed).unwrap_or(0),
            out: out
                .or(file.out)
                .ok_or_else(|| CliError::config("dip needs an output path (--out)".into()))?,
        };
        if !(0.0..=1.0).contains(&cfg.epsilon0) {
            return Err(CliError::config(format!(
                "epsilon0 {} outside [0, 1]",
                cfg.epsilon0
            )));
        }
        if !(cfg.width_um > 0.0) {
            return Err(CliError::config(format!(
                "width {} must be positive",
                cfg.width_um
            )));
        }
        if cfg.positions.2 < 5 {
            return Err(CliError::config(format!(
                "{} scan positions given, at least 5 required",
                cfg.positions.2
            )));
        }
        if !(cfg.events_per_point > 0.0) {
            return Err(CliError::config(format!(
                "events per point {} must be positive",
                cfg.events_per_point
            )));
        }
        Ok(cfg)
    }

    pub fn position_list(&self) -> Vec<f64> {
        let (min, max, count) = self.positions;
        (0..count)
            .map(|k| min + (max - min) * k as f64 / (count - 1) as f64)
            .collect()
    }

    pub fn header_line(&self) -> String {
        format!(
            "epsilon0={} width={} positions={}:{}:{} events-per-point={} seed={} out={}",
            self.epsilon0,
            self.width_um,
            self.positions.0,
            self.positions.1,
            self.positions.2,
            self.events_per_point,
            self.seed,
            self.out.display()
        )
    }
}
