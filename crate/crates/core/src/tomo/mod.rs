//! The measurement model: the 64 analyzer settings, the Born-rule count
//! model with flux 𝒩, Poisson count simulation, background and trigger
//! corrections, the interference-dip scan, and the beam-splitter GHZ source.

mod dip;
mod model;
mod record;
mod setting;
mod source;


pub use dip::{dip_curve, dip_state, expected_rate, fit_dip, overlap_at, DipConfig, DipFit};
pub use model::{
    apply_background, born_probability, expected_count, expected_counts, noiseless_set,
    normalize_by_trigger, projector, simulate, simulate_counts, BackgroundModel,
    SimulationConfig, DEFAULT_DURATION_S, DEFAULT_TRIGGER_SINGLES,
};
pub use record::{TomographyRecord, TomographySet};
pub use setting::{AnalyzerSetting, Basis, SETTING_COUNT};
pub use source::{ghz_from_pairs, GhzPreparation};

pub(crate) use model::{sample_poisson, substream};
pub(crate) use setting::setting_states;
