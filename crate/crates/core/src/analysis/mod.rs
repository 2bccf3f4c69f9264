//! Derived quantities of a reconstructed state: GHZ fidelity, the
//! entanglement-witness minimum over local unitaries, the maximum Mermin
//! parameter, and two-photon concurrences.

mod concurrence;
mod mermin;
mod report;
mod witness;

#[cfg(test)]
mod tests;

pub use concurrence::concurrence2;
pub use mermin::{
    mermin_correlation, mermin_maximum, mermin_value, BlochMeasurement, MerminResult,
    MerminSettings,
};
pub use report::{full_report, ghz_fidelity, AnalysisOptions, AnalysisReport};
pub use witness::{witness_minimum, witness_value_at, WitnessResult};
