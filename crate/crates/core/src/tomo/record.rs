use std::str::FromStr;

use super::setting::{AnalyzerSetting, SETTING_COUNT};
use crate::error::{Error, Result};

/// One tomographic acquisition: a setting, its raw coincidence count, and the
/// bookkeeping needed to correct it.
///
/// `raw_count` is kept as a real number: Poisson simulation and laboratory
/// data produce integers, while noiseless expected-value diagnostics feed
/// fractional counts through the same pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyRecord {
    pub setting: AnalyzerSetting,
    pub raw_count: f64,
    pub duration_s: f64,
    pub trigger_singles: u64,
    pub accidental_estimate: f64,
    /// Trigger-singles normalization scale, 1 until [`normalize_by_trigger`]
    /// assigns it. Derived, so it is not serialized; reload recomputes it.
    /// Scaling corrected counts by this factor re-expresses every record at
    /// the set-mean trigger flux.
    ///
    /// [`normalize_by_trigger`]: super::normalize_by_trigger
    pub norm_factor: f64,
}

impl TomographyRecord {
    pub fn new(
        setting: AnalyzerSetting,
        raw_count: f64,
        duration_s: f64,
        trigger_singles: u64,
        accidental_estimate: f64,
    ) -> Result<Self> {
        let record = Self {
            setting,
            raw_count,
            duration_s,
            trigger_singles,
            accidental_estimate,
            norm_factor: 1.0,
        };
        record.validate()?;
        Ok(record)
    }

    fn validate(&self) -> Result<()> {
        if !(self.raw_count >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "raw count {} for {} must be non-negative",
                self.raw_count, self.setting
            )));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "duration {} s for {} must be positive",
                self.duration_s, self.setting
            )));
        }
        if !(self.accidental_estimate >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "accidental estimate {} for {} must be non-negative",
                self.accidental_estimate, self.setting
            )));
        }
        Ok(())
    }

    /// The background-subtracted signed count; may be negative when the
    /// accidental estimate exceeds the raw count.
    pub fn background_corrected(&self) -> f64 {
        self.raw_count - self.accidental_estimate
    }

    /// The count used downstream: background-subtracted, clamped at zero,
    /// scaled by the trigger normalization.
    pub fn corrected_count(&self) -> f64 {
        self.background_corrected().max(0.0) * self.norm_factor
    }
}

/// A complete tomography data set: exactly one record per analyzer setting,
/// stored in canonical ν order.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographySet {
    records: Vec<TomographyRecord>,
    flux_hint: Option<f64>,
}

impl TomographySet {
    pub fn new(records: Vec<TomographyRecord>) -> Result<Self> {
        let mut slots: Vec<Option<TomographyRecord>> = vec![None; SETTING_COUNT];
        for record in records {
            let idx = record.setting.index();
            if slots[idx].is_some() {
                return Err(Error::IncompleteSet(format!(
                    "duplicate setting {}",
                    record.setting
                )));
            }
            slots[idx] = Some(record);
        }
        let missing: Vec<String> = AnalyzerSetting::all()
            .filter(|s| slots[s.index()].is_none())
            .map(|s| s.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteSet(format!(
                "missing settings {}",
                missing.join(", ")
            )));
        }
        Ok(Self {
            records: slots.into_iter().map(|s| s.unwrap()).collect(),
            flux_hint: None,
        })
    }

    pub fn with_flux_hint(mut self, flux: f64) -> Self {
        self.flux_hint = Some(flux);
        self
    }

    /// The generating flux when this set came out of the simulator; absent
    /// for ingested data.
    pub fn flux_hint(&self) -> Option<f64> {
        self.flux_hint
    }

    /// Records in canonical ν order.
    pub fn records(&self) -> &[TomographyRecord] {
        &self.records
    }

    pub fn record(&self, setting: AnalyzerSetting) -> &TomographyRecord {
        &self.records[setting.index()]
    }

    pub(crate) fn records_mut(&mut self) -> &mut [TomographyRecord] {
        &mut self.records
    }

    /// Total corrected counts over the {H,V}³ block. Those eight projectors
    /// partition the identity, so this total estimates the flux 𝒩.
    pub fn hv_block_total(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.setting.is_hv_block())
            .map(|r| r.corrected_count())
            .sum()
    }

    /// Renders the canonical count table: one row per setting, columns
    /// `setting raw_count duration_s trigger_singles accidental_estimate`.
    /// Floats use the shortest round-trip representation, so parsing the
    /// table back reproduces the records bit-exactly.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str("# columns: setting raw_count duration_s trigger_singles accidental_estimate\n");
        for r in &self.records {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                r.setting, r.raw_count, r.duration_s, r.trigger_singles, r.accidental_estimate
            ));
        }
        out
    }

    /// Parses a count table produced by [`Self::to_table`] (or laboratory
    /// tooling following the same format). Comment lines start with `#`;
    /// rows may appear in any order but each setting must appear exactly once.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut records = Vec::with_capacity(SETTING_COUNT);
        for (lineno, line) in text.lines().enumerate() {
            let line_number = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: line_number,
                    message: format!("expected 5 columns, found {}", fields.len()),
                });
            }
            let setting = AnalyzerSetting::from_str(fields[0]).map_err(|e| Error::Parse {
                line: line_number,
                message: e.to_string(),
            })?;
            let parse_f64 = |field: &str, name: &str| -> Result<f64> {
                field.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_number,
                    message: format!("invalid {name} {field:?}"),
                })
            };
            let raw_count = parse_f64(fields[1], "raw_count")?;
            let duration_s = parse_f64(fields[2], "duration_s")?;
            let trigger_singles = fields[3].parse::<u64>().map_err(|_| Error::Parse {
                line: line_number,
                message: format!("invalid trigger_singles {:?}", fields[3]),
            })?;
            let accidental = parse_f64(fields[4], "accidental_estimate")?;
            let record =
                TomographyRecord::new(setting, raw_count, duration_s, trigger_singles, accidental)
                    .map_err(|e| Error::Parse {
                        line: line_number,
                        message: e.to_string(),
                    })?;
            records.push(record);
        }
        Self::new(records)
    }
}
