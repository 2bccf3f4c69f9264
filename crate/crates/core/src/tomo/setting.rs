use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qlin::{states, PureState};

/// Number of analyzer settings in a complete three-photon tomography.
pub const SETTING_COUNT: usize = 64;

/// Per-photon analyzer basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    H,
    V,
    D,
    R,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::H, Basis::V, Basis::D, Basis::R];

    pub fn code(self) -> usize {
        match self {
            Basis::H => 0,
            Basis::V => 1,
            Basis::D => 2,
            Basis::R => 3,
        }
    }

    pub fn from_code(code: usize) -> Result<Self> {
        Self::ALL
            .get(code)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("basis code {code} out of range")))
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'H' => Ok(Basis::H),
            'V' => Ok(Basis::V),
            'D' => Ok(Basis::D),
            'R' => Ok(Basis::R),
            other => Err(Error::InvalidArgument(format!(
                "unknown basis label {other:?} (expected H, V, D, or R)"
            ))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Basis::H => 'H',
            Basis::V => 'V',
            Basis::D => 'D',
            Basis::R => 'R',
        }
    }

    /// The single-qubit analyzer state this label projects onto.
    pub fn state(self) -> PureState {
        match self {
            Basis::H => states::ket_h(),
            Basis::V => states::ket_v(),
            Basis::D => states::ket_d(),
            Basis::R => states::ket_r(),
        }
    }
}

/// One of the 64 analyzer settings: a basis label per photon (A, B, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnalyzerSetting {
    labels: [Basis; 3],
}

impl AnalyzerSetting {
    pub fn new(labels: [Basis; 3]) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> [Basis; 3] {
        self.labels
    }

    /// The canonical index ν = 16·code(A) + 4·code(B) + code(1).
    pub fn index(&self) -> usize {
        16 * self.labels[0].code() + 4 * self.labels[1].code() + self.labels[2].code()
    }

    pub fn from_index(index: usize) -> Result<Self> {
        if index >= SETTING_COUNT {
            return Err(Error::InvalidArgument(format!(
                "setting index {index} out of range"
            )));
        }
        Ok(Self {
            labels: [
                Basis::from_code(index / 16)?,
                Basis::from_code((index / 4) % 4)?,
                Basis::from_code(index % 4)?,
            ],
        })
    }

    /// All 64 settings in canonical index order.
    pub fn all() -> impl Iterator<Item = AnalyzerSetting> {
        (0..SETTING_COUNT).map(|k| AnalyzerSetting::from_index(k).unwrap())
    }

    /// The projection target |ψ_ν⟩, the tensor product of the three
    /// single-photon analyzer states.
    pub fn state(&self) -> PureState {
        self.labels[0]
            .state()
            .tensor(&self.labels[1].state())
            .tensor(&self.labels[2].state())
    }

    /// Whether every label is H or V (the computational block that fixes the
    /// flux normalization).
    pub fn is_hv_block(&self) -> bool {
        self.labels.iter().all(|b| matches!(b, Basis::H | Basis::V))
    }
}

impl fmt::Display for AnalyzerSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.labels {
            write!(f, "{}", b.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for AnalyzerSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "setting label {s:?} must have exactly 3 characters"
            )));
        }
        Ok(Self {
            labels: [
                Basis::from_char(chars[0])?,
                Basis::from_char(chars[1])?,
                Basis::from_char(chars[2])?,
            ],
        })
    }
}

/// Cached |ψ_ν⟩ for all 64 settings, indexed by ν.
pub(crate) fn setting_states() -> &'static [PureState] {
    static STATES: OnceLock<Vec<PureState>> = OnceLock::new();
    STATES.get_or_init(|| AnalyzerSetting::all().map(|s| s.state()).collect())
}
