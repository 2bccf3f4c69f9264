use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlin::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Linear,
    Mle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Linear => write!(f, "linear"),
            Method::Mle => write!(f, "mle"),
        }
    }
}

/// A reconstructed state with its fit diagnostics.
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub rho: DensityMatrix,
    /// Fitted or estimated flux 𝒩 (events per acquisition).
    pub flux: f64,
    /// Poisson log-likelihood of the counts under `rho` and `flux`.
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: Method,
    /// Positive semidefinite within tolerance. Always true for the
    /// likelihood fit; linear inversion of noisy data may clear it.
    pub physical: bool,
}

impl ReconstructionResult {
    /// Renders the result as a text document: metadata lines, then the
    /// density matrix as 64 `re im` pairs in row-major order, 12 significant
    /// digits throughout.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("method {}\n", self.method));
        out.push_str(&format!("flux {:.11e}\n", self.flux));
        out.push_str(&format!("log_likelihood {:.11e}\n", self.log_likelihood));
        out.push_str(&format!("iterations {}\n", self.iterations));
        out.push_str(&format!("converged {}\n", self.converged));
        out.push_str(&format!("physical {}\n", self.physical));
        out.push_str(&format!("qubits {}\n", self.rho.qubit_count()));
        out.push_str("rho\n");
        let d = self.rho.dim();
        for i in 0..d {
            for j in 0..d {
                let z = self.rho.entry(i, j);
                out.push_str(&format!("{:.11e} {:.11e}\n", z.re, z.im));
            }
        }
        out
    }

    /// Parses a document produced by [`Self::to_text`]. Comment lines are
    /// ignored. The matrix is validated on load; an indefinite matrix is
    /// accepted only when its `physical` flag says so.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut method = None;
        let mut flux = None;
        let mut log_likelihood = None;
        let mut iterations = None;
        let mut converged = None;
        let mut physical = None;
        let mut qubits: Option<usize> = None;
        let mut entries: Vec<Complex64> = Vec::new();
        let mut in_matrix = false;

        for (lineno, line) in text.lines().enumerate() {
            let line_number = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !in_matrix {
                let (key, value) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
                let value = value.trim();
                let bad = |message: String| Error::Parse {
                    line: line_number,
                    message,
                };
                match key {
                    "method" => {
                        method = Some(match value {
                            "linear" => Method::Linear,
                            "mle" => Method::Mle,
                            other => return Err(bad(format!("unknown method {other:?}"))),
                        })
                    }
                    "flux" => {
                        flux = Some(value.parse::<f64>().map_err(|_| {
                            bad(format!("invalid flux {value:?}"))
                        })?)
                    }
                    "log_likelihood" => {
                        log_likelihood = Some(value.parse::<f64>().map_err(|_| {
                            bad(format!("invalid log_likelihood {value:?}"))
                        })?)
                    }
                    "iterations" => {
                        iterations = Some(value.parse::<usize>().map_err(|_| {
                            bad(format!("invalid iterations {value:?}"))
                        })?)
                    }
                    "converged" => {
                        converged = Some(value.parse::<bool>().map_err(|_| {
                            bad(format!("invalid converged flag {value:?}"))
                        })?)
                    }
                    "physical" => {
                        physical = Some(value.parse::<bool>().map_err(|_| {
                            bad(format!("invalid physical flag {value:?}"))
                        })?)
                    }
                    "qubits" => {
                        qubits = Some(value.parse::<usize>().map_err(|_| {
                            bad(format!("invalid qubit count {value:?}"))
                        })?)
                    }
                    "rho" => in_matrix = true,
                    other => return Err(bad(format!("unknown field {other:?}"))),
                }
            } else {
                let mut parts = trimmed.split_whitespace();
                let re = parts
                    .next()
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_number,
                        message: "expected a real part".into(),
                    })?;
                let im = parts
                    .next()
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_number,
                        message: "expected an imaginary part".into(),
                    })?;
                if parts.next().is_some() {
                    return Err(Error::Parse {
                        line: line_number,
                        message: "expected exactly two columns".into(),
                    });
                }
                entries.push(Complex64::new(re, im));
            }
        }

        let qubits = qubits.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing qubits field".into(),
        })?;
        let d = 1usize << qubits;
        if entries.len() != d * d {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {} matrix entries, found {}", d * d, entries.len()),
            });
        }
        let m = DMatrix::from_fn(d, d, |i, j| entries[i * d + j]);
        // Symmetrize away the last-digit rounding from the text format.
        let m = (m.clone() + m.adjoint()).scale(0.5);
        let physical = physical.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing physical flag".into(),
        })?;
        let rho = if physical {
            DensityMatrix::new(m)?
        } else {
            DensityMatrix::new_indefinite(m)?
        };

        Ok(Self {
            rho,
            flux: flux.ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing flux field".into(),
            })?,
            log_likelihood: log_likelihood.ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing log_likelihood field".into(),
            })?,
            iterations: iterations.ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing iterations field".into(),
            })?,
            converged: converged.ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing converged flag".into(),
            })?,
            method: method.ok_or_else(|| Error::Parse {
                line: 0,
                message: "missing method field".into(),
            })?,
            physical,
        })
    }
}
