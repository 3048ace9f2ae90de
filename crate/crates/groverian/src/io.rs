//! State files and CSV output.
//!
//! The shared state file is a JSON document with `num_qubits`, `kind`
//! ("pure" or "density") and the payload as [real, imaginary] pairs:
//! `amplitudes` in basis order for pure states, `matrix` row-major for
//! density matrices. Serialization uses shortest-round-trip decimals, so
//! re-parsed values are bit-identical; the format contract only requires
//! 1e-12 agreement.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::TrackRecord;
use crate::error::{Error, Result};
use crate::qstate::{DensityMatrix, PureState};

#[derive(Serialize, Deserialize)]
struct RawStateFile {
    num_qubits: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

/// A parsed state file: either kind, already validated.
#[derive(Debug, Clone)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateFile {
    pub fn num_qubits(&self) -> usize {
        match self {
            StateFile::Pure(p) => p.num_qubits(),
            StateFile::Density(d) => d.num_qubits(),
        }
    }

    /// The density matrix view of either kind.
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateFile::Pure(p) => crate::qstate::density_of(p),
            StateFile::Density(d) => d.clone(),
        }
    }
}

fn bad(path: &str, message: impl Into<String>) -> Error {
    Error::BadStateFile {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses a state document, validating the underlying state invariants.
/// `label` names the source in error messages, usually the file path.
pub fn parse_state(text: &str, label: &str) -> Result<StateFile> {
    let raw: RawStateFile =
        serde_json::from_str(text).map_err(|e| bad(label, format!("invalid JSON: {e}")))?;
    let n = raw.num_qubits;
    if n == 0 || n > 16 {
        return Err(bad(label, format!("num_qubits {n} outside 1..=16")));
    }
    let dim = 1usize << n;
    match raw.kind.as_str() {
        "pure" => {
            let amps = raw
                .amplitudes
                .ok_or_else(|| bad(label, "kind \"pure\" needs an \"amplitudes\" array"))?;
            if amps.len() != dim {
                return Err(bad(
                    label,
                    format!("{} amplitudes, expected {dim} for {n} qubits", amps.len()),
                ));
            }
            let amps = amps
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            let state = PureState::new(n, amps)
                .map_err(|e| bad(label, format!("invalid pure state: {e}")))?;
            Ok(StateFile::Pure(state))
        }
        "density" => {
            let entries = raw
                .matrix
                .ok_or_else(|| bad(label, "kind \"density\" needs a \"matrix\" array"))?;
            if entries.len() != dim * dim {
                return Err(bad(
                    label,
                    format!(
                        "{} matrix entries, expected {} for {n} qubits",
                        entries.len(),
                        dim * dim
                    ),
                ));
            }
            let mat = DMatrix::from_fn(dim, dim, |r, c| {
                let [re, im] = entries[r * dim + c];
                Complex64::new(re, im)
            });
            let rho = DensityMatrix::new(n, mat)
                .map_err(|e| bad(label, format!("invalid density matrix: {e}")))?;
            Ok(StateFile::Density(rho))
        }
        other => Err(bad(label, format!("unknown kind {other:?}"))),
    }
}

/// Renders a pure state as a state document.
pub fn render_pure(state: &PureState) -> String {
    let raw = RawStateFile {
        num_qubits: state.num_qubits(),
        kind: "pure".to_string(),
        amplitudes: Some(state.amps().iter().map(|a| [a.re, a.im]).collect()),
        matrix: None,
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

/// Renders a density matrix as a state document.
pub fn render_density(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            entries.push([v.re, v.im]);
        }
    }
    let raw = RawStateFile {
        num_qubits: rho.num_qubits(),
        kind: "density".to_string(),
        amplitudes: None,
        matrix: Some(entries),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads and validates a state file of either kind.
pub fn read_state_file(path: &Path) -> Result<StateFile> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_state(&text, &path.display().to_string())
}

pub fn write_pure_state_file(path: &Path, state: &PureState) -> Result<()> {
    std::fs::write(path, render_pure(state) + "\n").map_err(|e| io_err(path, e))
}

pub fn write_density_file(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, render_density(rho) + "\n").map_err(|e| io_err(path, e))
}

/// Renders track records as CSV: header `t,success,G`, one row per
/// iteration, LF line endings, shortest-round-trip decimals.
pub fn render_track_csv(records: &[TrackRecord]) -> String {
    let mut out = String::from("t,success,G\n");
    for r in records {
        writeln!(out, "{},{},{}", r.iteration, r.success_probability, r.groverian)
            .expect("string write");
    }
    out
}

pub fn write_track_csv(path: &Path, records: &[TrackRecord]) -> Result<()> {
    std::fs::write(path, render_track_csv(records)).map_err(|e| io_err(path, e))
}

/// Formats with 12 significant digits, then trims to the shortest decimal
/// representation of the rounded value. Text-mode output uses this.
pub fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    format!("{rounded}")
}
