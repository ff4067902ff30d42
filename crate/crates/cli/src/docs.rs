//! File formats: state documents, point lists, number formatting.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anticoherence::{BlochPoint, Complex64, PointConfiguration, SpinQuantumNumber, SpinState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
const LOAD_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub schema_version: u32,
    pub two_j: u32,
    /// `[re, im]` pairs in ascending `m`.
    pub coefficients: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl StateDocument {
    pub fn from_state(state: &SpinState, name: Option<String>, provenance: Option<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            two_j: state.two_j(),
            coefficients: state.coefficients().iter().map(|c| [c.re, c.im]).collect(),
            name,
            provenance,
        }
    }

    pub fn to_state(&self) -> Result<SpinState, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let expected = self.two_j as usize + 1;
        if self.coefficients.len() != expected {
            return Err(CliError::Input(format!(
                "state has {} coefficients, 2j + 1 = {expected} expected",
                self.coefficients.len()
            )));
        }
        let c: Vec<Complex64> = self.coefficients.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let norm = c.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm.is_finite() && norm > 0.0 && (norm - 1.0).abs() > LOAD_NORM_TOLERANCE {
            eprintln!("warning: state norm is {norm}, renormalizing");
        }
        Ok(SpinState::from_two_j(self.two_j, c)?)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_file(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// A Majorana point with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEntry {
    pub theta: f64,
    pub phi: f64,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsDocument {
    pub schema_version: u32,
    pub two_j: u32,
    pub points: Vec<PointEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degeneracy_profile: Vec<usize>,
}

impl PointsDocument {
    pub fn to_configuration(&self) -> Result<PointConfiguration, CliError> {
        let points = expand(&self.points)?;
        let spin = SpinQuantumNumber::new(self.two_j)?;
        Ok(PointConfiguration::new(spin, points)?)
    }
}

fn expand(entries: &[PointEntry]) -> Result<Vec<BlochPoint>, CliError> {
    let mut points = Vec::new();
    for e in entries {
        if e.multiplicity == 0 {
            return Err(CliError::Input("point multiplicity must be at least 1".into()));
        }
        let p = BlochPoint::new(e.theta, e.phi)?;
        points.extend(std::iter::repeat_n(p, e.multiplicity));
    }
    Ok(points)
}

/// Reads points from JSON (a points document) or CSV (`theta,phi[,multiplicity]`).
pub fn load_points(path: &Path) -> Result<PointConfiguration, CliError> {
    let text = read_file(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if !is_csv {
        let doc: PointsDocument =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        return doc.to_configuration();
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for row in reader.deserialize::<PointEntry>() {
        entries.push(row.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?);
    }
    let points = expand(&entries)?;
    Ok(PointConfiguration::from_points(points)?)
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Opens `path` for writing, or stdout when absent.
pub fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(p) => {
            let file = fs::File::create(p)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
    }
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Like C's `%.15g`.
pub fn fmt15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding can carry into a new digit; trimming zeros is still right
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.14e}");
        let (mantissa, exponent) = s.split_once('e').expect("scientific format");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{exponent}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt15).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(0.1 + 0.2), "0.3");
        assert_eq!(fmt15(std::f64::consts::PI), "3.14159265358979");
        assert_eq!(fmt15(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt15(123456.0), "123456");
    }

    #[test]
    fn state_document_roundtrip() {
        let state = anticoherence::catalog::qq52().unwrap();
        let doc = StateDocument::from_state(&state, Some("qq52".into()), None);
        let text = serde_json::to_string(&doc).unwrap();
        let back: StateDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_state().unwrap(), state);
    }

    #[test]
    fn wrong_length_rejected() {
        let doc = StateDocument {
            schema_version: 1,
            two_j: 2,
            coefficients: vec![[1.0, 0.0]; 2],
            name: None,
            provenance: None,
        };
        assert!(doc.to_state().is_err());
    }
}
