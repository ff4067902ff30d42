//! Resolving a state from a file or a catalog name.

use std::path::PathBuf;

use anticoherence::catalog::{self, CatalogParams};
use anticoherence::{SpinQuantumNumber, SpinState};
use clap::Args;
use serde::Deserialize;

use crate::docs::StateDocument;
use crate::error::CliError;

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct SpinArgs {
    /// Spin quantum number as twice its value (5 for j = 5/2).
    #[arg(long = "two-j", conflicts_with = "j")]
    pub two_j: Option<u32>,
    /// Spin quantum number, e.g. 2, 5/2 or 2.5.
    #[arg(long = "j")]
    pub j: Option<String>,
}

impl SpinArgs {
    pub fn resolve(&self) -> Result<Option<SpinQuantumNumber>, CliError> {
        match (&self.two_j, &self.j) {
            (Some(_), Some(_)) => Err(CliError::Input("give either --two-j or --j, not both".into())),
            (Some(two_j), None) => Ok(Some(SpinQuantumNumber::new(*two_j)?)),
            (None, Some(j)) => Ok(Some(j.parse()?)),
            (None, None) => Ok(None),
        }
    }

    pub fn require(&self) -> Result<SpinQuantumNumber, CliError> {
        self.resolve()?.ok_or_else(|| CliError::Input("missing spin: pass --two-j or --j".into()))
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct StateArgs {
    /// State document (JSON).
    #[arg(long, conflicts_with = "name")]
    pub file: Option<PathBuf>,
    /// Catalog state name (see `catalog`).
    #[arg(long)]
    pub name: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub spin: SpinArgs,
    /// Magnetic quantum number, e.g. 2 or -3/2.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Complex parameter such as 0.5+0.2i.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub g: Option<u32>,
    /// Seed for randomized constructions (coulomb).
    #[arg(long = "state-seed")]
    pub seed: Option<u64>,
}

/// Parses `m` given as an integer, a half-integer fraction or a decimal.
pub fn parse_two_m(text: &str) -> Result<i64, CliError> {
    let s = text.trim();
    let bad = || CliError::Input(format!("invalid m value {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        return match den.trim() {
            "2" => Ok(num),
            "1" => Ok(2 * num),
            _ => Err(bad()),
        };
    }
    if let Ok(m) = s.parse::<i64>() {
        return Ok(2 * m);
    }
    let value: f64 = s.parse().map_err(|_| bad())?;
    let doubled = 2.0 * value;
    if (doubled - doubled.round()).abs() > 1e-9 {
        return Err(bad());
    }
    Ok(doubled.round() as i64)
}

impl StateArgs {
    pub fn params(&self) -> Result<CatalogParams, CliError> {
        Ok(CatalogParams {
            spin: self.spin.resolve()?,
            two_m: self.m.as_deref().map(parse_two_m).transpose()?,
            theta: self.theta,
            mu: self.mu.as_deref().map(catalog::parse_complex).transpose()?,
            epsilon: self.epsilon,
            g: self.g,
            seed: self.seed,
        })
    }

    pub fn load(&self) -> Result<SpinState, CliError> {
        match (&self.file, &self.name) {
            (Some(path), None) => StateDocument::load(path)?.to_state(),
            (None, Some(name)) => Ok(catalog::named_state(name, &self.params()?)?.state),
            (Some(_), Some(_)) => Err(CliError::Input("give either --file or --name, not both".into())),
            (None, None) => Err(CliError::Input("no state given: pass --file or --name".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_magnetic_numbers() {
        assert_eq!(parse_two_m("2").unwrap(), 4);
        assert_eq!(parse_two_m("-3/2").unwrap(), -3);
        assert_eq!(parse_two_m("0.5").unwrap(), 1);
        assert!(parse_two_m("1/3").is_err());
        assert!(parse_two_m("x").is_err());
    }
}
