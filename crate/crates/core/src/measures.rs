//! Anticoherence measures.
//!
//! Every measure maps a state to `[0, 1]`, vanishes exactly on coherent states,
//! equals one exactly on `t`-anticoherent states and is invariant under global
//! phases and rotations. Apart from the order-1 variance measure they depend on
//! the state only through the spectrum `lambda_1..lambda_{t+1}` of `rho_t`,
//! obtained here as squared singular values of the Schmidt coefficient matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::reductions::{purity_from_coefficients, schmidt_values};
use crate::spin::{build_spin_operators, total_variance, SpinState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    /// Total-variance measure, order 1 only.
    Variance,
    /// Rescaled linear entropy of `rho_t`.
    Purity,
    HilbertSchmidt,
    Trace,
    Bures,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 5] = [
        MeasureKind::Variance,
        MeasureKind::Purity,
        MeasureKind::HilbertSchmidt,
        MeasureKind::Trace,
        MeasureKind::Bures,
    ];

    /// The four kinds defined at every order.
    pub const SPECTRAL: [MeasureKind; 4] = [
        MeasureKind::Purity,
        MeasureKind::HilbertSchmidt,
        MeasureKind::Trace,
        MeasureKind::Bures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Variance => "variance",
            MeasureKind::Purity => "purity",
            MeasureKind::HilbertSchmidt => "hs",
            MeasureKind::Trace => "trace",
            MeasureKind::Bures => "bures",
        }
    }

    pub fn is_valid_at(self, t: usize) -> bool {
        self != MeasureKind::Variance || t == 1
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "variance" | "v" => Ok(MeasureKind::Variance),
            "purity" | "r" => Ok(MeasureKind::Purity),
            "hs" | "hilbert-schmidt" | "hilbertschmidt" => Ok(MeasureKind::HilbertSchmidt),
            "trace" | "tr" => Ok(MeasureKind::Trace),
            "bures" => Ok(MeasureKind::Bures),
            other => Err(Error::InvalidParameter(format!("unknown measure kind {other:?}"))),
        }
    }
}

fn unit_interval(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `A_1^V = (V - j) / j^2`.
pub fn a1_variance(state: &SpinState) -> Result<f64> {
    state.spin().check_order(1)?;
    let j = state.j();
    Ok(unit_interval((total_variance(state) - j) / (j * j)))
}

/// `A_t^R = (t+1)/t * (1 - R_t)` for a given purity.
pub fn purity_measure_from_purity(purity: f64, t: usize) -> f64 {
    let t = t as f64;
    unit_interval((t + 1.0) / t * (1.0 - purity))
}

/// Purity-based measure, with the purity taken from the coefficient formula.
pub fn a_purity(state: &SpinState, t: usize) -> Result<f64> {
    Ok(purity_measure_from_purity(purity_from_coefficients(state, t)?, t))
}

/// Evaluates a spectral measure from the eigenvalues of `rho_t` (length `t + 1`).
pub fn measure_from_spectrum(spectrum: &[f64], kind: MeasureKind) -> Result<f64> {
    let roots: Vec<f64> = spectrum.iter().map(|l| l.max(0.0).sqrt()).collect();
    spectral_measure(spectrum, &roots, kind)
}

/// Same as [`measure_from_spectrum`] but from the singular values `sqrt(lambda_i)`,
/// which keeps the Bures measure accurate near zero eigenvalues.
pub fn measure_from_schmidt(schmidt: &[f64], kind: MeasureKind) -> Result<f64> {
    let spectrum: Vec<f64> = schmidt.iter().map(|s| s * s).collect();
    spectral_measure(&spectrum, schmidt, kind)
}

fn spectral_measure(spectrum: &[f64], roots: &[f64], kind: MeasureKind) -> Result<f64> {
    if spectrum.len() < 2 {
        return Err(Error::InvalidParameter("spectrum needs at least two eigenvalues".into()));
    }
    let dim = spectrum.len() as f64;
    let t = dim - 1.0;
    let mixed = 1.0 / dim;
    let value = match kind {
        MeasureKind::Variance => {
            return Err(Error::InvalidParameter(
                "the variance measure is not a function of the spectrum".into(),
            ))
        }
        MeasureKind::Purity => {
            let purity: f64 = spectrum.iter().map(|l| l * l).sum();
            (t + 1.0) / t * (1.0 - purity)
        }
        MeasureKind::HilbertSchmidt => {
            let dev: f64 = spectrum.iter().map(|l| (l - mixed).powi(2)).sum();
            1.0 - ((t + 1.0) / t * dev).sqrt()
        }
        MeasureKind::Trace => {
            let dev: f64 = spectrum.iter().map(|l| (l - mixed).abs()).sum();
            1.0 - (t + 1.0) / (2.0 * t) * dev
        }
        MeasureKind::Bures => {
            // With sum s_i^2 = 1: sqrt(d) - sum s_i = sqrt(d)/2 * sum (s_i - 1/sqrt(d))^2,
            // which keeps full precision next to the maximally mixed point.
            let root_dim = dim.sqrt();
            let scale = roots.iter().map(|s| s * s).sum::<f64>().sqrt();
            if scale == 0.0 {
                return Err(Error::ZeroNorm);
            }
            let spread: f64 = roots.iter().map(|s| (s / scale - 1.0 / root_dim).powi(2)).sum();
            let ratio = (0.5 * root_dim * spread / (root_dim - 1.0)).max(0.0);
            1.0 - ratio.sqrt()
        }
    };
    Ok(unit_interval(value))
}

/// Hilbert-Schmidt, trace or Bures measure of order `t`.
pub fn a_distance(state: &SpinState, t: usize, kind: MeasureKind) -> Result<f64> {
    if !matches!(kind, MeasureKind::HilbertSchmidt | MeasureKind::Trace | MeasureKind::Bures) {
        return Err(Error::InvalidParameter(format!("{kind} is not a distance measure")));
    }
    measure_from_schmidt(&schmidt_values(state, t)?, kind)
}

/// Any measure of order `t`.
pub fn a_measure(state: &SpinState, t: usize, kind: MeasureKind) -> Result<f64> {
    match kind {
        MeasureKind::Variance => {
            if t != 1 {
                return Err(Error::InvalidParameter(format!(
                    "the variance measure is defined for t = 1 only (got t = {t})"
                )));
            }
            a1_variance(state)
        }
        MeasureKind::Purity => a_purity(state, t),
        _ => a_distance(state, t, kind),
    }
}

/// All measures of one order, sharing a single diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValues {
    pub t: usize,
    pub variance: Option<f64>,
    pub purity: f64,
    pub hilbert_schmidt: f64,
    pub trace: f64,
    pub bures: f64,
}

impl MeasureValues {
    pub fn compute(state: &SpinState, t: usize) -> Result<Self> {
        let schmidt = schmidt_values(state, t)?;
        Ok(Self {
            t,
            variance: if t == 1 { Some(a1_variance(state)?) } else { None },
            purity: a_purity(state, t)?,
            hilbert_schmidt: measure_from_schmidt(&schmidt, MeasureKind::HilbertSchmidt)?,
            trace: measure_from_schmidt(&schmidt, MeasureKind::Trace)?,
            bures: measure_from_schmidt(&schmidt, MeasureKind::Bures)?,
        })
    }

    pub fn get(&self, kind: MeasureKind) -> Option<f64> {
        match kind {
            MeasureKind::Variance => self.variance,
            MeasureKind::Purity => Some(self.purity),
            MeasureKind::HilbertSchmidt => Some(self.hilbert_schmidt),
            MeasureKind::Trace => Some(self.trace),
            MeasureKind::Bures => Some(self.bures),
        }
    }
}

/// Measures at every order `1 <= t < 2j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureProfile {
    pub two_j: u32,
    pub rows: Vec<MeasureValues>,
}

impl MeasureProfile {
    pub fn at(&self, t: usize) -> Option<&MeasureValues> {
        self.rows.iter().find(|r| r.t == t)
    }
}

pub fn measure_profile(state: &SpinState) -> Result<MeasureProfile> {
    let rows = (1..state.spin().n())
        .map(|t| MeasureValues::compute(state, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasureProfile { two_j: state.two_j(), rows })
}

/// `alpha(j) = j (j^2 - 2j + 3) / (2 (j - 1))`.
pub fn w_alpha(j: f64) -> f64 {
    j * (j * j - 2.0 * j + 3.0) / (2.0 * (j - 1.0))
}

/// `beta(j) = (2j - 1)^2 j / (3 (j - 1))`.
pub fn w_beta(j: f64) -> f64 {
    (2.0 * j - 1.0).powi(2) * j / (3.0 * (j - 1.0))
}

/// Second-order analogue of the total variance,
/// `W = V - sum_{a,b} <J_a J_b><J_b J_a> / (2j(j-1))`, so that `A_2^R = (W + alpha) / beta`.
pub fn w_quantity(state: &SpinState) -> Result<f64> {
    let spin = state.spin();
    if spin.two_j() <= 2 {
        return Err(Error::InvalidParameter(format!("W needs j > 1 (got j = {spin})")));
    }
    let j = spin.j();
    let ops = build_spin_operators(spin);
    let comps = ops.components();
    let mut correlators = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let ab = state.expectation(&(comps[a] * comps[b]));
            let ba = state.expectation(&(comps[b] * comps[a]));
            correlators += (ab * ba).re;
        }
    }
    Ok(total_variance(state) - correlators / (2.0 * j * (j - 1.0)))
}
