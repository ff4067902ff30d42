//! Figure-data sweeps written as CSV.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::PathBuf;

use anticoherence::catalog;
use anticoherence::measures::{a_measure, MeasureValues};
use anticoherence::{measure_profile, Complex64, MeasureKind, SpinQuantumNumber, SpinState};
use clap::{Args, Subcommand};
use serde::Deserialize;

use crate::docs::{fmt15, fmt_opt};
use crate::error::CliError;
use crate::state::StateArgs;

/// A sweep and where to write it; also the format of `sweep --spec` files.
#[derive(Debug, Clone, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub sweep: SweepKind,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SweepKind {
    /// Spin-1 measures of order 1 against the angle between the two points.
    Spin1Theta(Spin1Theta),
    /// Spin-2 mu-family measures over a grid covering the domain D.
    MuGrid(MuGrid),
    /// Generalized GHZ measures against epsilon.
    GhzEpsilon(GhzEpsilon),
    /// All measures of one state against the order t.
    ProfileT(ProfileT),
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Spin1Theta {
    #[arg(long, default_value_t = 181)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = PI)]
    pub stop: f64,
}

impl Default for Spin1Theta {
    fn default() -> Self {
        Self { points: 181, start: 0.0, stop: PI }
    }
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MuGrid {
    /// Grid points along each axis of the bounding box of D.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
}

impl Default for MuGrid {
    fn default() -> Self {
        Self { points: 101, t: 2 }
    }
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GhzEpsilon {
    /// Spin quantum numbers, comma separated (e.g. 1,5/2,1000).
    #[arg(long = "j", value_delimiter = ',', default_value = "1000")]
    pub j: Vec<String>,
    #[arg(long = "t", value_delimiter = ',', default_value = "1")]
    pub t: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "purity", value_parser = crate::parse_kind)]
    pub kinds: Vec<MeasureKind>,
    #[arg(long, default_value_t = 91)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub stop: f64,
}

impl Default for GhzEpsilon {
    fn default() -> Self {
        Self {
            j: vec!["1000".into()],
            t: vec![1],
            kinds: vec![MeasureKind::Purity],
            points: 91,
            start: 0.0,
            stop: FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default)]
pub struct ProfileT {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
}

fn grid(points: usize, start: f64, stop: f64, lo: f64, hi: f64) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Input("a sweep grid needs at least 2 points".into()));
    }
    let slack = 1e-12;
    if !(start < stop) || start < lo - slack || stop > hi + slack {
        return Err(CliError::Input(format!("grid [{start}, {stop}] must be increasing within [{lo}, {hi}]")));
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { stop } else { start + step * i as f64 }).collect())
}

fn header(out: &mut csv::Writer<Box<dyn Write>>, columns: &[&str]) -> Result<(), CliError> {
    out.write_record(columns)?;
    Ok(())
}

const SPECTRAL_COLUMNS: [&str; 4] = ["purity", "hs", "trace", "bures"];

fn spectral_fields(v: &MeasureValues) -> [String; 4] {
    [fmt15(v.purity), fmt15(v.hilbert_schmidt), fmt15(v.trace), fmt15(v.bures)]
}

pub fn run(spec: &SweepKind, out: Box<dyn Write>) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(out);
    match spec {
        SweepKind::Spin1Theta(s) => {
            let thetas = grid(s.points, s.start, s.stop, 0.0, PI)?;
            header(&mut out, &["theta", "variance", "purity", "hs", "trace", "bures"])?;
            for theta in thetas {
                let v = MeasureValues::compute(&catalog::spin1(theta)?, 1)?;
                let mut row = vec![fmt15(theta), fmt_opt(v.variance)];
                row.extend(spectral_fields(&v));
                out.write_record(&row)?;
            }
        }
        SweepKind::MuGrid(s) => {
            let scale = (2.0f64 / 3.0).sqrt();
            let res = grid(s.points, 0.0, 3.0 * scale, 0.0, 3.0 * scale)?;
            let ims = grid(s.points, 0.0, 2.0 * scale, 0.0, 2.0 * scale)?;
            SpinQuantumNumber::new(4)?.check_order(s.t)?;
            let mut columns = vec!["mu_re", "mu_im"];
            columns.extend(SPECTRAL_COLUMNS);
            header(&mut out, &columns)?;
            for &im in &ims {
                for &re in &res {
                    let mu = Complex64::new(re, im);
                    if !catalog::mu_in_domain(mu) {
                        continue;
                    }
                    let v = MeasureValues::compute(&catalog::mu_state(mu)?, s.t)?;
                    let mut row = vec![fmt15(re), fmt15(im)];
                    row.extend(spectral_fields(&v));
                    out.write_record(&row)?;
                }
            }
        }
        SweepKind::GhzEpsilon(s) => {
            let eps = grid(s.points, s.start, s.stop, 0.0, FRAC_PI_2)?;
            let spins = s
                .j
                .iter()
                .map(|j| j.parse::<SpinQuantumNumber>())
                .collect::<Result<Vec<_>, _>>()?;
            if spins.is_empty() || s.t.is_empty() || s.kinds.is_empty() {
                return Err(CliError::Input("ghz sweep needs at least one j, t and kind".into()));
            }
            for &spin in &spins {
                for &t in &s.t {
                    spin.check_order(t)?;
                }
                for kind in &s.kinds {
                    for &t in &s.t {
                        if !kind.is_valid_at(t) {
                            return Err(CliError::Input(format!("{kind} is only defined at t = 1")));
                        }
                    }
                }
            }
            let mut columns = vec!["two_j", "t", "epsilon"];
            columns.extend(s.kinds.iter().map(|k| k.name()));
            header(&mut out, &columns)?;
            for &spin in &spins {
                for &t in &s.t {
                    for &e in &eps {
                        let state = catalog::ghz(spin, e)?;
                        let mut row = vec![spin.two_j().to_string(), t.to_string(), fmt15(e)];
                        for &kind in &s.kinds {
                            row.push(fmt15(a_measure(&state, t, kind)?));
                        }
                        out.write_record(&row)?;
                    }
                }
            }
        }
        SweepKind::ProfileT(s) => {
            write_profile(&mut out, &s.state.load()?)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row per order `t` with every measure.
pub fn write_profile(out: &mut csv::Writer<Box<dyn Write>>, state: &SpinState) -> Result<(), CliError> {
    let profile = measure_profile(state)?;
    let mut columns = vec!["t", "variance"];
    columns.extend(SPECTRAL_COLUMNS);
    header(out, &columns)?;
    for v in &profile.rows {
        let mut row = vec![v.t.to_string(), fmt_opt(v.variance)];
        row.extend(spectral_fields(v));
        out.write_record(&row)?;
    }
    Ok(())
}
