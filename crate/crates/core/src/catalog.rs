//! Named states with known anticoherence properties.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::ln_binomial;
use crate::majorana::{points_to_state, BlochPoint, PointConfiguration};
use crate::measures::{a_measure, MeasureKind};
use crate::spin::{SpinQuantumNumber, SpinState};
use crate::thomson::{solve_thomson, ThomsonConfig};
use crate::{Error, Result};

/// Largest `2j` accepted by [`coulomb_state`].
pub const COULOMB_MAX_TWO_J: u32 = 100;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// State with the given `(2m, amplitude)` components, normalized.
fn sparse(two_j: u32, entries: &[(i64, Complex64)]) -> Result<SpinState> {
    let spin = SpinQuantumNumber::new(two_j)?;
    let mut c = vec![Complex64::new(0.0, 0.0); spin.dim()];
    for &(two_m, value) in entries {
        c[spin.index_of_two_m(two_m)?] += value;
    }
    normalized(spin, c)
}

fn normalized(spin: SpinQuantumNumber, mut c: Vec<Complex64>) -> Result<SpinState> {
    let norm = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    c.iter_mut().for_each(|v| *v /= norm);
    SpinState::new(spin, c)
}

/// Accepts `value` within `[lo, hi]` up to rounding, returning it clamped.
fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    let slack = 1e-12 * hi.abs().max(1.0);
    if value.is_finite() && (lo - slack..=hi + slack).contains(&value) {
        Ok(value.clamp(lo, hi))
    } else {
        Err(Error::InvalidParameter(format!("{name} = {value} outside [{lo}, {hi}]")))
    }
}

/// `(|j,-j> + |j,j>) / sqrt(2)`.
pub fn cat(spin: SpinQuantumNumber) -> Result<SpinState> {
    let t = i64::from(spin.two_j());
    sparse(spin.two_j(), &[(-t, re(1.0)), (t, re(1.0))])
}

/// Basis state `|j, m>`, with `m = two_m / 2`.
pub fn dicke(spin: SpinQuantumNumber, two_m: i64) -> Result<SpinState> {
    SpinState::basis(spin, two_m)
}

/// `(|2,-2> + i sqrt(2) |2,0> + |2,2>) / 2`.
pub fn tetrahedron() -> Result<SpinState> {
    sparse(4, &[(-4, re(1.0)), (0, Complex64::new(0.0, 2f64.sqrt())), (4, re(1.0))])
}

/// `(|2,-2> + mu |2,0> + |2,2>) / sqrt(2 + |mu|^2)`.
pub fn mu_state(mu: Complex64) -> Result<SpinState> {
    if !mu.is_finite() {
        return Err(Error::InvalidParameter("mu must be finite".into()));
    }
    sparse(4, &[(-4, re(1.0)), (0, mu), (4, re(1.0))])
}

/// Whether `mu` lies in the domain of rotation-inequivalent `mu_state`s.
pub fn mu_in_domain(mu: Complex64) -> bool {
    let s = (2.0f64 / 3.0).sqrt();
    let basic = mu.re >= 0.0 && mu.im >= 0.0 && (mu - s).norm() <= 2.0 * s;
    basic && (mu.im != 0.0 || mu.re <= s)
}

/// Closed-form eigenvalues of the two-qubit reduction of `mu_state(mu)`.
pub fn mu_spectrum(mu: Complex64) -> [f64; 3] {
    let a2 = mu.norm_sqr();
    let d = 2.0 + a2;
    let cross = 2.0 * 6f64.sqrt() * mu.re.abs();
    [
        2.0 * a2 / (3.0 * d),
        (6.0 + a2 - cross) / (6.0 * d),
        (6.0 + a2 + cross) / (6.0 * d),
    ]
}

/// Spin-1 state whose two Majorana points subtend the angle `theta`.
///
/// Written as `-cos^2(theta/4) |1,-1> + sin^2(theta/4) |1,1>`, which stays
/// finite at `theta = 0`.
pub fn spin1(theta: f64) -> Result<SpinState> {
    let theta = check_range("theta", theta, 0.0, PI)?;
    let (s, c) = (0.25 * theta).sin_cos();
    sparse(2, &[(-2, re(-c * c)), (2, re(s * s))])
}

/// Spin-1 measure values in closed form: `(purity, hs, trace, bures)` at `t = 1`.
pub fn spin1_closed_forms(theta: f64) -> (f64, f64, f64, f64) {
    let purity = 4.0 * (0.5 * theta).sin().powi(4) / (theta.cos() + 3.0).powi(2);
    // 2 / (1 + cot^4(theta/4)) = 2 sin^4 / (sin^4 + cos^4)
    let (s, c) = (0.25 * theta).sin_cos();
    let hs = 2.0 * s.powi(4) / (s.powi(4) + c.powi(4));
    let sqrt2 = 2f64.sqrt();
    // sqrt(2) + 2 - (2 sqrt(2) + 2) / u with u = sqrt(cos(theta) + 3), rearranged
    // so it does not cancel at theta = pi.
    let u = (theta.cos() + 3.0).sqrt();
    let inner = (sqrt2 + 2.0) * 2.0 * (0.5 * theta).cos().powi(2) / (u * (u + sqrt2));
    let bures = 1.0 - inner.sqrt();
    (purity, hs, hs, bures)
}

/// Spin-5/2 state whose Hilbert-Schmidt and trace measures grow from `t = 1` to `t = 2`.
pub fn psi52_counterexample() -> Result<SpinState> {
    sparse(5, &[(-5, re(1.0)), (-3, re(1.0)), (3, re(1.0)), (5, re(1.0))])
}

/// The spin-5/2 state with the largest purity-based measure of order 2.
pub fn qq52() -> Result<SpinState> {
    sparse(5, &[(-5, re(-5f64.sqrt())), (-1, re(2f64.sqrt())), (3, re(3.0))])
}

/// `(|3,-2> + |3,2>) / sqrt(2)`, Majorana points on an octahedron.
pub fn octahedron() -> Result<SpinState> {
    sparse(6, &[(-4, re(1.0)), (4, re(1.0))])
}

/// `(sqrt(7) |6,-5> + sqrt(11) e^{i theta} |6,0> + sqrt(7) |6,5>) / 5`.
///
/// Icosahedral at `theta = pi/2`.
pub fn icosa(theta: f64) -> Result<SpinState> {
    let theta = check_range("theta", theta, 0.0, FRAC_PI_2)?;
    sparse(
        12,
        &[(-10, re(7f64.sqrt())), (0, Complex64::from_polar(11f64.sqrt(), theta)), (10, re(7f64.sqrt()))],
    )
}

/// First-order anticoherent state with the most degenerate Majorana point.
///
/// `|j,0>` for integer `j`; `(sqrt(2j) |j,-1/2> + |j,j>) / sqrt(2j+1)` otherwise.
pub fn t1_max_degenerate(spin: SpinQuantumNumber) -> Result<SpinState> {
    if spin.two_j() < 2 {
        return Err(Error::InvalidParameter("needs j >= 1".into()));
    }
    if spin.is_integer() {
        return SpinState::basis(spin, 0);
    }
    let t = i64::from(spin.two_j());
    sparse(spin.two_j(), &[(-1, re(f64::from(spin.two_j()).sqrt())), (t, re(1.0))])
}

/// Second-order anticoherent state at `2j = 1 + 3g` with a `g`-fold Majorana point.
pub fn t2_family(g: u32) -> Result<SpinState> {
    if g == 0 || g > 10_000 {
        return Err(Error::InvalidParameter(format!("g = {g} outside [1, 10000]")));
    }
    let two_j = 1 + 3 * g;
    let j = f64::from(two_j) / 2.0;
    let two_m = -(1 + i64::from(g));
    let low = (3.0 * j / (4.0 * j + 1.0)).sqrt();
    let high = ((j + 1.0) / (4.0 * j + 1.0)).sqrt();
    sparse(two_j, &[(two_m, re(low)), (i64::from(two_j), re(high))])
}

/// Symmetric state `|down>^{2j} + |eps>^{2j}` with `|eps> = cos(eps)|down> + sin(eps)|up>`.
///
/// Coefficients are assembled in log space, so `j` in the thousands is fine.
pub fn ghz(spin: SpinQuantumNumber, epsilon: f64) -> Result<SpinState> {
    let epsilon = check_range("epsilon", epsilon, 0.0, FRAC_PI_2)?;
    let n = spin.n();
    let (s, c) = epsilon.sin_cos();
    let pow = |x: f64, e: usize| -> f64 {
        if e == 0 {
            0.0
        } else if x <= 0.0 {
            f64::NEG_INFINITY
        } else {
            e as f64 * x.ln()
        }
    };
    // index i <-> m = i - j: j - m = n - i, j + m = i
    let mut coefficients: Vec<Complex64> = (0..=n)
        .map(|i| {
            let ln = 0.5 * ln_binomial(n, i).expect("i <= n") + pow(c, n - i) + pow(s, i);
            re(ln.exp())
        })
        .collect();
    coefficients[0] += 1.0;
    normalized(spin, coefficients)
}

const APPENDIX_A1: [&str; 12] = [
    "0",
    "0",
    "0.6189711605133+0.3210948626046i",
    "0.0035795645781-0.005571932846i",
    "0.0000596970141+0.0009612745249i",
    "0.0747280614210+0.0848752159787i",
    "-0.098250832667+0.0704276863999i",
    "-0.004358698832-0.006121053115i",
    "0.0169591633687+0.0449205206870i",
    "0.6727762527486-0.173404352179i",
    "0.0053207161522+0.0351899547234i",
    "-0.001014420524-0.000272398051i",
];

const APPENDIX_A2: [&str; 17] = [
    "0",
    "0",
    "0",
    "0.6207434617909+0.3092681061476i",
    "-0.004351945720-0.004576402817i",
    "0.0012063346305-0.004493986067i",
    "-0.018457273316+0.0463722998675i",
    "0.0655377989379+0.0201067990800i",
    "0.0686716910441-0.011023764770i",
    "0.0455872510982+0.1357843214759i",
    "-0.033716686148+0.0740640065423i",
    "-0.065020180326+0.0699845281978i",
    "-0.142220507502+0.0527191543731i",
    "0.6344068714556+0.1721745869811i",
    "0.0530094546887+0.0724148358782i",
    "0.0113869490780+0.0848466671314i",
    "0.0127861473227+0.0031452746268i",
];

const APPENDIX_A3: [&str; 17] = [
    "0",
    "0",
    "0.3232497765551+0.4980926832112i",
    "-0.002755440315+0.0002941675004i",
    "0.0096608735602-0.019233596605i",
    "0.0353301997743+0.0318247115315i",
    "0.0938165016555-0.001235092383i",
    "-0.003767421017-0.082840446425i",
    "0.0895251593971-0.005880000805i",
    "0.0127309067916-0.038624872627i",
    "0.2264247580540+0.6299063613884i",
    "0.0268965215414+0.0274972703211i",
    "0.0799844343901-0.093411408577i",
    "0.0206511586120+0.0431241880491i",
    "0.0456490431434-0.141531955144i",
    "0.0053521006629-0.007262562142i",
    "0.3557695532332+0.0599218154303i",
];

/// Tabulated numerically found anticoherent states with a degenerate Majorana point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AppendixState {
    /// `j = 11/2`, order 3, twofold point.
    A1,
    /// `j = 8`, order 3, threefold point.
    A2,
    /// `j = 8`, order 4, twofold point.
    A3,
}

impl AppendixState {
    pub const ALL: [AppendixState; 3] = [AppendixState::A1, AppendixState::A2, AppendixState::A3];

    pub fn order(self) -> usize {
        match self {
            AppendixState::A1 | AppendixState::A2 => 3,
            AppendixState::A3 => 4,
        }
    }

    pub fn degeneracy(self) -> usize {
        match self {
            AppendixState::A1 | AppendixState::A3 => 2,
            AppendixState::A2 => 3,
        }
    }

    fn literals(self) -> &'static [&'static str] {
        match self {
            AppendixState::A1 => &APPENDIX_A1,
            AppendixState::A2 => &APPENDIX_A2,
            AppendixState::A3 => &APPENDIX_A3,
        }
    }
}

impl std::str::FromStr for AppendixState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(AppendixState::A1),
            "A2" => Ok(AppendixState::A2),
            "A3" => Ok(AppendixState::A3),
            _ => Err(Error::UnknownState(s.to_string())),
        }
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (spaces ignored, `i` or `j` as unit).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::ParseComplex(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().map(re).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (real, imag) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let imag = match imag {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let real: f64 = real.parse().map_err(|_| bad())?;
    let imag: f64 = imag.parse().map_err(|_| bad())?;
    Ok(Complex64::new(real, imag))
}

pub fn appendix_state(id: AppendixState) -> Result<SpinState> {
    let c = id.literals().iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?;
    let spin = SpinQuantumNumber::new(c.len() as u32 - 1)?;
    normalized(spin, c)
}

/// State whose Majorana points are a Coulomb-energy minimum of `2j` charges.
pub fn coulomb_state(spin: SpinQuantumNumber, seed: u64) -> Result<SpinState> {
    coulomb_state_with(spin, &ThomsonConfig { seed, ..ThomsonConfig::default() })
}

pub fn coulomb_state_with(spin: SpinQuantumNumber, config: &ThomsonConfig) -> Result<SpinState> {
    if spin.two_j() < 2 {
        return Err(Error::InvalidParameter("Coulomb states need 2j >= 2".into()));
    }
    if spin.two_j() > COULOMB_MAX_TWO_J {
        return Err(Error::TooLarge { two_j: spin.two_j(), limit: COULOMB_MAX_TWO_J });
    }
    let result = solve_thomson(spin.n(), config)?;
    let points = result.directions().into_iter().map(BlochPoint::from_direction).collect();
    points_to_state(&PointConfiguration::new(spin, points)?)
}

/// One checked property of a named state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedProperty {
    pub t: usize,
    pub kind: MeasureKind,
    pub value: f64,
    pub tolerance: f64,
    pub source: &'static str,
}

impl ExpectedProperty {
    fn new(t: usize, kind: MeasureKind, value: f64, tolerance: f64, source: &'static str) -> Self {
        Self { t, kind, value, tolerance, source }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedState {
    pub name: String,
    pub parameters: Vec<(String, String)>,
    #[serde(skip)]
    pub state: SpinState,
    pub expected: Vec<ExpectedProperty>,
}

/// Deviation of a measured property from its expected value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: ExpectedProperty,
    pub measured: f64,
    pub passed: bool,
}

impl NamedState {
    pub fn check(&self) -> Result<Vec<PropertyCheck>> {
        self.expected
            .iter()
            .map(|p| {
                let measured = a_measure(&self.state, p.t, p.kind)?;
                Ok(PropertyCheck {
                    property: p.clone(),
                    measured,
                    passed: (measured - p.value).abs() <= p.tolerance,
                })
            })
            .collect()
    }
}

/// Parameters for catalog lookups; each constructor reads the ones it needs.
#[derive(Debug, Clone, Default)]
pub struct CatalogParams {
    pub spin: Option<SpinQuantumNumber>,
    pub two_m: Option<i64>,
    pub theta: Option<f64>,
    pub mu: Option<Complex64>,
    pub epsilon: Option<f64>,
    pub g: Option<u32>,
    pub seed: Option<u64>,
}

/// Catalog name with a short description of its parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub description: &'static str,
}

pub const CATALOG: [CatalogEntry; 16] = [
    CatalogEntry { name: "cat", parameters: "j", description: "(|j,-j> + |j,j>)/sqrt(2), 1-anticoherent" },
    CatalogEntry { name: "dicke", parameters: "j, m", description: "basis state |j,m>" },
    CatalogEntry { name: "tetrahedron", parameters: "", description: "spin-2 tetrahedral state, 2-anticoherent" },
    CatalogEntry { name: "mu", parameters: "mu", description: "spin-2 family (|2,-2> + mu|2,0> + |2,2>), 1-anticoherent" },
    CatalogEntry { name: "spin1", parameters: "theta", description: "spin-1 state with Majorana points at angle theta" },
    CatalogEntry { name: "psi52", parameters: "", description: "spin-5/2 state with HS and trace measures rising from t=1 to t=2" },
    CatalogEntry { name: "qq52", parameters: "", description: "most 2-anticoherent spin-5/2 state, A_2^R = 99/100" },
    CatalogEntry { name: "octahedron", parameters: "", description: "spin-3 octahedral state, 3-anticoherent" },
    CatalogEntry { name: "icosa", parameters: "theta", description: "spin-6 family, 4-anticoherent; 5-anticoherent at theta = pi/2" },
    CatalogEntry { name: "t1-max-degenerate", parameters: "j", description: "1-anticoherent state with maximal point degeneracy" },
    CatalogEntry { name: "t2-family", parameters: "g", description: "2-anticoherent state at 2j = 1+3g with a g-fold point" },
    CatalogEntry { name: "ghz", parameters: "j, epsilon", description: "generalized GHZ state, separable at 0, cat at pi/2" },
    CatalogEntry { name: "appendix-a1", parameters: "", description: "j = 11/2, 3-anticoherent, twofold point" },
    CatalogEntry { name: "appendix-a2", parameters: "", description: "j = 8, 3-anticoherent, threefold point" },
    CatalogEntry { name: "appendix-a3", parameters: "", description: "j = 8, 4-anticoherent, twofold point" },
    CatalogEntry { name: "coulomb", parameters: "j, seed", description: "Majorana points at a Coulomb-energy minimum" },
];

fn need<T: Copy>(value: Option<T>, name: &str, param: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("state '{name}' needs parameter {param}")))
}

fn all_spectral(t: usize, value: f64, tol: f64, source: &'static str) -> Vec<ExpectedProperty> {
    MeasureKind::SPECTRAL.iter().map(|&k| ExpectedProperty::new(t, k, value, tol, source)).collect()
}

/// Builds a catalog state by name together with its expected properties.
pub fn named_state(name: &str, params: &CatalogParams) -> Result<NamedState> {
    use MeasureKind::*;
    let mut parameters = Vec::new();
    let mut expected = Vec::new();
    let state = match name {
        "cat" => {
            let spin = need(params.spin, name, "j")?;
            parameters.push(("j".into(), spin.to_string()));
            if spin.two_j() >= 2 {
                expected.extend(all_spectral(1, 1.0, 1e-12, "zero mean spin, isotropic second moments"));
            }
            if spin.two_j() == 3 {
                expected.push(ExpectedProperty::new(2, Purity, 0.75, 1e-12, "closed form"));
                expected.push(ExpectedProperty::new(2, HilbertSchmidt, 0.5, 1e-12, "closed form"));
                expected.push(ExpectedProperty::new(2, Trace, 0.5, 1e-12, "closed form"));
                let b = (1.0 + 2f64.sqrt() - 3f64.sqrt()) / 2.0;
                expected.push(ExpectedProperty::new(2, Bures, b, 1e-12, "closed form"));
            }
            cat(spin)?
        }
        "dicke" => {
            let spin = need(params.spin, name, "j")?;
            let two_m = need(params.two_m, name, "m")?;
            parameters.push(("j".into(), spin.to_string()));
            parameters.push(("m".into(), format_half(two_m)));
            let state = dicke(spin, two_m)?;
            if spin.two_j() >= 2 {
                let j = spin.j();
                let m = two_m as f64 / 2.0;
                let value = 1.0 - m * m / (j * j);
                expected.push(ExpectedProperty::new(1, Purity, value, 1e-12, "1 - m^2/j^2"));
                expected.push(ExpectedProperty::new(1, Variance, value, 1e-12, "(V - j)/j^2"));
            }
            state
        }
        "tetrahedron" => {
            expected.extend(all_spectral(2, 1.0, 1e-12, "tetrahedral symmetry"));
            tetrahedron()?
        }
        "mu" => {
            let mu = need(params.mu, name, "mu")?;
            parameters.push(("mu".into(), format!("{}{:+}i", mu.re, mu.im)));
            expected.push(ExpectedProperty::new(1, Purity, 1.0, 1e-12, "1-anticoherent family"));
            let lam = mu_spectrum(mu);
            for kind in [Purity, HilbertSchmidt, Trace, Bures] {
                let value = crate::measures::measure_from_spectrum(&lam, kind)?;
                expected.push(ExpectedProperty::new(2, kind, value, 1e-10, "closed-form spectrum"));
            }
            let third = [
                (HilbertSchmidt, 1.0 - 1.0 / 3f64.sqrt()),
                (Trace, 1.0 / 3.0),
                (Bures, 1.0 - (2.0 - 2f64.sqrt()).sqrt()),
            ];
            for (kind, value) in third {
                expected.push(ExpectedProperty::new(3, kind, value, 1e-10, "independent of mu"));
            }
            mu_state(mu)?
        }
        "spin1" => {
            let theta = need(params.theta, name, "theta")?;
            parameters.push(("theta".into(), theta.to_string()));
            let (r, hs, tr, b) = spin1_closed_forms(theta);
            expected.push(ExpectedProperty::new(1, Purity, r, 1e-10, "closed form"));
            expected.push(ExpectedProperty::new(1, HilbertSchmidt, hs, 1e-10, "closed form"));
            expected.push(ExpectedProperty::new(1, Trace, tr, 1e-10, "closed form"));
            expected.push(ExpectedProperty::new(1, Bures, b, 1e-10, "closed form"));
            spin1(theta)?
        }
        "psi52" => {
            let src = "brute-force partial trace";
            expected.push(ExpectedProperty::new(1, Purity, 0.8, 1e-12, src));
            expected.push(ExpectedProperty::new(1, HilbertSchmidt, 1.0 - 1.0 / 5f64.sqrt(), 1e-12, src));
            expected.push(ExpectedProperty::new(1, Trace, 1.0 - 1.0 / 5f64.sqrt(), 1e-12, src));
            expected.push(ExpectedProperty::new(1, Bures, 0.697_785_402_459_673, 1e-12, src));
            expected.push(ExpectedProperty::new(2, Purity, 0.81, 1e-12, src));
            expected.push(ExpectedProperty::new(2, HilbertSchmidt, 1.0 - 0.19f64.sqrt(), 1e-12, src));
            expected.push(ExpectedProperty::new(2, Trace, 0.582_576_538_582_523, 1e-12, src));
            expected.push(ExpectedProperty::new(2, Bures, 0.583_879_590_823_406, 1e-12, src));
            psi52_counterexample()?
        }
        "qq52" => {
            expected.push(ExpectedProperty::new(2, Purity, 0.99, 1e-12, "closed form"));
            expected.push(ExpectedProperty::new(2, HilbertSchmidt, 0.9, 1e-12, "1 - sqrt(1 - A^R)"));
            let inner = (15.0 - 3.0 * 10f64.sqrt() - 30f64.sqrt()) / (15.0 - 5.0 * 3f64.sqrt());
            expected.push(ExpectedProperty::new(2, Bures, 1.0 - inner.sqrt(), 1e-12, "closed form"));
            qq52()?
        }
        "octahedron" => {
            expected.extend(all_spectral(3, 1.0, 1e-12, "octahedral symmetry"));
            octahedron()?
        }
        "icosa" => {
            let theta = need(params.theta, name, "theta")?;
            parameters.push(("theta".into(), theta.to_string()));
            expected.extend(all_spectral(4, 1.0, 1e-10, "4-anticoherent family"));
            if (theta - FRAC_PI_2).abs() < 1e-15 {
                expected.extend(all_spectral(5, 1.0, 1e-10, "icosahedral symmetry"));
            }
            icosa(theta)?
        }
        "t1-max-degenerate" => {
            let spin = need(params.spin, name, "j")?;
            parameters.push(("j".into(), spin.to_string()));
            expected.extend(all_spectral(1, 1.0, 1e-12, "1-anticoherent"));
            t1_max_degenerate(spin)?
        }
        "t2-family" => {
            let g = need(params.g, name, "g")?;
            parameters.push(("g".into(), g.to_string()));
            expected.extend(all_spectral(2, 1.0, 1e-10, "2-anticoherent"));
            t2_family(g)?
        }
        "ghz" => {
            let spin = need(params.spin, name, "j")?;
            let eps = need(params.epsilon, name, "epsilon")?;
            parameters.push(("j".into(), spin.to_string()));
            parameters.push(("epsilon".into(), eps.to_string()));
            if eps == 0.0 {
                expected.extend(all_spectral(1, 0.0, 1e-12, "separable"));
            } else if eps == FRAC_PI_2 && spin.two_j() >= 2 {
                expected.extend(all_spectral(1, 1.0, 1e-12, "cat state"));
            }
            ghz(spin, eps)?
        }
        "appendix-a1" | "appendix-a2" | "appendix-a3" => {
            let id: AppendixState = name.trim_start_matches("appendix-").parse()?;
            expected.push(ExpectedProperty::new(id.order(), Purity, 1.0, 1e-9, "tabulated numerical solution"));
            appendix_state(id)?
        }
        "coulomb" => {
            let spin = need(params.spin, name, "j")?;
            let seed = params.seed.unwrap_or(0);
            parameters.push(("j".into(), spin.to_string()));
            parameters.push(("seed".into(), seed.to_string()));
            if spin.two_j() == 4 {
                expected.extend(all_spectral(2, 1.0, 1e-8, "tetrahedron"));
            }
            coulomb_state(spin, seed)?
        }
        _ => return Err(Error::UnknownState(name.to_string())),
    };
    Ok(NamedState { name: name.to_string(), parameters, state, expected })
}

fn format_half(two_m: i64) -> String {
    if two_m % 2 == 0 {
        (two_m / 2).to_string()
    } else {
        format!("{two_m}/2")
    }
}
