//! Spin-j states, spin operators, rotations and spin moments.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{unitary_exp, CMatrix};
use crate::{Error, Result};

/// Tolerance on the squared norm under which an input is taken as already normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinQuantumNumber {
    two_j: u32,
}

impl SpinQuantumNumber {
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin(two_j));
        }
        Ok(Self { two_j })
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    /// Number of qubits in the Majorana picture, `N = 2j`.
    pub fn n(self) -> usize {
        self.two_j as usize
    }

    pub fn j(self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.two_j % 2 == 0
    }

    /// `m` of the basis vector stored at `index` (ascending order).
    pub fn m_of_index(self, index: usize) -> f64 {
        index as f64 - self.j()
    }

    /// Storage index of the basis vector with magnetic number `two_m / 2`.
    pub fn index_of_two_m(self, two_m: i64) -> Result<usize> {
        let two_j = i64::from(self.two_j);
        if two_m.abs() > two_j || (two_m + two_j) % 2 != 0 {
            return Err(Error::IndexOutOfRange(format!(
                "2m = {two_m} is not a valid projection for 2j = {two_j}"
            )));
        }
        Ok(((two_m + two_j) / 2) as usize)
    }

    /// Checks `1 <= t < 2j`.
    pub fn check_order(self, t: usize) -> Result<()> {
        if t == 0 || t >= self.n() {
            Err(Error::OrderOutOfRange { t, two_j: self.two_j })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for SpinQuantumNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Parses `"2"`, `"5/2"` or `"2.5"`.
impl FromStr for SpinQuantumNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParseSpin(s.to_string());
        let two_j = if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => num.checked_mul(2).ok_or_else(bad)?,
                "2" => num,
                _ => return Err(bad()),
            }
        } else if let Ok(int) = s.parse::<u32>() {
            int.checked_mul(2).ok_or_else(bad)?
        } else {
            let value: f64 = s.parse().map_err(|_| bad())?;
            let doubled = 2.0 * value;
            if !(doubled >= 0.0) || (doubled - doubled.round()).abs() > 1e-9 {
                return Err(bad());
            }
            doubled.round() as u32
        };
        Self::new(two_j)
    }
}

/// Normalized pure spin-j state with coefficients `c_m` in ascending `m` order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    spin: SpinQuantumNumber,
    coefficients: Vec<Complex64>,
}

impl SpinState {
    /// Builds a state, renormalizing when the norm is off by more than [`NORM_TOLERANCE`].
    pub fn new(spin: SpinQuantumNumber, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: coefficients.len(),
            });
        }
        let norm_sqr: f64 = coefficients.iter().map(Complex64::norm_sqr).sum();
        if !norm_sqr.is_finite() {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        if norm_sqr == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut coefficients = coefficients;
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            let scale = 1.0 / norm_sqr.sqrt();
            coefficients.iter_mut().for_each(|c| *c *= scale);
        }
        Ok(Self { spin, coefficients })
    }

    pub fn from_two_j(two_j: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        Self::new(SpinQuantumNumber::new(two_j)?, coefficients)
    }

    /// Dicke state `|j, m>` with `m = two_m / 2`.
    pub fn basis(spin: SpinQuantumNumber, two_m: i64) -> Result<Self> {
        let index = spin.index_of_two_m(two_m)?;
        let mut coefficients = vec![Complex64::new(0.0, 0.0); spin.dim()];
        coefficients[index] = Complex64::new(1.0, 0.0);
        Self::new(spin, coefficients)
    }

    /// State with independent standard complex Gaussian coefficients, normalized.
    pub fn random<R: Rng + ?Sized>(spin: SpinQuantumNumber, rng: &mut R) -> Self {
        loop {
            let coefficients = (0..spin.dim())
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(state) = Self::new(spin, coefficients) {
                return state;
            }
        }
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        self.spin
    }

    pub fn j(&self) -> f64 {
        self.spin.j()
    }

    pub fn two_j(&self) -> u32 {
        self.spin.two_j()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    /// `c_m` for `m = two_m / 2`.
    pub fn coefficient(&self, two_m: i64) -> Result<Complex64> {
        Ok(self.coefficients[self.spin.index_of_two_m(two_m)?])
    }

    pub fn as_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.coefficients)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|`; equals 1 exactly when the states agree up to a global phase.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        if self.spin != other.spin {
            return 0.0;
        }
        self.inner(other).norm()
    }

    /// Applies a matrix acting on the `(2j+1)`-dimensional space.
    pub fn apply(&self, op: &CMatrix) -> Result<SpinState> {
        let v = op * self.as_vector();
        SpinState::new(self.spin, v.iter().copied().collect())
    }

    /// Multiplies by `exp(i phase)`.
    pub fn with_phase(&self, phase: f64) -> SpinState {
        let factor = Complex64::from_polar(1.0, phase);
        SpinState {
            spin: self.spin,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// `<psi| op |psi>`.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        let v = self.as_vector();
        (v.adjoint() * op * &v)[(0, 0)]
    }
}

/// Unit vector in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 3]);

impl Direction {
    pub const X: Direction = Direction([1.0, 0.0, 0.0]);
    pub const Y: Direction = Direction([0.0, 1.0, 0.0]);
    pub const Z: Direction = Direction([0.0, 0.0, 1.0]);

    /// Normalizes `(x, y, z)`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroDirection);
        }
        Ok(Self([x / norm, y / norm, z / norm]))
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    /// Uniform on the sphere via a normalized Gaussian triple.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Ok(d) = Self::new(v[0], v[1], v[2]) {
                return d;
            }
        }
    }

    pub fn components(self) -> [f64; 3] {
        self.0
    }

    pub fn dot(self, other: Direction) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }
}

/// `n` pseudo-random directions drawn from a seeded stream.
pub fn random_directions(n: usize, seed: u64) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Direction::random(&mut rng)).collect()
}

/// `J_x`, `J_y`, `J_z` and the identity in the ascending-`m` basis.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub spin: SpinQuantumNumber,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub j0: CMatrix,
}

impl SpinOperators {
    pub fn new(spin: SpinQuantumNumber) -> Self {
        build_spin_operators(spin)
    }

    /// `J . n`.
    pub fn along(&self, n: Direction) -> CMatrix {
        let [x, y, z] = n.components();
        &self.jx * Complex64::from(x) + &self.jy * Complex64::from(y) + &self.jz * Complex64::from(z)
    }

    pub fn components(&self) -> [&CMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }
}

/// Ladder-operator construction; `J_z` is `diag(-j, ..., j)`.
pub fn build_spin_operators(spin: SpinQuantumNumber) -> SpinOperators {
    let dim = spin.dim();
    let j = spin.j();
    let zero = Complex64::new(0.0, 0.0);
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
    let mut raise = CMatrix::from_element(dim, dim, zero);
    for i in 0..dim - 1 {
        let m = spin.m_of_index(i);
        raise[(i + 1, i)] = Complex64::from((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower) * Complex64::new(0.5, 0.0);
    let jy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::from(spin.m_of_index(r))
        } else {
            zero
        }
    });
    SpinOperators {
        spin,
        jx,
        jy,
        jz,
        j0: CMatrix::identity(dim, dim),
    }
}

/// `exp(-i angle J.n) |psi>`.
pub fn rotate(state: &SpinState, axis: Direction, angle: f64) -> Result<SpinState> {
    let ops = build_spin_operators(state.spin());
    let unitary = unitary_exp(&ops.along(axis), angle)?;
    state.apply(&unitary)
}

/// `<psi| J` as the real vector `(<J_x>, <J_y>, <J_z>)`.
pub fn spin_expectation(state: &SpinState) -> [f64; 3] {
    let ops = build_spin_operators(state.spin());
    ops.components().map(|op| state.expectation(op).re)
}

/// `<(J.n_1)(J.n_2)...(J.n_k)>` for a non-empty direction list.
pub fn product_moment(state: &SpinState, dirs: &[Direction]) -> Result<Complex64> {
    if dirs.is_empty() {
        return Err(Error::EmptyDirections);
    }
    let ops = build_spin_operators(state.spin());
    let mut v = state.as_vector();
    for &n in dirs.iter().rev() {
        v = ops.along(n) * v;
    }
    Ok(state.as_vector().dotc(&v))
}

/// `tr[(J.n_1)...(J.n_k)] / (2j + 1)`, the moment shared by all t-anticoherent states with `k <= t`.
pub fn isotropic_moment(spin: SpinQuantumNumber, dirs: &[Direction]) -> Result<Complex64> {
    if dirs.is_empty() {
        return Err(Error::EmptyDirections);
    }
    let ops = build_spin_operators(spin);
    let mut product = ops.j0.clone();
    for &n in dirs {
        product *= ops.along(n);
    }
    Ok(product.trace() / Complex64::from(spin.dim() as f64))
}

/// Total variance `j(j+1) - |<J>|^2`.
pub fn total_variance(state: &SpinState) -> f64 {
    let j = state.j();
    let mean = spin_expectation(state);
    j * (j + 1.0) - mean.iter().map(|x| x * x).sum::<f64>()
}

/// Direct test of the definition: `<(J.n)^k>` is direction independent for `k = 1..=t`.
///
/// Checks `max - min` of each moment over `n_dirs` seeded random directions against `tol`.
pub fn is_t_anticoherent_by_definition(
    state: &SpinState,
    t: usize,
    n_dirs: usize,
    tol: f64,
    seed: u64,
) -> Result<bool> {
    state.spin().check_order(t)?;
    if n_dirs < 2 {
        return Err(Error::InvalidParameter("need at least two directions".into()));
    }
    let ops = build_spin_operators(state.spin());
    let psi = state.as_vector();
    let mut lo = vec![f64::INFINITY; t];
    let mut hi = vec![f64::NEG_INFINITY; t];
    for n in random_directions(n_dirs, seed) {
        let jn = ops.along(n);
        let mut v = psi.clone();
        for k in 0..t {
            v = &jn * v;
            let moment = psi.dotc(&v).re;
            lo[k] = lo[k].min(moment);
            hi[k] = hi[k].max(moment);
        }
    }
    Ok(lo.iter().zip(&hi).all(|(l, h)| h - l < tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spin(two_j: u32) -> SpinQuantumNumber {
        SpinQuantumNumber::new(two_j).unwrap()
    }

    fn cat(two_j: u32) -> SpinState {
        let mut coefficients = vec![c(0.0, 0.0); two_j as usize + 1];
        coefficients[0] = c(1.0, 0.0);
        coefficients[two_j as usize] = c(1.0, 0.0);
        SpinState::from_two_j(two_j, coefficients).unwrap()
    }

    fn tetrahedron() -> SpinState {
        let s = 2f64.sqrt();
        SpinState::from_two_j(
            4,
            vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, s / 2.0), c(0.0, 0.0), c(0.5, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn parses_spin_literals() {
        assert_eq!("5/2".parse::<SpinQuantumNumber>().unwrap().two_j(), 5);
        assert_eq!("3".parse::<SpinQuantumNumber>().unwrap().two_j(), 6);
        assert_eq!("1.5".parse::<SpinQuantumNumber>().unwrap().two_j(), 3);
        assert!("0".parse::<SpinQuantumNumber>().is_err());
        assert!("1/3".parse::<SpinQuantumNumber>().is_err());
        assert!("0.3".parse::<SpinQuantumNumber>().is_err());
        assert_eq!(spin(5).to_string(), "5/2");
        assert_eq!(spin(4).to_string(), "2");
    }

    #[test]
    fn state_construction_normalizes_and_rejects_zero() {
        let s = SpinState::from_two_j(1, vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((s.coefficients()[0].re - 0.6).abs() < 1e-15);
        assert_eq!(
            SpinState::from_two_j(1, vec![c(0.0, 0.0); 2]),
            Err(Error::ZeroNorm)
        );
        assert!(matches!(
            SpinState::from_two_j(2, vec![c(1.0, 0.0); 2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn spin_half_operators_are_half_paulis() {
        let ops = build_spin_operators(spin(1));
        // basis order (m = -1/2, m = +1/2)
        let sx = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        let sy = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.0, 0.0)]);
        let sz = CMatrix::from_row_slice(2, 2, &[c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(max_abs_diff(&ops.jx, &sx) < 1e-15);
        assert!(max_abs_diff(&ops.jy, &sy) < 1e-15);
        assert!(max_abs_diff(&ops.jz, &sz) < 1e-15);
    }

    #[test]
    fn spin_one_jz_is_diagonal_ascending() {
        let ops = build_spin_operators(spin(2));
        for (i, m) in [-1.0, 0.0, 1.0].iter().enumerate() {
            assert_eq!(ops.jz[(i, i)], c(*m, 0.0));
        }
    }

    #[test]
    fn commutators_and_casimir_hold() {
        let i = c(0.0, 1.0);
        for two_j in 1..=12 {
            let ops = build_spin_operators(spin(two_j));
            let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
            assert!(max_abs_diff(&comm(&ops.jx, &ops.jy), &(&ops.jz * i)) < 1e-12);
            assert!(max_abs_diff(&comm(&ops.jy, &ops.jz), &(&ops.jx * i)) < 1e-12);
            assert!(max_abs_diff(&comm(&ops.jz, &ops.jx), &(&ops.jy * i)) < 1e-12);
            let j = f64::from(two_j) / 2.0;
            let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
            assert!(max_abs_diff(&casimir, &(&ops.j0 * c(j * (j + 1.0), 0.0))) < 1e-12);
        }
        // j = 2: J^2 = 6
        let ops = build_spin_operators(spin(4));
        let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
        assert!(max_abs_diff(&casimir, &(&ops.j0 * c(6.0, 0.0))) < 1e-12);
    }

    #[test]
    fn zero_rotation_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = SpinState::random(spin(5), &mut rng);
        let out = rotate(&psi, Direction::random(&mut rng), 0.0).unwrap();
        assert!((psi.fidelity(&out) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_turn_about_y_flips_highest_weight() {
        for two_j in 1..=8u32 {
            let top = SpinState::basis(spin(two_j), i64::from(two_j)).unwrap();
            let bottom = SpinState::basis(spin(two_j), -i64::from(two_j)).unwrap();
            let out = rotate(&top, Direction::Y, PI).unwrap();
            assert!((out.fidelity(&bottom) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_turn_gives_spinor_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for two_j in 1..=6u32 {
            let psi = SpinState::random(spin(two_j), &mut rng);
            let out = rotate(&psi, Direction::Z, 2.0 * PI).unwrap();
            let overlap = psi.inner(&out);
            let sign = if two_j % 2 == 0 { 1.0 } else { -1.0 };
            assert!((overlap - c(sign, 0.0)).norm() < 1e-12, "2j = {two_j}");
        }
    }

    #[test]
    fn tetrahedron_moments_are_isotropic() {
        let tet = tetrahedron();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n1 = Direction::random(&mut rng);
            let n2 = Direction::random(&mut rng);
            assert!(product_moment(&tet, &[n1]).unwrap().norm() < 1e-12);
            let two = product_moment(&tet, &[n1, n2]).unwrap();
            assert!((two - c(2.0 * n1.dot(n2), 0.0)).norm() < 1e-12);
            let iso = isotropic_moment(spin(4), &[n1, n2]).unwrap();
            assert!((two - iso).norm() < 1e-10);
        }
    }

    #[test]
    fn product_moment_basics() {
        let top = SpinState::basis(spin(6), 6).unwrap();
        assert!((product_moment(&top, &[Direction::Z]).unwrap() - c(3.0, 0.0)).norm() < 1e-14);
        assert_eq!(product_moment(&top, &[]), Err(Error::EmptyDirections));
    }

    #[test]
    fn total_variance_reference_values() {
        for two_j in 1..=10u32 {
            let j = f64::from(two_j) / 2.0;
            let top = SpinState::basis(spin(two_j), i64::from(two_j)).unwrap();
            assert!((total_variance(&top) - j).abs() < 1e-12);
            if two_j >= 2 {
                assert!((total_variance(&cat(two_j)) - j * (j + 1.0)).abs() < 1e-12);
            }
        }
        let d21 = SpinState::basis(spin(4), 2).unwrap();
        assert!((total_variance(&d21) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn definitional_anticoherence() {
        for two_j in 2..=8u32 {
            assert!(is_t_anticoherent_by_definition(&cat(two_j), 1, 50, 1e-9, 7).unwrap());
        }
        assert!(!is_t_anticoherent_by_definition(&cat(4), 2, 50, 1e-9, 7).unwrap());
        assert!(is_t_anticoherent_by_definition(&tetrahedron(), 2, 50, 1e-9, 7).unwrap());
        let top = SpinState::basis(spin(4), 4).unwrap();
        assert!(!is_t_anticoherent_by_definition(&top, 1, 50, 1e-9, 7).unwrap());
        assert!(is_t_anticoherent_by_definition(&top, 4, 50, 1e-9, 7).is_err());
    }
}
