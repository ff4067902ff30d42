//! Majorana (stellar) representation.
//!
//! A spin-j state is the symmetrized product of `2j` spin-1/2 states
//! `|phi_i> = cos(theta_i/2) |up> + sin(theta_i/2) e^{i phi_i} |down>`, each a
//! point on the Bloch sphere. Writing `w_i = tan(theta_i/2) e^{i phi_i}`, the
//! points are the roots of the Majorana polynomial
//!
//! ```text
//! P(w) = prod_i (cos(theta_i/2) w - sin(theta_i/2) e^{i phi_i})
//!      = sum_{m=-j}^{j} (-1)^{j-m} sqrt(C(2j, j+m)) c_m w^{j+m}
//! ```
//!
//! so the power of `w` equals the storage index of `c_m`. Vanishing top
//! coefficients (`c_j, c_{j-1}, ...`) lower the degree and put points at the
//! south pole (`w = infinity`); vanishing bottom coefficients (`c_{-j}, ...`)
//! put points at the north pole (`w = 0`).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::binomial;
use crate::spin::{Direction, SpinQuantumNumber, SpinState};
use crate::{Error, Result};

/// Coefficients with modulus below this are treated as exact zeros when rooting.
pub const ZERO_COEFFICIENT: f64 = 1e-13;

/// Default clustering tolerance for degeneracy detection, in radians.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

const POLE_SNAP: f64 = 1e-14;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Point on the unit sphere as polar angle `theta` in `[0, pi]` and azimuth `phi` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    theta: f64,
    phi: f64,
}

impl BlochPoint {
    pub const NORTH: BlochPoint = BlochPoint { theta: 0.0, phi: 0.0 };
    pub const SOUTH: BlochPoint = BlochPoint { theta: std::f64::consts::PI, phi: 0.0 };

    /// Wraps `phi` into `[0, 2 pi)` and snaps the poles to `phi = 0`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter("non-finite Bloch angle".into()));
        }
        if !(-POLE_SNAP..=std::f64::consts::PI + POLE_SNAP).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta = {theta} outside [0, pi]")));
        }
        Ok(Self::canonical(theta, phi))
    }

    fn canonical(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, std::f64::consts::PI);
        if theta < POLE_SNAP {
            return Self::NORTH;
        }
        if std::f64::consts::PI - theta < POLE_SNAP {
            return Self::SOUTH;
        }
        let mut phi = phi.rem_euclid(TWO_PI);
        if phi >= TWO_PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn from_direction(n: Direction) -> Self {
        let [x, y, z] = n.components();
        let theta = (x * x + y * y).sqrt().atan2(z);
        Self::canonical(theta, y.atan2(x))
    }

    /// Point whose spinor is proportional to `|up> + w |down>`.
    pub fn from_stereographic(w: Complex64) -> Self {
        Self::canonical(2.0 * w.norm().atan(), w.arg())
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn direction(self) -> Direction {
        Direction::from_angles(self.theta, self.phi)
    }

    /// `(cos(theta/2), sin(theta/2) e^{i phi})`, amplitudes of `|up>` and `|down>`.
    pub fn spinor(self) -> (Complex64, Complex64) {
        let half = 0.5 * self.theta;
        (Complex64::from(half.cos()), Complex64::from_polar(half.sin(), self.phi))
    }

    /// Great-circle distance in radians.
    pub fn distance(self, other: BlochPoint) -> f64 {
        let a = self.direction().components();
        let b = other.direction().components();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let sin = cross.iter().map(|x| x * x).sum::<f64>().sqrt();
        let cos: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        sin.atan2(cos)
    }

    /// Rigid rotation by `angle` (right-handed) about `axis`.
    pub fn rotated(self, axis: Direction, angle: f64) -> Self {
        let v = self.direction().components();
        let k = axis.components();
        let (s, c) = angle.sin_cos();
        let dot: f64 = k.iter().zip(v).map(|(a, b)| a * b).sum();
        let cross = [
            k[1] * v[2] - k[2] * v[1],
            k[2] * v[0] - k[0] * v[2],
            k[0] * v[1] - k[1] * v[0],
        ];
        let r: [f64; 3] = std::array::from_fn(|i| v[i] * c + cross[i] * s + k[i] * dot * (1.0 - c));
        match Direction::new(r[0], r[1], r[2]) {
            Ok(d) => Self::from_direction(d),
            Err(_) => self,
        }
    }
}

/// Multiset of exactly `2j` Bloch points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    spin: SpinQuantumNumber,
    points: Vec<BlochPoint>,
}

impl PointConfiguration {
    pub fn new(spin: SpinQuantumNumber, points: Vec<BlochPoint>) -> Result<Self> {
        if points.len() != spin.n() {
            return Err(Error::PointCount { expected: spin.n(), got: points.len() });
        }
        Ok(Self { spin, points })
    }

    /// Configuration of `points.len() / 2` spin, i.e. `2j` = number of points.
    pub fn from_points(points: Vec<BlochPoint>) -> Result<Self> {
        let spin = SpinQuantumNumber::new(points.len() as u32)?;
        Self::new(spin, points)
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        self.spin
    }

    pub fn points(&self) -> &[BlochPoint] {
        &self.points
    }

    pub fn rotated(&self, axis: Direction, angle: f64) -> Self {
        Self {
            spin: self.spin,
            points: self.points.iter().map(|p| p.rotated(axis, angle)).collect(),
        }
    }

    /// Order-insensitive comparison: every point is paired with a distinct
    /// point of `other` closer than `tol`.
    pub fn matches(&self, other: &PointConfiguration, tol: f64) -> bool {
        if self.spin != other.spin {
            return false;
        }
        let mut used = vec![false; other.points.len()];
        for p in &self.points {
            let best = other
                .points
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, q)| (i, p.distance(*q)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, d)) if d < tol => used[i] = true,
                _ => return false,
            }
        }
        true
    }

    /// Clusters of points within `tol` of each other (single linkage), as
    /// `(representative point, multiplicity)`, largest cluster first.
    pub fn clusters(&self, tol: f64) -> Vec<(BlochPoint, usize)> {
        let n = self.points.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.points[a].distance(self.points[b]) < tol {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[rb] = ra;
                    }
                }
            }
        }
        let mut clusters: Vec<(BlochPoint, usize)> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            match roots.iter().position(|&x| x == r) {
                Some(pos) => clusters[pos].1 += 1,
                None => {
                    roots.push(r);
                    clusters.push((self.points[r], 1));
                }
            }
        }
        clusters.sort_by(|a, b| b.1.cmp(&a.1));
        clusters
    }
}

/// Symmetrized product of the spinors of `config`, normalized.
pub fn points_to_state(config: &PointConfiguration) -> Result<SpinState> {
    let n = config.spin().n();
    // prod_i (a_i + b_i x) = sum_k E_k x^k, E_k the amplitude sum over k down spins.
    let mut poly = vec![Complex64::new(0.0, 0.0); n + 1];
    poly[0] = Complex64::new(1.0, 0.0);
    for (deg, p) in config.points().iter().enumerate() {
        let (a, b) = p.spinor();
        for k in (0..=deg + 1).rev() {
            let shifted = if k > 0 { poly[k - 1] * b } else { Complex64::new(0.0, 0.0) };
            poly[k] = poly[k] * a + shifted;
        }
    }
    // |D^(k)> amplitude is E_k / sqrt(C(N,k)); k down spins means m = j - k, index N - k.
    let mut coefficients = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, e) in poly.iter().enumerate() {
        coefficients[n - k] = e / binomial(n, k).sqrt();
    }
    SpinState::new(config.spin(), coefficients)
}

/// Majorana points of a state.
///
/// The polynomial is rooted through the eigenvalues of its companion matrix,
/// each root then gets a Newton polish step.
pub fn state_to_points(state: &SpinState) -> Result<PointConfiguration> {
    let spin = state.spin();
    let n = spin.n();
    let c = state.coefficients();
    if c.iter().all(|v| v.norm() < ZERO_COEFFICIENT) {
        return Err(Error::ZeroNorm);
    }
    let top = (0..=n).rev().find(|&i| c[i].norm() >= ZERO_COEFFICIENT).expect("nonzero state");
    let bottom = (0..=n).find(|&i| c[i].norm() >= ZERO_COEFFICIENT).expect("nonzero state");

    let mut points = Vec::with_capacity(n);
    points.extend(std::iter::repeat(BlochPoint::SOUTH).take(n - top));
    points.extend(std::iter::repeat(BlochPoint::NORTH).take(bottom));

    // Reduced polynomial sum_{i=bottom}^{top} p_i w^(i - bottom).
    let poly: Vec<Complex64> = (bottom..=top)
        .map(|i| {
            let sign = if (n - i) % 2 == 0 { 1.0 } else { -1.0 };
            c[i] * (sign * binomial(n, i).sqrt())
        })
        .collect();
    for w in polynomial_roots(&poly)? {
        points.push(BlochPoint::from_stereographic(w));
    }
    PointConfiguration::new(spin, points)
}

/// Roots of `sum_i poly[i] x^i` with nonzero leading and constant terms.
fn polynomial_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = poly.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = poly[degree];
    if degree == 1 {
        return Ok(vec![-poly[0] / lead]);
    }
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -poly[i] / lead;
    }
    // QR iterations can stall on nearly cyclic companion matrices (e.g. z^n - a).
    let roots = match companion.try_schur(f64::EPSILON, 2000).and_then(|s| s.eigenvalues()) {
        Some(values) => values.iter().copied().collect(),
        None => aberth_roots(poly)?,
    };
    Ok(roots.into_iter().map(|z| newton_polish(poly, z)).collect())
}

/// Simultaneous Aberth-Ehrlich iteration.
fn aberth_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = poly.len() - 1;
    let radius = (poly[0].norm() / poly[degree].norm()).powf(1.0 / degree as f64).max(1e-300);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius, TWO_PI * k as f64 / degree as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        for &p in poly.iter().rev() {
            deriv = deriv * x + value;
            value = value * x + p;
        }
        (value, deriv)
    };
    for _ in 0..1000 {
        let mut largest = 0.0f64;
        for k in 0..degree {
            let (value, deriv) = eval(z[k]);
            if value.norm() == 0.0 {
                continue;
            }
            let ratio = value / deriv;
            let repulsion: Complex64 = (0..degree).filter(|&i| i != k).map(|i| (z[k] - z[i]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest = largest.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if largest < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|v| v.is_finite()) {
        Ok(z)
    } else {
        Err(Error::Eigensolver("polynomial root iteration diverged".into()))
    }
}

fn newton_polish(poly: &[Complex64], z: Complex64) -> Complex64 {
    let eval = |x: Complex64| {
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        for &p in poly.iter().rev() {
            deriv = deriv * x + value;
            value = value * x + p;
        }
        (value, deriv)
    };
    let (value, deriv) = eval(z);
    if deriv.norm() == 0.0 || !value.is_finite() {
        return z;
    }
    let candidate = z - value / deriv;
    if candidate.is_finite() && eval(candidate).0.norm() < value.norm() {
        candidate
    } else {
        z
    }
}

/// Cluster multiplicities, ascending; they sum to `2j`.
pub fn degeneracy_profile(config: &PointConfiguration, tol: f64) -> Vec<usize> {
    let mut sizes: Vec<usize> = config.clusters(tol).into_iter().map(|(_, m)| m).collect();
    sizes.sort_unstable();
    sizes
}

/// Largest multiplicity among points sitting within `tol` of either pole.
pub fn pole_multiplicity(config: &PointConfiguration, tol: f64) -> usize {
    config
        .clusters(tol)
        .into_iter()
        .filter(|(p, _)| p.distance(BlochPoint::NORTH) < tol || p.distance(BlochPoint::SOUTH) < tol)
        .map(|(_, m)| m)
        .max()
        .unwrap_or(0)
}
