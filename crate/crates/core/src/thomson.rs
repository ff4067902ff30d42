//! Point charges on the unit sphere minimizing the Coulomb energy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spin::Direction;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThomsonConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Threshold on the Euclidean norm of the tangential gradient.
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for ThomsonConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 50_000, grad_tol: 1e-8, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThomsonResult {
    pub points: Vec<[f64; 3]>,
    pub energy: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub restart_index: usize,
    pub converged: bool,
}

impl ThomsonResult {
    pub fn directions(&self) -> Vec<Direction> {
        self.points
            .iter()
            .map(|p| Direction::new(p[0], p[1], p[2]).expect("points lie on the unit sphere"))
            .collect()
    }
}

/// `sum_{a<b} 1 / |r_a - r_b|`.
pub fn coulomb_energy(points: &[[f64; 3]]) -> f64 {
    let mut energy = 0.0;
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            energy += 1.0 / dist(points[a], points[b]);
        }
    }
    energy
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Energy and gradient projected onto the tangent planes.
fn energy_and_tangent_gradient(points: &[[f64; 3]]) -> (f64, Vec<[f64; 3]>) {
    let n = points.len();
    let mut energy = 0.0;
    let mut grad = vec![[0.0; 3]; n];
    for a in 0..n {
        for b in a + 1..n {
            let d: [f64; 3] = std::array::from_fn(|i| points[a][i] - points[b][i]);
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let r = r2.sqrt();
            energy += 1.0 / r;
            let f = 1.0 / (r2 * r);
            for i in 0..3 {
                grad[a][i] -= d[i] * f;
                grad[b][i] += d[i] * f;
            }
        }
    }
    for (g, p) in grad.iter_mut().zip(points) {
        let radial = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
        for i in 0..3 {
            g[i] -= radial * p[i];
        }
    }
    (energy, grad)
}

fn norm_sq(v: &[[f64; 3]]) -> f64 {
    v.iter().flatten().map(|x| x * x).sum()
}

fn retract(points: &[[f64; 3]], grad: &[[f64; 3]], step: f64) -> Vec<[f64; 3]> {
    points
        .iter()
        .zip(grad)
        .map(|(p, g)| {
            let q: [f64; 3] = std::array::from_fn(|i| p[i] - step * g[i]);
            let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            q.map(|x| x / r)
        })
        .collect()
}

/// Projected gradient descent from `start`, with Barzilai-Borwein step sizes
/// and a backtracking safeguard.
pub fn relax(start: Vec<[f64; 3]>, max_iters: usize, grad_tol: f64) -> (Vec<[f64; 3]>, f64, f64, usize) {
    let mut x = start;
    let (mut energy, mut grad) = energy_and_tangent_gradient(&x);
    let mut gnorm2 = norm_sq(&grad);
    let mut step = 0.1 / gnorm2.sqrt().max(1.0);
    let mut iterations = 0;
    while iterations < max_iters && gnorm2.sqrt() >= grad_tol {
        iterations += 1;
        let mut trial_step = step;
        let mut accepted = None;
        for _ in 0..60 {
            let candidate = retract(&x, &grad, trial_step);
            let (e, g) = energy_and_tangent_gradient(&candidate);
            let g2 = norm_sq(&g);
            let sufficient = e <= energy - 1e-4 * trial_step * gnorm2;
            // Close to the minimum the energy decrease drowns in roundoff.
            let flat = g2 < gnorm2 && e <= energy + 1e-13 * energy.abs();
            if sufficient || flat {
                accepted = Some((candidate, e, g, g2));
                break;
            }
            trial_step *= 0.5;
        }
        let Some((candidate, e, g, g2)) = accepted else {
            break;
        };
        let mut ss = 0.0;
        let mut sy = 0.0;
        for a in 0..x.len() {
            for i in 0..3 {
                let s = candidate[a][i] - x[a][i];
                let y = g[a][i] - grad[a][i];
                ss += s * s;
                sy += s * y;
            }
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-10, 1e3) } else { trial_step * 2.0 };
        x = candidate;
        energy = e;
        grad = g;
        gnorm2 = g2;
    }
    (x, energy, gnorm2.sqrt(), iterations)
}

/// Lowest-energy configuration of `n` charges over `config.restarts` random starts.
///
/// Ties in energy go to the lower restart index, so the outcome does not
/// depend on thread scheduling.
pub fn solve_thomson(n: usize, config: &ThomsonConfig) -> Result<ThomsonResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 charges, got {n}")));
    }
    if config.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be positive".into()));
    }
    let results: Vec<ThomsonResult> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(restart as u64);
            let start: Vec<[f64; 3]> = (0..n).map(|_| Direction::random(&mut rng).components()).collect();
            let (points, energy, gradient_norm, iterations) = relax(start, config.max_iters, config.grad_tol);
            ThomsonResult {
                points,
                energy,
                gradient_norm,
                iterations,
                restart_index: restart,
                converged: gradient_norm < config.grad_tol,
            }
        })
        .collect();
    let best = results
        .into_iter()
        .filter(|r| r.converged)
        .min_by(|a, b| a.energy.total_cmp(&b.energy).then(a.restart_index.cmp(&b.restart_index)));
    best.ok_or_else(|| Error::NotConverged(format!("no Thomson restart reached gradient norm {}", config.grad_tol)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_charges_end_antipodal() {
        let r = solve_thomson(2, &ThomsonConfig { restarts: 4, ..Default::default() }).unwrap();
        assert!((r.energy - 0.5).abs() < 1e-12);
        let d: f64 = r.points[0].iter().zip(r.points[1]).map(|(a, b)| a * b).sum();
        assert!((d + 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_charges_form_a_tetrahedron() {
        let r = solve_thomson(4, &ThomsonConfig { restarts: 8, seed: 3, ..Default::default() }).unwrap();
        // 6 edges of length sqrt(8/3)
        assert!((r.energy - 6.0 / (8.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(r.gradient_norm < 1e-8);
    }

    #[test]
    fn known_minima_for_small_counts() {
        // Published Thomson energies.
        let known = [(5, 6.474_691_494), (6, 9.985_281_374), (12, 49.165_253_058)];
        for (n, e) in known {
            let r = solve_thomson(n, &ThomsonConfig { restarts: 16, seed: 1, ..Default::default() }).unwrap();
            assert!((r.energy - e).abs() < 1e-8, "n = {n}: {}", r.energy);
        }
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let config = ThomsonConfig { restarts: 6, seed: 9, ..Default::default() };
        let a = solve_thomson(9, &config).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| solve_thomson(9, &config)).unwrap();
        assert_eq!(a, b);
    }
}
