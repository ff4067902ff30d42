//! Dense BFGS minimization with a backtracking line search.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    pub max_iters: usize,
    /// Stop once the max-norm of the gradient falls below this.
    pub grad_tol: f64,
    /// Stop once the objective falls to or below this.
    pub f_target: f64,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { max_iters: 2000, grad_tol: 1e-9, f_target: f64::NEG_INFINITY }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    TargetReached,
    LineSearchFailed,
    /// Several consecutive iterations without a meaningful decrease.
    Stalled,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
}

/// Minimizes `f` from `x0`. `eval` returns the value and gradient; `rescale`
/// may renormalize an iterate (the inverse Hessian is reset when it does).
pub fn minimize<E, S>(x0: Vec<f64>, options: &BfgsOptions, mut eval: E, mut rescale: S) -> BfgsOutcome
where
    E: FnMut(&[f64]) -> (f64, Vec<f64>),
    S: FnMut(&mut Vec<f64>) -> bool,
{
    let n = x0.len();
    let mut x = DVector::from_vec(x0);
    let (mut f, g) = eval(x.as_slice());
    let mut g = DVector::from_vec(g);
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut fresh = true;
    let mut iterations = 0;
    let mut flat_steps = 0;
    let max_norm = |v: &DVector<f64>| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let termination = loop {
        if f <= options.f_target {
            break Termination::TargetReached;
        }
        if max_norm(&g) < options.grad_tol {
            break Termination::GradientTolerance;
        }
        if iterations >= options.max_iters {
            break Termination::MaxIterations;
        }
        if flat_steps >= 10 {
            break Termination::Stalled;
        }
        iterations += 1;

        let mut p = -(&h * &g);
        let mut slope = g.dot(&p);
        if slope >= 0.0 || !slope.is_finite() {
            h = DMatrix::identity(n, n);
            fresh = true;
            p = -g.clone();
            slope = g.dot(&p);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = &x + &p * alpha;
            let (ft, gt) = eval(trial.as_slice());
            if ft.is_finite() && ft <= f + 1e-4 * alpha * slope {
                accepted = Some((trial, ft, DVector::from_vec(gt)));
                break;
            }
            alpha *= 0.5;
        }
        let Some((mut x_new, f_new, mut g_new)) = accepted else {
            flat_steps += 1;
            if fresh {
                break Termination::LineSearchFailed;
            }
            // retry once along steepest descent
            h = DMatrix::identity(n, n);
            fresh = true;
            continue;
        };

        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        let mut vec = x_new.as_slice().to_vec();
        if rescale(&mut vec) {
            x_new = DVector::from_vec(vec);
            let (fr, gr) = eval(x_new.as_slice());
            g_new = DVector::from_vec(gr);
            f = fr;
            h = DMatrix::identity(n, n);
            fresh = true;
        } else {
            if f - f_new <= 1e-14 * f.abs().max(1e-3) {
                flat_steps += 1;
            } else {
                flat_steps = 0;
            }
            f = f_new;
            if sy > 1e-12 * s.norm() * y.norm() {
                if fresh {
                    h *= sy / y.dot(&y);
                    fresh = false;
                }
                let rho = 1.0 / sy;
                let hy = &h * &y;
                let yhy = y.dot(&hy);
                // H+ = H - rho (H y s' + s y' H) + (rho^2 y'Hy + rho) s s'
                h -= (&hy * s.transpose() + &s * hy.transpose()) * rho;
                h += (&s * s.transpose()) * (rho * rho * yhy + rho);
            }
        }
        x = x_new;
        g = g_new;
    };
    BfgsOutcome {
        grad_norm: max_norm(&g),
        x: x.as_slice().to_vec(),
        f,
        iterations,
        termination,
    }
}

/// Central finite-difference gradient with step `h`.
pub fn central_gradient<F: FnMut(&[f64]) -> f64>(x: &[f64], h: f64, mut f: F) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + h;
            let up = f(&probe);
            probe[i] = orig - h;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}
