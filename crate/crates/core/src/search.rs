//! Numerical search for (nearly) anticoherent states.
//!
//! A degeneracy degree `g` pins the `g` lowest-`m` coefficients to zero, which
//! puts a `g`-fold Majorana point on a pole. The remaining coefficients are
//! optimized as free real/imaginary parts; the objective is evaluated on the
//! normalized vector, so no norm constraint is needed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bfgs::{central_gradient, minimize, BfgsOptions, Termination};
use crate::measures::{a_measure, purity_measure_from_purity, MeasureKind};
use crate::reductions::{gamma_table, purity_and_gradient, purity_with_table, GammaTable};
use crate::spin::{SpinQuantumNumber, SpinState};
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-10;
pub const FD_STEP: f64 = 1e-7;
/// Restarts are run in batches of this size when stopping at the first success,
/// so the outcome never depends on the number of threads.
pub const RESTART_BATCH: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub spin: SpinQuantumNumber,
    pub t: usize,
    pub g: usize,
    pub objective: MeasureKind,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub success_threshold: f64,
    /// Skip the remaining batches once a restart has converged.
    pub stop_on_success: bool,
}

impl SearchProblem {
    pub fn new(spin: SpinQuantumNumber, t: usize, g: usize) -> Result<Self> {
        let problem = Self {
            spin,
            t,
            g,
            objective: MeasureKind::Purity,
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            max_iters: 3000,
            grad_tol: 1e-9,
            success_threshold: DEFAULT_SUCCESS_THRESHOLD,
            stop_on_success: true,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_objective(mut self, objective: MeasureKind) -> Self {
        self.objective = objective;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spin.check_order(self.t)?;
        if self.g >= self.spin.n() {
            return Err(Error::InvalidParameter(format!(
                "degeneracy g = {} must be below 2j = {}",
                self.g,
                self.spin.n()
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        if self.objective == MeasureKind::Variance {
            return Err(Error::InvalidParameter(
                "search objective must be purity, hs, trace or bures".into(),
            ));
        }
        if !(self.grad_tol > 0.0 && self.success_threshold > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub restart_index: usize,
    pub value: f64,
    pub iterations: usize,
    /// The local optimizer stopped on a small gradient or a failed line search.
    pub stagnated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    #[serde(skip)]
    pub best_state: SpinState,
    pub best_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub restart_index: usize,
    pub restarts: Vec<RestartOutcome>,
}

impl SearchResult {
    pub fn restart_values(&self) -> Vec<f64> {
        self.restarts.iter().map(|r| r.value).collect()
    }

    /// Every restart ended at a stationary point without reaching the threshold.
    pub fn all_stagnated(&self) -> bool {
        !self.converged && self.restarts.iter().all(|r| r.stagnated)
    }
}

struct Objective<'a> {
    problem: &'a SearchProblem,
    table: Option<std::sync::Arc<GammaTable>>,
}

impl Objective<'_> {
    fn coefficients(&self, x: &[f64]) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.problem.g];
        c.extend(x.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])));
        c
    }

    /// Measure value of the normalized coefficient vector.
    fn value(&self, x: &[f64]) -> f64 {
        let c = self.coefficients(x);
        match &self.table {
            Some(table) => purity_measure_from_purity(purity_with_table(table, &c), self.problem.t),
            None => self.state(&c).and_then(|s| a_measure(&s, self.problem.t, self.problem.objective)).unwrap_or(0.0),
        }
    }

    fn state(&self, c: &[Complex64]) -> Result<SpinState> {
        let norm = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        SpinState::new(self.problem.spin, c.iter().map(|v| v / norm).collect())
    }

    /// `1 - A` and its gradient.
    fn loss_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        match &self.table {
            Some(table) => {
                let c = self.coefficients(x);
                let (purity, grad) = purity_and_gradient(table, &c);
                let t = self.problem.t as f64;
                let scale = (t + 1.0) / t;
                let loss = 1.0 - scale * (1.0 - purity);
                let g = grad[self.problem.g..].iter().flat_map(|d| [scale * d.re, scale * d.im]).collect();
                (loss, g)
            }
            None => {
                let loss = 1.0 - self.value(x);
                let g = central_gradient(x, FD_STEP, |p| 1.0 - self.value(p));
                (loss, g)
            }
        }
    }
}

fn run_restart(objective: &Objective, restart: usize) -> (RestartOutcome, Vec<f64>) {
    let problem = objective.problem;
    let free = problem.spin.dim() - problem.g;
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    rng.set_stream(restart as u64);
    let mut x0: Vec<f64> = (0..2 * free).map(|_| StandardNormal.sample(&mut rng)).collect();
    let n0 = x0.iter().map(|v| v * v).sum::<f64>().sqrt();
    x0.iter_mut().for_each(|v| *v /= n0);

    let options = BfgsOptions {
        max_iters: problem.max_iters,
        grad_tol: problem.grad_tol,
        f_target: 1e-3 * problem.success_threshold,
    };
    let outcome = minimize(
        x0,
        &options,
        |x| objective.loss_and_gradient(x),
        |x| {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (0.5..2.0).contains(&norm) {
                false
            } else {
                x.iter_mut().for_each(|v| *v /= norm);
                true
            }
        },
    );
    let value = objective.value(&outcome.x);
    let stagnated = matches!(outcome.termination, Termination::GradientTolerance | Termination::LineSearchFailed | Termination::Stalled);
    (RestartOutcome { restart_index: restart, value, iterations: outcome.iterations, stagnated }, outcome.x)
}

/// Maximizes the objective measure over states with `g` pinned coefficients.
pub fn search_anticoherent(problem: &SearchProblem) -> Result<SearchResult> {
    problem.validate()?;
    let table = match problem.objective {
        MeasureKind::Purity => Some(gamma_table(problem.spin, problem.t)?),
        _ => None,
    };
    let objective = Objective { problem, table };

    let batch = if problem.stop_on_success { RESTART_BATCH } else { problem.restarts };
    let mut outcomes: Vec<(RestartOutcome, Vec<f64>)> = Vec::with_capacity(problem.restarts);
    let mut start = 0;
    while start < problem.restarts {
        let end = (start + batch).min(problem.restarts);
        let chunk: Vec<_> = (start..end).into_par_iter().map(|r| run_restart(&objective, r)).collect();
        outcomes.extend(chunk);
        start = end;
        let success = outcomes.iter().any(|(o, _)| 1.0 - o.value < problem.success_threshold);
        if problem.stop_on_success && success {
            break;
        }
    }

    // Highest value wins; ties go to the lower restart index.
    let (best_outcome, best_x) = outcomes
        .iter()
        .fold(None::<&(RestartOutcome, Vec<f64>)>, |best, cand| match best {
            Some(b) if b.0.value >= cand.0.value => Some(b),
            _ => Some(cand),
        })
        .expect("at least one restart");
    let best_state = objective.state(&objective.coefficients(best_x))?;
    let best_value = a_measure(&best_state, problem.t, problem.objective)?;
    Ok(SearchResult {
        best_value,
        converged: 1.0 - best_value < problem.success_threshold,
        iterations: best_outcome.iterations,
        restart_index: best_outcome.restart_index,
        best_state,
        restarts: outcomes.into_iter().map(|(o, _)| o).collect(),
    })
}

/// Unconstrained maximization of one measure over all spin-`j` states, running every restart.
pub fn maximize_measure(
    spin: SpinQuantumNumber,
    t: usize,
    kind: MeasureKind,
    restarts: usize,
    seed: u64,
) -> Result<SearchResult> {
    let mut problem = SearchProblem::new(spin, t, 0)?.with_objective(kind).with_restarts(restarts).with_seed(seed);
    problem.stop_on_success = false;
    search_anticoherent(&problem)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmaxConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub success_threshold: f64,
}

impl Default for GmaxConfig {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            max_iters: 3000,
            grad_tol: 1e-9,
            success_threshold: DEFAULT_SUCCESS_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmaxEntry {
    pub two_j: u32,
    pub t: usize,
    pub g_max: usize,
    /// Value of the search at `g_max`, or of the failed unconstrained search when `g_max = 0`.
    pub best_value: f64,
    pub converged: bool,
    /// For `g_max = 0`: every restart of the failed search ended at a stationary point.
    pub all_stagnated: bool,
}

/// Largest degeneracy `g` for which a `t`-anticoherent spin-`j` state was found.
///
/// Every state has a Majorana point that a rotation moves onto the pinned
/// pole, so `g = 0` and `g = 1` are equivalent searches; the scan starts at
/// `g = 1` and climbs until the first failure. `g_max = 0` means none was found.
pub fn gmax_entry(spin: SpinQuantumNumber, t: usize, config: &GmaxConfig) -> Result<GmaxEntry> {
    spin.check_order(t)?;
    let mut last_success: Option<SearchResult> = None;
    let mut g_max = 0;
    for g in 1..spin.n() {
        let problem = SearchProblem {
            spin,
            t,
            g,
            objective: MeasureKind::Purity,
            restarts: config.restarts,
            seed: config.seed,
            max_iters: config.max_iters,
            grad_tol: config.grad_tol,
            success_threshold: config.success_threshold,
            stop_on_success: true,
        };
        let result = search_anticoherent(&problem)?;
        if result.converged {
            g_max = g;
            last_success = Some(result);
            continue;
        }
        if g == 1 {
            return Ok(GmaxEntry {
                two_j: spin.two_j(),
                t,
                g_max: 0,
                best_value: result.best_value,
                converged: false,
                all_stagnated: result.all_stagnated(),
            });
        }
        break;
    }
    let best = last_success.expect("g_max >= 1 implies a converged search");
    Ok(GmaxEntry { two_j: spin.two_j(), t, g_max, best_value: best.best_value, converged: true, all_stagnated: false })
}

/// `g_max` for every `1 <= t <= t_max` and `1 <= 2j <= two_j_max` with `t < 2j`.
pub fn gmax_table(two_j_max: u32, t_max: usize, config: &GmaxConfig) -> Result<Vec<GmaxEntry>> {
    if two_j_max > 20 || t_max > 5 {
        return Err(Error::InvalidParameter(format!(
            "g_max tables are limited to j <= 10 and t <= 5 (got 2j <= {two_j_max}, t <= {t_max})"
        )));
    }
    let mut table = Vec::new();
    for t in 1..=t_max {
        for two_j in (t as u32 + 1)..=two_j_max {
            table.push(gmax_entry(SpinQuantumNumber::new(two_j)?, t, config)?);
        }
    }
    Ok(table)
}
