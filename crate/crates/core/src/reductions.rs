//! Reduced density matrices of the symmetric Majorana image.
//!
//! A spin-j state `sum_m c_m |j,m>` is identified with the symmetric state
//! `sum_k c_{j-k} |D_{2j}^(k)>` of `N = 2j` qubits, `k` counting down spins.
//! All `t`-qubit reductions of that state coincide; expressed in the Dicke
//! basis `{|D_t^(k)>}` of the symmetric `t`-qubit subspace they read
//!
//! ```text
//! (rho_t)_{k1 k2} = sum_{k=0}^{N-t} c_{j-k-k1} conj(c_{j-k-k2}) Gamma_k^{k1 k2}
//! Gamma_k^{k1 k2} = sqrt(C(k+k1,k) C(N-k-k1,t-k1) C(k+k2,k) C(N-k-k2,t-k2)) / C(N,t)
//! ```
//!
//! with `C(q,l) = 0` outside `0 <= l <= q`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::linalg::{hermitian_eigenvalues, ln_binomial, CMatrix};
use crate::spin::{build_spin_operators, spin_expectation, SpinQuantumNumber, SpinState};
use crate::{Error, Result};

/// Eigenvalues below this are treated as a bug rather than roundoff.
pub const NEGATIVE_EIGENVALUE_LIMIT: f64 = -1e-10;

/// Largest `2j` accepted by [`brute_force_reduced_density`].
pub const BRUTE_FORCE_MAX_TWO_J: u32 = 14;

/// Table of `Gamma_k^{k1 k2}` for one `(2j, t)`.
#[derive(Debug, Clone)]
pub struct GammaTable {
    two_j: u32,
    t: usize,
    values: Vec<f64>,
}

impl GammaTable {
    pub fn new(spin: SpinQuantumNumber, t: usize) -> Result<Self> {
        spin.check_order(t)?;
        let n = spin.n();
        let width = t + 1;
        let ln_norm = ln_binomial(n, t).expect("t < 2j");
        let mut values = vec![0.0; (n - t + 1) * width * width];
        for k in 0..=n - t {
            for k1 in 0..=t {
                for k2 in k1..=t {
                    let g = gamma_value(n, t, k, k1, k2, ln_norm);
                    values[(k * width + k1) * width + k2] = g;
                    values[(k * width + k2) * width + k1] = g;
                }
            }
        }
        Ok(Self { two_j: spin.two_j(), t, values })
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of admissible `k` values, `2j - t + 1`.
    pub fn k_len(&self) -> usize {
        self.two_j as usize - self.t + 1
    }

    #[inline]
    pub fn get(&self, k: usize, k1: usize, k2: usize) -> f64 {
        let width = self.t + 1;
        self.values[(k * width + k1) * width + k2]
    }
}

fn gamma_value(n: usize, t: usize, k: usize, k1: usize, k2: usize, ln_norm: f64) -> f64 {
    let factors = [
        ln_binomial(k + k1, k),
        (n >= k + k1).then(|| ln_binomial(n - k - k1, t - k1)).flatten(),
        ln_binomial(k + k2, k),
        (n >= k + k2).then(|| ln_binomial(n - k - k2, t - k2)).flatten(),
    ];
    let mut ln_sum = 0.0;
    for f in factors {
        match f {
            Some(v) => ln_sum += v,
            None => return 0.0,
        }
    }
    (0.5 * ln_sum - ln_norm).exp()
}

/// Memoized [`GammaTable`] for `(2j, t)`; concurrent readers share one table.
pub fn gamma_table(spin: SpinQuantumNumber, t: usize) -> Result<Arc<GammaTable>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, usize), Arc<GammaTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (spin.two_j(), t);
    if let Some(table) = cache.read().expect("gamma cache poisoned").get(&key) {
        return Ok(Arc::clone(table));
    }
    let table = Arc::new(GammaTable::new(spin, t)?);
    let mut guard = cache.write().expect("gamma cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(table)))
}

/// Single coefficient `Gamma_k^{k1 k2}` with range checking.
pub fn gamma(spin: SpinQuantumNumber, t: usize, k: usize, k1: usize, k2: usize) -> Result<f64> {
    spin.check_order(t)?;
    if k > spin.n() - t || k1 > t || k2 > t {
        return Err(Error::IndexOutOfRange(format!(
            "Gamma index (k={k}, k1={k1}, k2={k2}) for 2j={}, t={t}",
            spin.two_j()
        )));
    }
    Ok(gamma_table(spin, t)?.get(k, k1, k2))
}

/// `t`-qubit reduced density matrix in the symmetric Dicke basis.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    t: usize,
    matrix: CMatrix,
}

impl ReducedDensity {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn maximally_mixed(t: usize) -> Self {
        let scale = Complex64::from(1.0 / (t as f64 + 1.0));
        Self { t, matrix: CMatrix::identity(t + 1, t + 1) * scale }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)` from the matrix entries.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(Complex64::norm_sqr).sum()
    }

    /// Largest deviation of an entry from `identity / (t + 1)`.
    pub fn distance_from_maximally_mixed(&self) -> f64 {
        let target = 1.0 / (self.t as f64 + 1.0);
        let dim = self.t + 1;
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let expected = if r == c { target } else { 0.0 };
                worst = worst.max((self.matrix[(r, c)] - expected).norm());
            }
        }
        worst
    }

    /// Largest elementwise distance between two reductions of the same order.
    pub fn max_abs_diff(&self, other: &ReducedDensity) -> f64 {
        crate::linalg::max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        crate::linalg::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }
}

/// `rho_t` through the closed-form `Gamma` expansion.
pub fn reduced_density(state: &SpinState, t: usize) -> Result<ReducedDensity> {
    let spin = state.spin();
    let table = gamma_table(spin, t)?;
    let c = state.coefficients();
    let n = spin.n();
    let dim = t + 1;
    let mut matrix = CMatrix::zeros(dim, dim);
    // c_{j-k-k1} sits at storage index N - k - k1.
    for k1 in 0..dim {
        for k2 in k1..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..table.k_len() {
                let g = table.get(k, k1, k2);
                acc += c[n - k - k1] * c[n - k - k2].conj() * g;
            }
            matrix[(k1, k2)] = acc;
            matrix[(k2, k1)] = acc.conj();
        }
    }
    Ok(ReducedDensity { t, matrix })
}

/// `rho_t` by explicit construction of the `2^(2j)`-amplitude symmetric state,
/// a partial trace over `2j - t` qubits and projection onto the Dicke basis.
///
/// Independent of the `Gamma` expansion; used as a test oracle.
pub fn brute_force_reduced_density(state: &SpinState, t: usize) -> Result<ReducedDensity> {
    let spin = state.spin();
    spin.check_order(t)?;
    if spin.two_j() > BRUTE_FORCE_MAX_TWO_J {
        return Err(Error::TooLarge { two_j: spin.two_j(), limit: BRUTE_FORCE_MAX_TWO_J });
    }
    let n = spin.n();
    let c = state.coefficients();

    // Bit set = spin down. A string with k downs carries c_{j-k} / sqrt(C(N,k)).
    let amplitudes: Vec<Complex64> = (0..1usize << n)
        .map(|s| {
            let k = s.count_ones() as usize;
            c[n - k] / crate::linalg::binomial(n, k).sqrt()
        })
        .collect();

    // Kept qubits are the low t bits; traced-out qubits the high N - t bits.
    let kept = 1usize << t;
    let mut full = CMatrix::zeros(kept, kept);
    for rest in 0..1usize << (n - t) {
        let row = &amplitudes[rest * kept..(rest + 1) * kept];
        for a in 0..kept {
            for b in 0..kept {
                full[(a, b)] += row[a] * row[b].conj();
            }
        }
    }

    // Dicke vectors of t qubits.
    let mut dicke = CMatrix::zeros(t + 1, kept);
    for a in 0..kept {
        let k = a.count_ones() as usize;
        dicke[(k, a)] = Complex64::from(1.0 / crate::linalg::binomial(t, k).sqrt());
    }
    let matrix = &dicke * full * dicke.adjoint();
    Ok(ReducedDensity { t, matrix })
}

/// Eigenvalues of `rho_t`, descending, with roundoff negatives clamped to zero.
pub fn spectrum(rho: &ReducedDensity) -> Result<Vec<f64>> {
    let mut values = hermitian_eigenvalues(&rho.matrix)?;
    for v in values.iter_mut() {
        if *v < NEGATIVE_EIGENVALUE_LIMIT {
            return Err(Error::NegativeEigenvalue(*v));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(values)
}

/// Coefficient matrix `A` of the `t | 2j - t` split in Dicke bases, `rho_t = A A^dagger`.
///
/// `A_{k1, k} = c_{j-k-k1} sqrt(C(k+k1, k) C(N-k-k1, t-k1) / C(N, t))`.
pub fn schmidt_matrix(state: &SpinState, t: usize) -> Result<CMatrix> {
    let spin = state.spin();
    spin.check_order(t)?;
    let n = spin.n();
    let ln_norm = ln_binomial(n, t).expect("t < 2j");
    let c = state.coefficients();
    Ok(CMatrix::from_fn(t + 1, n - t + 1, |k1, k| {
        match (ln_binomial(k + k1, k), ln_binomial(n - k - k1, t - k1)) {
            (Some(a), Some(b)) => c[n - k - k1] * (0.5 * (a + b - ln_norm)).exp(),
            _ => Complex64::new(0.0, 0.0),
        }
    }))
}

/// Square roots of the eigenvalues of `rho_t`, descending, padded with exact
/// zeros to length `t + 1`.
///
/// These are the singular values of [`schmidt_matrix`], which are accurate to
/// roundoff in absolute terms; taking square roots of computed eigenvalues
/// would amplify roundoff near zero eigenvalues to `~1e-8`.
pub fn schmidt_values(state: &SpinState, t: usize) -> Result<Vec<f64>> {
    let a = schmidt_matrix(state, t)?;
    let svd = a.svd(false, false);
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("non-finite singular value".into()));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    values.resize(t + 1, 0.0);
    Ok(values)
}

/// Spectrum of `rho_t` as squared [`schmidt_values`].
pub fn schmidt_spectrum(state: &SpinState, t: usize) -> Result<Vec<f64>> {
    Ok(schmidt_values(state, t)?.into_iter().map(|s| s * s).collect())
}

/// Purity `tr(rho_t^2)` straight from the coefficients:
///
/// ```text
/// R_t = sum_{k1,k2} | sum_{k=0}^{N-t} conj(c[k+k1]) c[k+k2] Gamma_k^{k1 k2} |^2
/// ```
///
/// where `c[i]` is the coefficient at storage index `i` (`m = i - j`).
pub fn purity_from_coefficients(state: &SpinState, t: usize) -> Result<f64> {
    let table = gamma_table(state.spin(), t)?;
    Ok(purity_with_table(&table, state.coefficients()))
}

/// Purity of the normalized version of an arbitrary nonzero coefficient vector.
pub fn purity_with_table(table: &GammaTable, c: &[Complex64]) -> f64 {
    let norm_sqr: f64 = c.iter().map(Complex64::norm_sqr).sum();
    let (raw, _) = raw_purity_terms(table, c, false);
    raw / (norm_sqr * norm_sqr)
}

/// Purity of `c / |c|` and its gradient with respect to `(Re c_i, Im c_i)`,
/// returned as the complex number `dR/dRe c_i + i dR/dIm c_i`.
pub fn purity_and_gradient(table: &GammaTable, c: &[Complex64]) -> (f64, Vec<Complex64>) {
    let norm_sqr: f64 = c.iter().map(Complex64::norm_sqr).sum();
    let (raw, raw_grad) = raw_purity_terms(table, c, true);
    let s2 = norm_sqr * norm_sqr;
    let purity = raw / s2;
    // d(P / S^2) = dP / S^2 - 2 P dS / S^3, with dS/dconj(c_i) = c_i.
    let grad = raw_grad
        .iter()
        .zip(c)
        .map(|(dp, ci)| 2.0 * (dp / s2 - ci * (2.0 * raw / (s2 * norm_sqr))))
        .collect();
    (purity, grad)
}

/// Unnormalized `P = sum |M_{k1k2}|^2` and, on request, `dP/dconj(c_i)`.
fn raw_purity_terms(table: &GammaTable, c: &[Complex64], with_grad: bool) -> (f64, Vec<Complex64>) {
    let t = table.t();
    let k_len = table.k_len();
    let zero = Complex64::new(0.0, 0.0);
    let mut m = vec![zero; (t + 1) * (t + 1)];
    let mut raw = 0.0;
    for k1 in 0..=t {
        for k2 in 0..=t {
            let mut acc = zero;
            for k in 0..k_len {
                acc += c[k + k1].conj() * c[k + k2] * table.get(k, k1, k2);
            }
            m[k1 * (t + 1) + k2] = acc;
            raw += acc.norm_sqr();
        }
    }
    if !with_grad {
        return (raw, Vec::new());
    }
    // dP/dconj(c_i) = 2 sum_{k1,k2} conj(M_{k1k2}) c[i - k1 + k2] Gamma_{i-k1}^{k1k2}
    let mut grad = vec![zero; c.len()];
    for (i, g) in grad.iter_mut().enumerate() {
        let mut acc = zero;
        for k1 in 0..=t.min(i) {
            let k = i - k1;
            if k >= k_len {
                continue;
            }
            for k2 in 0..=t {
                acc += m[k1 * (t + 1) + k2].conj() * c[k + k2] * table.get(k, k1, k2);
            }
        }
        *g = 2.0 * acc;
    }
    (raw, grad)
}

/// Purity for `t = 1, 2` from spin expectation values only.
///
/// ```text
/// R_1 = (1 + |<J>|^2 / j^2) / 2
/// R_2 = 1/4 + |<J>|^2 / (2 j^2) + sum_{a,b} ((<J_a J_b + J_b J_a>/j - delta_ab) / (2(2j - 1)))^2
/// ```
pub fn purity_via_spin_expectations(state: &SpinState, t: usize) -> Result<f64> {
    let spin = state.spin();
    let j = spin.j();
    match t {
        1 => {
            spin.check_order(1)?;
            let mean = spin_expectation(state);
            let sq: f64 = mean.iter().map(|x| x * x).sum();
            Ok(0.5 * (1.0 + sq / (j * j)))
        }
        2 => {
            if spin.two_j() <= 2 {
                return Err(Error::InvalidParameter(format!(
                    "second-order spin-expectation purity needs j > 1 (got j = {spin})"
                )));
            }
            let mean = spin_expectation(state);
            let sq: f64 = mean.iter().map(|x| x * x).sum();
            let ops = build_spin_operators(spin);
            let comps = ops.components();
            let mut sum = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    let anti = comps[a] * comps[b] + comps[b] * comps[a];
                    let delta = if a == b { 1.0 } else { 0.0 };
                    let s_ab = (state.expectation(&anti).re / j - delta) / (2.0 * (2.0 * j - 1.0));
                    sum += s_ab * s_ab;
                }
            }
            Ok(0.25 + sq / (2.0 * j * j) + sum)
        }
        _ => Err(Error::InvalidParameter(format!(
            "spin-expectation purity is available for t = 1, 2 only (got t = {t})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spin(two_j: u32) -> SpinQuantumNumber {
        SpinQuantumNumber::new(two_j).unwrap()
    }

    fn cat(two_j: u32) -> SpinState {
        let mut v = vec![c(0.0, 0.0); two_j as usize + 1];
        v[0] = c(1.0, 0.0);
        v[two_j as usize] = c(1.0, 0.0);
        SpinState::from_two_j(two_j, v).unwrap()
    }

    fn mu_state(mu: Complex64) -> SpinState {
        SpinState::from_two_j(4, vec![c(1.0, 0.0), c(0.0, 0.0), mu, c(0.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn gamma_hand_values() {
        assert!((gamma(spin(2), 1, 0, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma(spin(2), 1, 1, 0, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!(gamma(spin(2), 1, 2, 0, 0).is_err());
        assert!(gamma(spin(2), 2, 0, 0, 0).is_err());
        assert!(gamma(spin(4), 1, 0, 2, 0).is_err());
    }

    #[test]
    fn gamma_zero_convention() {
        // C(N-k-k1, t-k1) vanishes whenever t - k1 > N - k - k1.
        assert_eq!(gamma_value(4, 2, 3, 0, 0, ln_binomial(4, 2).unwrap()), 0.0);
    }

    #[test]
    fn gamma_table_is_symmetric_and_nonnegative() {
        for two_j in 2..=12 {
            for t in 1..two_j as usize {
                let table = gamma_table(spin(two_j), t).unwrap();
                for k in 0..table.k_len() {
                    for k1 in 0..=t {
                        for k2 in 0..=t {
                            let g = table.get(k, k1, k2);
                            assert!(g >= 0.0);
                            assert_eq!(g, table.get(k, k2, k1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cat_reduces_to_maximally_mixed_qubit() {
        let rho = reduced_density(&cat(4), 1).unwrap();
        assert!(rho.distance_from_maximally_mixed() < 1e-15);
    }

    #[test]
    fn coherent_state_reduces_to_pure_projector() {
        for two_j in 2..=8u32 {
            let top = SpinState::basis(spin(two_j), i64::from(two_j)).unwrap();
            for t in 1..two_j as usize {
                let rho = reduced_density(&top, t).unwrap();
                assert!((rho.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
                assert!((rho.purity() - 1.0).abs() < 1e-14);
                let brute = brute_force_reduced_density(&top, t).unwrap();
                assert!(rho.max_abs_diff(&brute) < 1e-14);
            }
        }
    }

    #[test]
    fn mu_family_second_order_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        use rand::Rng;
        for _ in 0..20 {
            let mu = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let rho = reduced_density(&mu_state(mu), 2).unwrap();
            let m2 = mu.norm_sqr();
            let norm = 2.0 + m2;
            let off = (2.0f64 / 3.0).sqrt() * mu.re / norm;
            let expected = CMatrix::from_row_slice(
                3,
                3,
                &[
                    c((1.0 + m2 / 6.0) / norm, 0.0),
                    c(0.0, 0.0),
                    c(off, 0.0),
                    c(0.0, 0.0),
                    c(2.0 * m2 / 3.0 / norm, 0.0),
                    c(0.0, 0.0),
                    c(off, 0.0),
                    c(0.0, 0.0),
                    c((1.0 + m2 / 6.0) / norm, 0.0),
                ],
            );
            assert!(crate::linalg::max_abs_diff(rho.matrix(), &expected) < 1e-14);
        }
    }

    #[test]
    fn spectrum_of_mu_one_and_tetrahedron() {
        let spec = spectrum(&reduced_density(&mu_state(c(1.0, 0.0)), 2).unwrap()).unwrap();
        let s6 = 6f64.sqrt();
        let mut expected = vec![2.0 / 9.0, (7.0 - 2.0 * s6) / 18.0, (7.0 + 2.0 * s6) / 18.0];
        expected.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in spec.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
        let tet = mu_state(c(0.0, 2f64.sqrt()));
        for v in spectrum(&reduced_density(&tet, 2).unwrap()).unwrap() {
            assert!((v - 1.0 / 3.0).abs() < 1e-14);
        }
        let mixed = ReducedDensity::maximally_mixed(4);
        for v in spectrum(&mixed).unwrap() {
            assert!((v - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn spectrum_rejects_genuinely_negative_eigenvalues() {
        let mut bad = ReducedDensity::maximally_mixed(1);
        bad.matrix[(0, 0)] = c(1.1, 0.0);
        bad.matrix[(1, 1)] = c(-0.1, 0.0);
        assert!(matches!(spectrum(&bad), Err(Error::NegativeEigenvalue(_))));
    }

    #[test]
    fn tetrahedron_brute_force_is_maximally_mixed() {
        let tet = mu_state(c(0.0, 2f64.sqrt()));
        let rho = brute_force_reduced_density(&tet, 2).unwrap();
        assert!(rho.distance_from_maximally_mixed() < 1e-15);
    }

    #[test]
    fn brute_force_rejects_large_spin() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let psi = SpinState::random(spin(16), &mut rng);
        assert!(matches!(
            brute_force_reduced_density(&psi, 2),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn closed_form_matches_brute_force_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for two_j in 2..=8u32 {
            for _ in 0..20 {
                let psi = SpinState::random(spin(two_j), &mut rng);
                for t in 1..two_j as usize {
                    let a = reduced_density(&psi, t).unwrap();
                    let b = brute_force_reduced_density(&psi, t).unwrap();
                    assert!(a.max_abs_diff(&b) < 1e-12, "2j={two_j} t={t}");
                    assert!(a.hermiticity_error() < 1e-15);
                    assert!((a.trace() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn purity_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for two_j in 2..=10u32 {
            for _ in 0..10 {
                let psi = SpinState::random(spin(two_j), &mut rng);
                for t in 1..two_j as usize {
                    let coef = purity_from_coefficients(&psi, t).unwrap();
                    let spec: f64 = spectrum(&reduced_density(&psi, t).unwrap())
                        .unwrap()
                        .iter()
                        .map(|l| l * l)
                        .sum();
                    assert!((coef - spec).abs() < 1e-12);
                    assert!(coef >= 1.0 / (t as f64 + 1.0) - 1e-12 && coef <= 1.0 + 1e-12);
                    if t <= 2 && two_j > 2 {
                        let weinberg = purity_via_spin_expectations(&psi, t).unwrap();
                        assert!((weinberg - coef).abs() < 1e-10, "2j={two_j} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn spin_expectation_purity_reference_values() {
        let top = SpinState::basis(spin(6), 6).unwrap();
        assert!((purity_via_spin_expectations(&top, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((purity_via_spin_expectations(&cat(6), 1).unwrap() - 0.5).abs() < 1e-14);
        assert!((purity_from_coefficients(&cat(6), 1).unwrap() - 0.5).abs() < 1e-14);
        assert!(purity_via_spin_expectations(&cat(2), 2).is_err());
        assert!(purity_via_spin_expectations(&cat(8), 3).is_err());
    }

    #[test]
    fn purity_gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (two_j, t) in [(4u32, 2usize), (5, 2), (7, 3), (12, 4)] {
            let table = gamma_table(spin(two_j), t).unwrap();
            let psi = SpinState::random(spin(two_j), &mut rng);
            let x: Vec<Complex64> = psi.coefficients().iter().map(|v| v * 1.3).collect();
            let (r, grad) = purity_and_gradient(&table, &x);
            assert!((r - purity_with_table(&table, &x)).abs() < 1e-15);
            let h = 1e-6;
            for i in 0..x.len() {
                for (dir, part) in [(c(1.0, 0.0), grad[i].re), (c(0.0, 1.0), grad[i].im)] {
                    let mut plus = x.clone();
                    let mut minus = x.clone();
                    plus[i] += dir * h;
                    minus[i] -= dir * h;
                    let fd = (purity_with_table(&table, &plus) - purity_with_table(&table, &minus))
                        / (2.0 * h);
                    assert!((fd - part).abs() < 1e-8, "2j={two_j} t={t} i={i}: {fd} vs {part}");
                }
            }
        }
    }

    #[test]
    fn schmidt_factor_reproduces_reduced_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for two_j in 2..=9u32 {
            let psi = SpinState::random(spin(two_j), &mut rng);
            for t in 1..two_j as usize {
                let a = schmidt_matrix(&psi, t).unwrap();
                let rho = reduced_density(&psi, t).unwrap();
                assert!(crate::linalg::max_abs_diff(&(&a * a.adjoint()), rho.matrix()) < 1e-14);
                let via_eig = spectrum(&rho).unwrap();
                let via_svd = schmidt_spectrum(&psi, t).unwrap();
                for (x, y) in via_eig.iter().zip(&via_svd) {
                    assert!((x - y).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn schmidt_values_of_coherent_state_are_exact() {
        let top = SpinState::basis(spin(10), 10).unwrap();
        let psi = crate::spin::rotate(&top, crate::spin::Direction::new(0.3, -0.5, 0.8).unwrap(), 1.1)
            .unwrap();
        for t in 1..10 {
            let s = schmidt_values(&psi, t).unwrap();
            assert!((s[0] - 1.0).abs() < 1e-13);
            assert!(s[1..].iter().all(|v| v.abs() < 1e-13), "{s:?}");
        }
    }

    #[test]
    fn schmidt_partner_orders_share_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for two_j in 3..=9u32 {
            let psi = SpinState::random(spin(two_j), &mut rng);
            for t in 1..two_j as usize {
                let a = spectrum(&reduced_density(&psi, t).unwrap()).unwrap();
                let b = spectrum(&reduced_density(&psi, two_j as usize - t).unwrap()).unwrap();
                let len = a.len().max(b.len());
                for i in 0..len {
                    let x = a.get(i).copied().unwrap_or(0.0);
                    let y = b.get(i).copied().unwrap_or(0.0);
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }
}
