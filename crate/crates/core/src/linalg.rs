//! Small dense linear-algebra and combinatorics helpers.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const LN_FACTORIAL_TABLE: usize = 8192;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE + 1);
        table.push(0.0);
        // Kahan-compensated running sum keeps the table accurate to a few ulp.
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for n in 1..=LN_FACTORIAL_TABLE {
            let y = (n as f64).ln() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        table
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    if n < table.len() {
        return table[n];
    }
    // Stirling series beyond the table.
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x * x * x)
}

/// `ln C(q, l)`, or `None` when the binomial vanishes (`l > q`).
pub fn ln_binomial(q: usize, l: usize) -> Option<f64> {
    if l > q {
        None
    } else {
        Some(ln_factorial(q) - ln_factorial(l) - ln_factorial(q - l))
    }
}

/// Binomial coefficient as a float, zero outside `0 <= l <= q`.
///
/// Exact integer arithmetic is used while the result fits in 53 bits.
pub fn binomial(q: usize, l: usize) -> f64 {
    if l > q {
        return 0.0;
    }
    let l = l.min(q - l);
    if q <= 56 {
        let mut acc: u64 = 1;
        for i in 0..l {
            acc = acc * (q - i) as u64 / (i as u64 + 1);
        }
        return acc as f64;
    }
    ln_binomial(q, l).map_or(0.0, f64::exp)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(matrix: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !matrix.is_square() {
        return Err(Error::Eigensolver(format!(
            "matrix is {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let n = matrix.nrows();
    let eig = matrix.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(matrix: &CMatrix) -> Result<Vec<f64>> {
    let mut values: Vec<f64> = matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `exp(-i * angle * H)` for Hermitian `H`, through its eigen-decomposition.
pub fn unitary_exp(generator: &CMatrix, angle: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(generator)?;
    let phases = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::from_polar(1.0, -angle * v)),
    );
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, c)] * phases[c]
    });
    Ok(&scaled * vectors.adjoint())
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
