use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance: max entry modulus of `m - m†`.
pub const HERMITIAN_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 64;

/// Spectral decomposition `m = V · diag(λ) · V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `i` is the eigenvector for `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                    .sum();
            }
        }
        out
    }

    /// Rebuilds `V · diag(f(λ)) · V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped = HermitianEigenResult {
            eigenvalues: self.eigenvalues.iter().map(|&l| f(l)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        };
        mapped.reconstruct()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Eigen-decomposition by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies a
/// real plane rotation that zeroes it. Sweeps continue until the off-diagonal
/// Frobenius mass falls below `1e-15` relative to the matrix norm.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigenResult> {
    let deviation = m.hermiticity_error();
    if deviation > HERMITIAN_TOL || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok(HermitianEigenResult {
        eigenvalues: order.iter().map(|&i| diag[i]).collect(),
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|r| r.eigenvalues)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let modulus = apq.norm();
    if modulus == 0.0 {
        return;
    }
    let n = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * modulus);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // phase e^{-iφ} with a_pq = |a_pq| e^{iφ}
    let phase = apq.conj() / modulus;

    // J = [[c, s], [-s·phase, c·phase]] on the (p, q) plane.
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase * s;
    let j_qq = phase * c;

    // A ← A·J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    // A ← J†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V ← V·J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}
