use num_complex::Complex64;

use super::eigen::{hermitian_eigen, HermitianEigenResult};
use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Eigenvalues below this are treated as negative spectrum.
pub const NEGATIVE_EIGEN_FLOOR: f64 = -1e-9;

/// Eigenvalues below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of matrices, leftmost factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Sum of absolute eigenvalues. Only Hermitian inputs are supported.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clipped to zero.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let min = eig.min_eigenvalue();
    if min < NEGATIVE_EIGEN_FLOOR {
        return Err(Error::NegativeSpectrum {
            min_eigenvalue: min,
        });
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let product: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || product != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} do not multiply to matrix dim {}",
            m.dim()
        )));
    }
    Ok(())
}

/// Splits a flat index into per-subsystem digits (leftmost most significant).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

fn compose(digits: &[usize], dims: &[usize], select: impl Fn(usize) -> bool) -> usize {
    digits
        .iter()
        .zip(dims)
        .enumerate()
        .filter(|(s, _)| select(*s))
        .fold(0, |acc, (_, (&x, &d))| acc * d + x)
}

/// Traces out every subsystem not listed in `keep`.
///
/// `dims` lists subsystem dimensions with the leftmost tensor factor first.
/// Kept subsystems appear in the result in their original order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if keep.is_empty() {
        return Err(Error::DimensionMismatch("keep set is empty".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let kept = |s: usize| keep.contains(&s);
    let out_dim: usize = (0..dims.len())
        .filter(|&s| kept(s))
        .map(|s| dims[s])
        .product();
    let mut out = ComplexMatrix::zeros(out_dim);

    let n = m.dim();
    let mut row_digits = vec![0; dims.len()];
    let mut col_digits = vec![0; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut row_digits);
        for j in 0..n {
            digits(j, dims, &mut col_digits);
            let traced_match = (0..dims.len())
                .filter(|&s| !kept(s))
                .all(|s| row_digits[s] == col_digits[s]);
            if traced_match {
                let r = compose(&row_digits, dims, kept);
                let c = compose(&col_digits, dims, kept);
                out[(r, c)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose of a bipartite operator on `d_a ⊗ d_b`.
pub fn partial_transpose(
    m: &ComplexMatrix,
    (d_a, d_b): (usize, usize),
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    check_dims(m, &[d_a, d_b])?;
    let mut out = ComplexMatrix::zeros(m.dim());
    for i in 0..d_a {
        for k in 0..d_b {
            for j in 0..d_a {
                for l in 0..d_b {
                    let (ri, ci, rk, ck) = match subsystem {
                        Subsystem::A => (j, i, k, l),
                        Subsystem::B => (i, j, l, k),
                    };
                    out[(ri * d_b + rk, ci * d_b + ck)] = m[(i * d_b + k, j * d_b + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Shannon entropy in bits of a spectrum; entries below `ENTROPY_CUTOFF` are skipped.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > ENTROPY_CUTOFF)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(rho).map_err(|e| Error::NotAState(e.to_string()))?;
    check_state_spectrum(rho, &eig)?;
    Ok(entropy_of_spectrum(&eig.eigenvalues))
}

fn check_state_spectrum(rho: &ComplexMatrix, eig: &HermitianEigenResult) -> Result<()> {
    let tr = rho.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::NotAState(format!("trace {tr} differs from 1")));
    }
    let min = eig.min_eigenvalue();
    if min < NEGATIVE_EIGEN_FLOOR {
        return Err(Error::NotAState(format!(
            "min eigenvalue {min:e} below {NEGATIVE_EIGEN_FLOOR:e}"
        )));
    }
    Ok(())
}
