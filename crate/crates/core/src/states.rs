//! Bell-diagonal, normal-form and Werner states, plus the density-matrix type
//! shared by every other module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::qmath::{
    hermitian_eigen, kron, partial_trace, pauli, ComplexMatrix, HERMITIAN_TOL, ONE, ZERO,
};

/// Tolerance on `Σ p_jk = 1`.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;
/// Smallest eigenvalue a `DensityMatrix` may carry.
pub const STATE_EIGEN_FLOOR: f64 = -1e-8;
pub const TRACE_TOL: f64 = 1e-9;

/// Bell-basis weights `p_jk`, indexed in the order (00, 01, 10, 11).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdsSpec {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl BdsSpec {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let spec = Self { p00, p01, p10, p11 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_array(p: [f64; 4]) -> Result<Self> {
        Self::new(p[0], p[1], p[2], p[3])
    }

    /// The Werner-state weights: `(1−w)/4` on the first three, `(1+3w)/4` on `β₁₁`.
    pub fn werner(w: f64) -> Result<Self> {
        check_range("w", w, 0.0, 1.0)?;
        let q = (1.0 - w) / 4.0;
        Self::new(q, q, q, (1.0 + 3.0 * w) / 4.0)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    /// `p_jk` for bits `j`, `k`.
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.as_array()[2 * j + k]
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.as_array();
        if let Some(bad) = p
            .iter()
            .find(|x| !x.is_finite() || !(0.0..=1.0).contains(*x))
        {
            return Err(Error::InvalidProbabilities(format!(
                "p_jk = {bad} is outside [0, 1]"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// Diagonal correlations `c_j = ⟨σ_j ⊗ σ_j⟩` of a normal-form state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTriple {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CorrelationTriple {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, c) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            check_range(name, c, -1.0, 1.0)?;
        }
        let triple = Self { c1, c2, c3 };
        let p = triple.bell_weights();
        if let Some(min) = p.iter().copied().reduce(f64::min).filter(|&m| m < -1e-12) {
            return Err(Error::Unphysical(format!(
                "({c1}, {c2}, {c3}) gives Bell weight {min}"
            )));
        }
        Ok(triple)
    }

    /// `p_jk = ¼(1 + (−1)^j c1 + (−1)^{j+k−1} c2 + (−1)^k c3)`, unclipped.
    fn bell_weights(&self) -> [f64; 4] {
        let sign = |e: i32| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let mut p = [0.0; 4];
        for j in 0..2 {
            for k in 0..2 {
                p[2 * j + k as usize] = 0.25
                    * (1.0
                        + sign(j as i32) * self.c1
                        + sign(j as i32 + k - 1) * self.c2
                        + sign(k) * self.c3);
            }
        }
        p
    }
}

/// Maps normal-form correlations to Bell-basis weights.
pub fn spec_from_correlations(c: &CorrelationTriple) -> Result<BdsSpec> {
    let p = c.bell_weights();
    if p.iter().any(|&x| x < -1e-12) {
        return Err(Error::Unphysical(format!("{c:?} gives weights {p:?}")));
    }
    // round-off of order 1e-16 can leave tiny negatives
    let p = p.map(|x| x.max(0.0));
    BdsSpec::from_array(p)
}

/// Inverse of [`spec_from_correlations`].
pub fn correlations_from_spec(spec: &BdsSpec) -> CorrelationTriple {
    let [p00, p01, p10, p11] = spec.as_array();
    CorrelationTriple {
        c1: p00 + p01 - p10 - p11,
        c2: -p00 + p01 + p10 - p11,
        c3: p00 - p01 + p10 - p11,
    }
}

/// Trace-one Hermitian positive semidefinite matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants.
    pub fn new(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        check_register(n_qubits, &matrix)?;
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotAState(format!(
                "not Hermitian: max |ρ − ρ†| = {herm:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eigen(&matrix)?;
        let min = eig.min_eigenvalue();
        if min < STATE_EIGEN_FLOOR {
            return Err(Error::NotAState(format!(
                "min eigenvalue {min:.6e} is below {STATE_EIGEN_FLOOR:e}"
            )));
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Wraps a matrix without the spectral checks. Used for raw tomography output.
    pub fn new_unchecked(n_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        check_register(n_qubits, &matrix)?;
        Ok(Self { n_qubits, matrix })
    }

    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        if amplitudes.len() != 1 << n_qubits || n_qubits == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes is not a qubit register",
                amplitudes.len()
            )));
        }
        Self::new(n_qubits, ComplexMatrix::projector(amplitudes))
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            n_qubits,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self {
            n_qubits: a.n_qubits + b.n_qubits,
            matrix: kron(&a.matrix, &b.matrix),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Reduced state on the listed qubits.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let dims = vec![2; self.n_qubits];
        let matrix = partial_trace(&self.matrix, &dims, keep)?;
        Ok(Self {
            n_qubits: keep.len(),
            matrix,
        })
    }

    /// `Tr(ρ · op)`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        let n = self.matrix.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        acc.re
    }

    pub fn to_json(&self) -> DensityMatrixJson {
        let n = self.matrix.dim();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| self.matrix.row(i).iter().map(f).collect())
                .collect()
        };
        DensityMatrixJson {
            n_qubits: self.n_qubits,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    /// Parses and validates the JSON text format.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: DensityMatrixJson = serde_json::from_str(text)?;
        raw.into_state()
    }
}

fn check_register(n_qubits: usize, matrix: &ComplexMatrix) -> Result<()> {
    if n_qubits == 0 || n_qubits > 4 || matrix.dim() != 1 << n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for {n_qubits} qubits",
            matrix.dim(),
            matrix.dim()
        )));
    }
    Ok(())
}

/// `{ "n_qubits": n, "re": [[...]], "im": [[...]] }`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub n_qubits: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DensityMatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.re.len() != self.im.len()
            || self
                .re
                .iter()
                .zip(&self.im)
                .any(|(r, i)| r.len() != i.len())
        {
            return Err(Error::DimensionMismatch(
                "re and im arrays have different shapes".into(),
            ));
        }
        let rows: Vec<Vec<Complex64>> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| {
                r.iter()
                    .zip(i)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows)
    }

    pub fn into_state(self) -> Result<DensityMatrix> {
        let m = self.to_matrix()?;
        DensityMatrix::new(self.n_qubits, m)
    }
}

/// Amplitudes of `|β_jk⟩ = (|0,k⟩ + (−1)^j |1,k⊕1⟩)/√2`.
pub fn bell_vector(j: usize, k: usize) -> [Complex64; 4] {
    assert!(j < 2 && k < 2, "Bell labels are bits");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = [ZERO; 4];
    v[k] = ONE * h;
    v[2 + (k ^ 1)] = ONE * if j == 0 { h } else { -h };
    v
}

pub fn bell_state(j: usize, k: usize) -> DensityMatrix {
    DensityMatrix {
        n_qubits: 2,
        matrix: ComplexMatrix::projector(&bell_vector(j, k)),
    }
}

/// `ρ = Σ p_jk |β_jk⟩⟨β_jk|`.
pub fn bds_from_spec(spec: &BdsSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let mut m = ComplexMatrix::zeros(4);
    for j in 0..2 {
        for k in 0..2 {
            let term = ComplexMatrix::projector(&bell_vector(j, k)).scale_real(spec.get(j, k));
            m = &m + &term;
        }
    }
    Ok(DensityMatrix {
        n_qubits: 2,
        matrix: m,
    })
}

/// `(1−w)·I/4 + w·|β₁₁⟩⟨β₁₁|` for `w ∈ [0, 1]`.
pub fn werner(w: f64) -> Result<DensityMatrix> {
    check_range("w", w, 0.0, 1.0)?;
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - w) / 4.0);
    let singlet = bell_state(1, 1).matrix.scale_real(w);
    Ok(DensityMatrix {
        n_qubits: 2,
        matrix: &mixed + &singlet,
    })
}

/// Uhlmann fidelity `Tr√(√ρ σ √ρ)`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits != sigma.n_qubits {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between {}- and {}-qubit states",
            rho.n_qubits, sigma.n_qubits
        )));
    }
    let root = hermitian_eigen(&rho.matrix)?.map_spectrum(|l| l.max(0.0).sqrt());
    let inner = root.conjugate(&sigma.matrix).hermitian_part();
    let spectrum = hermitian_eigen(&inner)?.eigenvalues;
    let f: f64 = spectrum.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr(ρ · σ_j ⊗ σ_k)` for `j, k ∈ 0..4`.
pub fn pauli_expectation(rho: &DensityMatrix, j: usize, k: usize) -> f64 {
    rho.expectation(&kron(&pauli(j), &pauli(k)))
}
