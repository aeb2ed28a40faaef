//! Coherence, discord, negativity, steering and nonlocality of two-qubit states.

mod discord;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    hermitian_eigenvalues, kron, partial_transpose, pauli, trace_norm, ComplexMatrix, Subsystem,
};
use crate::states::DensityMatrix;

pub use discord::{
    discord_oz, mutual_information, optimize_measurement, DiscordOptions, MeasurementOptimum,
};

/// Values in `(−ROUND_OFF_FLOOR, 0)` are treated as exact zeros.
pub const ROUND_OFF_FLOOR: f64 = 1e-9;

pub(crate) fn clamp_round_off(x: f64) -> f64 {
    if x < 0.0 && x > -ROUND_OFF_FLOOR {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub coherence_l1: f64,
    pub nonlocal_coherence: f64,
    pub discord: f64,
    pub negativity: f64,
    pub steering: f64,
    pub nonlocality: f64,
}

impl ResourceReport {
    /// First link of `N > 0 ⇒ S > 0 ⇒ E > 0 ⇒ D > 0 ⇒ C > 0` that fails,
    /// where "> 0" means above `floor`.
    pub fn hierarchy_violation(&self, floor: f64) -> Option<&'static str> {
        let chain = [
            ("N", self.nonlocality),
            ("S", self.steering),
            ("E", self.negativity),
            ("D", self.discord),
            ("C", self.nonlocal_coherence.max(0.0)),
        ];
        const LINKS: [&str; 4] = [
            "N > 0 but S = 0",
            "S > 0 but E = 0",
            "E > 0 but D = 0",
            "D > 0 but C = 0",
        ];
        chain
            .windows(2)
            .zip(LINKS)
            .find(|(pair, _)| pair[0].1 > floor && pair[1].1 <= floor)
            .map(|(_, msg)| msg)
    }
}

/// Local Bloch vectors and correlation matrix:
/// `ρ = ¼ (I + a·σ ⊗ I + I ⊗ b·σ + Σ corr_jk σ_j ⊗ σ_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDecomposition {
    pub a_vec: [f64; 3],
    pub b_vec: [f64; 3],
    pub corr: [[f64; 3]; 3],
}

impl BlochDecomposition {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut c = [[0.0; 4]; 4];
        c[0][0] = 1.0;
        for j in 0..3 {
            c[j + 1][0] = self.a_vec[j];
            c[0][j + 1] = self.b_vec[j];
            for k in 0..3 {
                c[j + 1][k + 1] = self.corr[j][k];
            }
        }
        let mut out = ComplexMatrix::zeros(4);
        for (j, row) in c.iter().enumerate() {
            for (k, &x) in row.iter().enumerate() {
                if x != 0.0 {
                    out = &out + &kron(&pauli(j), &pauli(k)).scale_real(x / 4.0);
                }
            }
        }
        out
    }
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state required, got {} qubits",
            rho.n_qubits()
        )));
    }
    Ok(())
}

/// Sum of off-diagonal moduli in the computational basis.
pub fn coherence_l1(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// `C_l1(ρ) − C_l1(ρ_a) − C_l1(ρ_b)`; not clamped.
pub fn nonlocal_coherence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let local = coherence_l1(&rho.reduce(&[0])?) + coherence_l1(&rho.reduce(&[1])?);
    Ok(clamp_round_off(coherence_l1(rho) - local))
}

/// `‖ρ^{T_b}‖₁ − 1`, clamped at 0.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let pt = partial_transpose(rho.matrix(), (2, 2), Subsystem::B)?;
    Ok(clamp_round_off(trace_norm(&pt)? - 1.0).max(0.0))
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    require_two_qubits(rho)?;
    let c = |j: usize, k: usize| rho.expectation(&kron(&pauli(j), &pauli(k)));
    let mut out = BlochDecomposition {
        a_vec: [0.0; 3],
        b_vec: [0.0; 3],
        corr: [[0.0; 3]; 3],
    };
    for j in 0..3 {
        out.a_vec[j] = c(j + 1, 0);
        out.b_vec[j] = c(0, j + 1);
        for k in 0..3 {
            out.corr[j][k] = c(j + 1, k + 1);
        }
    }
    Ok(out)
}

/// Eigenvalues of `TᵀT`, descending, clipped at 0: the squared singular values.
fn squared_singular_values(corr: &[[f64; 3]; 3]) -> [f64; 3] {
    let mut gram = [[0.0; 3]; 3];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|k| corr[k][i] * corr[k][j]).sum();
        }
    }
    let rows: Vec<&[f64]> = gram.iter().map(|r| r.as_slice()).collect();
    let m = ComplexMatrix::from_real_rows(&rows).expect("3x3 gram matrix");
    let eig = hermitian_eigenvalues(&m).expect("gram matrix is symmetric");
    [eig[2].max(0.0), eig[1].max(0.0), eig[0].max(0.0)]
}

/// Singular values of `corr`, descending.
pub fn correlation_vector(corr: &[[f64; 3]; 3]) -> [f64; 3] {
    squared_singular_values(corr).map(f64::sqrt)
}

/// `max(0, (‖c‖ − 1)/(√3 − 1))`.
pub fn steering(rho: &DensityMatrix) -> Result<f64> {
    let s2 = squared_singular_values(&bloch_decompose(rho)?.corr);
    let norm = s2.iter().sum::<f64>().sqrt();
    Ok(clamp_round_off((norm - 1.0) / (3f64.sqrt() - 1.0)).max(0.0))
}

/// `max(0, (√(‖c‖² − c_min²) − 1)/(√2 − 1))`.
pub fn nonlocality(rho: &DensityMatrix) -> Result<f64> {
    let s2 = squared_singular_values(&bloch_decompose(rho)?.corr);
    let top_two = (s2[0] + s2[1]).sqrt();
    Ok(clamp_round_off((top_two - 1.0) / (2f64.sqrt() - 1.0)).max(0.0))
}

pub fn full_report(rho: &DensityMatrix) -> Result<ResourceReport> {
    full_report_with(rho, &DiscordOptions::default())
}

pub fn full_report_with(rho: &DensityMatrix, opts: &DiscordOptions) -> Result<ResourceReport> {
    require_two_qubits(rho)?;
    Ok(ResourceReport {
        coherence_l1: coherence_l1(rho),
        nonlocal_coherence: nonlocal_coherence(rho)?,
        discord: discord_oz(rho, opts)?,
        negativity: negativity(rho)?,
        steering: steering(rho)?,
        nonlocality: nonlocality(rho)?,
    })
}
