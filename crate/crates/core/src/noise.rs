//! Single-qubit Kraus channels and the composite amplitude/phase damping model.

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::measures::{full_report, ResourceReport};
use crate::qmath::{kron_all, ComplexMatrix};
use crate::states::{werner, DensityMatrix};

/// Completeness tolerance on `Σ K†K − I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = operators
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?
            .dim();
        if operators.iter().any(|k| k.dim() != dim) {
            return Err(Error::InvalidChannel(
                "Kraus operators differ in dimension".into(),
            ));
        }
        let channel = Self { operators };
        let defect = channel.completeness_error();
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!(
                "sum of K†K deviates from identity by {defect:e}"
            )));
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// Max entry deviation of `Σ K†K` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }
}

/// Amplitude damping `a` composed with phase damping `p`:
/// `K₀ = √(p(1−a))|1⟩⟨1|`, `K₁ = √a|0⟩⟨1|`, `K₂ = |0⟩⟨0| + √((1−p)(1−a))|1⟩⟨1|`.
pub fn composite_damping(a: f64, p: f64) -> Result<KrausChannel> {
    check_range("a", a, 0.0, 1.0)?;
    check_range("p", p, 0.0, 1.0)?;
    let r =
        |rows: [[f64; 2]; 2]| ComplexMatrix::from_real_rows(&[&rows[0], &rows[1]]).expect("2x2");
    KrausChannel::new(vec![
        r([[0.0, 0.0], [0.0, (p * (1.0 - a)).sqrt()]]),
        r([[0.0, a.sqrt()], [0.0, 0.0]]),
        r([[1.0, 0.0], [0.0, ((1.0 - p) * (1.0 - a)).sqrt()]]),
    ])
}

/// `Σ_j K_j ρ K_j†` with each `K_j` acting on `qubit` and the identity elsewhere.
pub fn apply_channel(
    channel: &KrausChannel,
    rho: &DensityMatrix,
    qubit: usize,
) -> Result<DensityMatrix> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "single-qubit channel expected, got dimension {}",
            channel.dim()
        )));
    }
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::DimensionMismatch(format!(
            "qubit {qubit} out of range for {n} qubits"
        )));
    }
    let id = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::zeros(rho.matrix().dim());
    for k in channel.operators() {
        let full = kron_all((0..n).map(|q| if q == qubit { k } else { &id }));
        out = &out + &full.conjugate(rho.matrix());
    }
    DensityMatrix::new(n, out.hermitian_part())
}

/// Which qubit of the Werner pair the damping acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoisyQubit {
    #[default]
    A,
    B,
}

impl NoisyQubit {
    pub fn index(self) -> usize {
        match self {
            NoisyQubit::A => 0,
            NoisyQubit::B => 1,
        }
    }
}

/// Werner state with `composite_damping(a, p)` applied to one qubit.
pub fn decohered_werner(a: f64, p: f64, w: f64, qubit: NoisyQubit) -> Result<DensityMatrix> {
    apply_channel(&composite_damping(a, p)?, &werner(w)?, qubit.index())
}

/// `(w, report)` for each grid point, in grid order.
pub fn decohered_werner_sweep(
    a: f64,
    p: f64,
    w_grid: &[f64],
) -> Result<Vec<(f64, ResourceReport)>> {
    if w_grid.is_empty() {
        return Err(Error::InvalidProbabilities("empty w grid".into()));
    }
    let channel = composite_damping(a, p)?;
    w_grid
        .par_iter()
        .map(|&w| {
            let rho = apply_channel(&channel, &werner(w)?, 0)?;
            Ok((w, full_report(&rho)?))
        })
        .collect()
}
