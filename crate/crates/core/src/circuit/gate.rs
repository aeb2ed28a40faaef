use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{kron_all, ComplexMatrix, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    R,
    H,
    #[serde(rename = "SDG")]
    SDagger,
    U3,
    #[serde(rename = "CNOT")]
    Cnot,
}

/// One gate application. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Real rotation `[[cos x, −sin x], [sin x, cos x]]`.
    R {
        target: usize,
        angle: f64,
    },
    H {
        target: usize,
    },
    SDagger {
        target: usize,
    },
    U3 {
        target: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::R { .. } => GateKind::R,
            Gate::H { .. } => GateKind::H,
            Gate::SDagger { .. } => GateKind::SDagger,
            Gate::U3 { .. } => GateKind::U3,
            Gate::Cnot { .. } => GateKind::Cnot,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::R { angle, .. } => vec![angle],
            Gate::U3 {
                theta, phi, lambda, ..
            } => vec![theta, phi, lambda],
            _ => vec![],
        }
    }

    /// Qubit indices, control first for CNOT.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::R { target, .. }
            | Gate::H { target }
            | Gate::SDagger { target }
            | Gate::U3 { target, .. } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn from_parts(kind: GateKind, params: &[f64], targets: &[usize]) -> Result<Self> {
        let arity_err = || {
            Error::InvalidGate(format!(
                "{kind:?} with params {params:?} and targets {targets:?}"
            ))
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(arity_err());
        }
        let gate = match (kind, params, targets) {
            (GateKind::R, &[angle], &[target]) => Gate::R { target, angle },
            (GateKind::H, &[], &[target]) => Gate::H { target },
            (GateKind::SDagger, &[], &[target]) => Gate::SDagger { target },
            (GateKind::U3, &[theta, phi, lambda], &[target]) => Gate::U3 {
                target,
                theta,
                phi,
                lambda,
            },
            (GateKind::Cnot, &[], &[control, target]) if control != target => {
                Gate::Cnot { control, target }
            }
            _ => return Err(arity_err()),
        };
        Ok(gate)
    }

    /// 2×2 matrix for single-qubit gates, 4×4 (control ⊗ target) for CNOT.
    pub fn matrix(&self) -> ComplexMatrix {
        let c = |re: f64| Complex64::new(re, 0.0);
        let rows: Vec<Vec<Complex64>> = match *self {
            Gate::R { angle, .. } => {
                let (s, co) = angle.sin_cos();
                vec![vec![c(co), c(-s)], vec![c(s), c(co)]]
            }
            Gate::H { .. } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                vec![vec![c(h), c(h)], vec![c(h), c(-h)]]
            }
            Gate::SDagger { .. } => vec![vec![ONE, ZERO], vec![ZERO, -I]],
            Gate::U3 {
                theta, phi, lambda, ..
            } => {
                let (s, co) = (theta / 2.0).sin_cos();
                vec![
                    vec![c(co), -Complex64::from_polar(s, lambda)],
                    vec![
                        Complex64::from_polar(s, phi),
                        Complex64::from_polar(co, lambda + phi),
                    ],
                ]
            }
            Gate::Cnot { .. } => vec![
                vec![ONE, ZERO, ZERO, ZERO],
                vec![ZERO, ONE, ZERO, ZERO],
                vec![ZERO, ZERO, ZERO, ONE],
                vec![ZERO, ZERO, ONE, ZERO],
            ],
        };
        ComplexMatrix::from_rows(&rows).expect("square gate matrix")
    }

    /// Operator on the full `n_qubits` register built from tensor products.
    pub fn full_operator(&self, n_qubits: usize) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2);
        match *self {
            Gate::Cnot { control, target } => {
                let p0 = ComplexMatrix::from_diagonal(&[ONE, ZERO]);
                let p1 = ComplexMatrix::from_diagonal(&[ZERO, ONE]);
                let x = crate::qmath::pauli(1);
                let idle = kron_all((0..n_qubits).map(|q| if q == control { &p0 } else { &id }));
                let flip = kron_all((0..n_qubits).map(|q| {
                    if q == control {
                        &p1
                    } else if q == target {
                        &x
                    } else {
                        &id
                    }
                }));
                &idle + &flip
            }
            _ => {
                let u = self.matrix();
                let target = self.targets()[0];
                kron_all((0..n_qubits).map(|q| if q == target { &u } else { &id }))
            }
        }
    }
}

/// Wire form `{"kind": "...", "params": [...], "targets": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        GateRecord {
            kind: g.kind(),
            params: g.params(),
            targets: g.targets(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        Gate::from_parts(r.kind, &r.params, &r.targets)
    }
}
