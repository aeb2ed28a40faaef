//! Bell-diagonal state preparation on four qubits `a, b, c, d`.
//!
//! Qubits `a, b` hold the classical label `(j, k)` in superposition with
//! amplitudes `√p_jk`; two CNOTs copy it onto `c, d`, and a Hadamard on `c`
//! followed by CNOT `c → d` rotates `|j, k⟩_cd` into `|β_jk⟩`. Tracing out
//! `a, b` leaves `Σ p_jk |β_jk⟩⟨β_jk|` on `c, d`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{basis_state, simulate_statevector, Circuit, Gate};
use crate::error::{check_range, Result};
use crate::qmath::ComplexMatrix;
use crate::states::{BdsSpec, DensityMatrix};

pub const QUBIT_A: usize = 0;
pub const QUBIT_B: usize = 1;
pub const QUBIT_C: usize = 2;
pub const QUBIT_D: usize = 3;

/// Rotation angles `(θ, α)`, each in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub theta: f64,
    pub alpha: f64,
}

impl AnglePair {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI)?;
        check_range("alpha", alpha, 0.0, PI)?;
        Ok(Self { theta, alpha })
    }
}

fn half_angle_from_cos_sq(x: f64) -> f64 {
    2.0 * x.clamp(0.0, 1.0).sqrt().acos()
}

/// `θ = 2 arccos √(p00 + p01)`, `α = 2 arccos √(p00 + p10)`.
pub fn angles_from_spec(spec: &BdsSpec) -> AnglePair {
    AnglePair {
        theta: half_angle_from_cos_sq(spec.p00 + spec.p01),
        alpha: half_angle_from_cos_sq(spec.p00 + spec.p10),
    }
}

/// Product weights `p_jk = P_θ(j)·P_α(k)` with `P_x(0) = cos²(x/2)`.
pub fn probs_from_angles(angles: &AnglePair) -> BdsSpec {
    let (c_t, s_t) = (
        (angles.theta / 2.0).cos().powi(2),
        (angles.theta / 2.0).sin().powi(2),
    );
    let (c_a, s_a) = (
        (angles.alpha / 2.0).cos().powi(2),
        (angles.alpha / 2.0).sin().powi(2),
    );
    BdsSpec {
        p00: c_t * c_a,
        p01: c_t * s_a,
        p10: s_t * c_a,
        p11: s_t * s_a,
    }
}

/// Six-gate circuit preparing the product weights of [`probs_from_angles`]:
/// `R(θ/2)` on a, `R(α/2)` on b, CNOT a→c, CNOT b→d, H on c, CNOT c→d.
pub fn build_bds_circuit(angles: &AnglePair) -> Circuit {
    let mut circ = Circuit::new(4);
    push_all(
        &mut circ,
        &[
            Gate::R {
                target: QUBIT_A,
                angle: angles.theta / 2.0,
            },
            Gate::R {
                target: QUBIT_B,
                angle: angles.alpha / 2.0,
            },
        ],
    );
    push_bell_stage(&mut circ);
    circ
}

/// Angles for an arbitrary spec: `θ` on a, and the rotation of b conditioned
/// on the value of a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunableAngles {
    pub theta: f64,
    /// `2 arccos √(p00 / (p00 + p01))`
    pub alpha_given_a0: f64,
    /// `2 arccos √(p10 / (p10 + p11))`
    pub alpha_given_a1: f64,
}

impl TunableAngles {
    /// True when b's rotation does not depend on a (product weights).
    pub fn is_product(&self) -> bool {
        (self.alpha_given_a0 - self.alpha_given_a1).abs() <= 1e-12
    }
}

fn conditional_angle(hit: f64, total: f64) -> Option<f64> {
    (total > 0.0).then(|| half_angle_from_cos_sq(hit / total))
}

/// A branch of a with zero weight borrows the other branch's angle.
pub fn tunable_angles(spec: &BdsSpec) -> TunableAngles {
    let given_0 = conditional_angle(spec.p00, spec.p00 + spec.p01);
    let given_1 = conditional_angle(spec.p10, spec.p10 + spec.p11);
    let fallback = given_0.or(given_1).unwrap_or(0.0);
    TunableAngles {
        theta: angles_from_spec(spec).theta,
        alpha_given_a0: given_0.unwrap_or(fallback),
        alpha_given_a1: given_1.unwrap_or(fallback),
    }
}

/// Circuit preparing any Bell-diagonal state.
///
/// b receives `R(u)`, CNOT a→b, `R(v)`, CNOT a→b with `u ± v` equal to the two
/// conditional half-angles; since `X·R(v)·X = R(−v)`, b ends up rotated by
/// `R(u + v)` when a = 0 and `R(u − v)` when a = 1. For product weights
/// `v = 0` and the block collapses to a single `R(α/2)`, giving the six-gate
/// circuit of [`build_bds_circuit`].
pub fn tunable_bds_circuit(spec: &BdsSpec) -> Result<Circuit> {
    spec.validate()?;
    let angles = tunable_angles(spec);
    let mut circ = Circuit::new(4);
    circ.push(Gate::R {
        target: QUBIT_A,
        angle: angles.theta / 2.0,
    })?;
    if angles.is_product() {
        circ.push(Gate::R {
            target: QUBIT_B,
            angle: angles.alpha_given_a0 / 2.0,
        })?;
    } else {
        let (h0, h1) = (angles.alpha_given_a0 / 2.0, angles.alpha_given_a1 / 2.0);
        let flip = Gate::Cnot {
            control: QUBIT_A,
            target: QUBIT_B,
        };
        push_all(
            &mut circ,
            &[
                Gate::R {
                    target: QUBIT_B,
                    angle: (h0 + h1) / 2.0,
                },
                flip,
                Gate::R {
                    target: QUBIT_B,
                    angle: (h0 - h1) / 2.0,
                },
                flip,
            ],
        );
    }
    push_bell_stage(&mut circ);
    Ok(circ)
}

fn push_bell_stage(circ: &mut Circuit) {
    push_all(
        circ,
        &[
            Gate::Cnot {
                control: QUBIT_A,
                target: QUBIT_C,
            },
            Gate::Cnot {
                control: QUBIT_B,
                target: QUBIT_D,
            },
            Gate::H { target: QUBIT_C },
            Gate::Cnot {
                control: QUBIT_C,
                target: QUBIT_D,
            },
        ],
    );
}

fn push_all(circ: &mut Circuit, gates: &[Gate]) {
    for &g in gates {
        circ.push(g)
            .expect("preparation gates fit a 4-qubit register");
    }
}

/// The four-qubit output `|τ⟩_abcd` of [`tunable_bds_circuit`] on `|0000⟩`.
pub fn prepare_purification(spec: &BdsSpec) -> Result<Vec<Complex64>> {
    let circ = tunable_bds_circuit(spec)?;
    simulate_statevector(&circ, &basis_state(4, 0))
}

/// Simulates the preparation circuit and traces out `a, b`.
pub fn prepared_state(spec: &BdsSpec) -> Result<DensityMatrix> {
    let tau = prepare_purification(spec)?;
    let full = DensityMatrix::new_unchecked(4, ComplexMatrix::projector(&tau))?;
    full.reduce(&[QUBIT_C, QUBIT_D])
}
