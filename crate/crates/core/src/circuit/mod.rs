//! Gate set, circuits, state-vector simulation, Bell-diagonal preparation and
//! OpenQASM 2.0 export.

mod gate;
mod prep;
mod qasm;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, ONE, ZERO};

pub use gate::{Gate, GateKind, GateRecord};
pub use prep::{
    angles_from_spec, build_bds_circuit, prepare_purification, prepared_state, probs_from_angles,
    tunable_angles, tunable_bds_circuit, AnglePair, TunableAngles, QUBIT_A, QUBIT_B, QUBIT_C,
    QUBIT_D,
};
pub use qasm::{format_angle, to_qasm, Layout};

/// Ordered gate list on a register of `n_qubits` qubits (qubit 0 is the most
/// significant bit of a basis index).
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "empty register");
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        if let Some(&bad) = gate.targets().iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::InvalidGate(format!(
                "{gate:?} touches qubit {bad} of a {}-qubit register",
                self.n_qubits
            )));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Product of the gates' full-register operators, last gate leftmost.
    pub fn unitary(&self) -> ComplexMatrix {
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(1 << self.n_qubits), |acc, g| {
                &g.full_operator(self.n_qubits) * &acc
            })
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().map(GateRecord::from).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: CircuitJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

/// `{ "n_qubits": n, "gates": [{"kind": ..., "params": [...], "targets": [...]}] }`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n_qubits: usize,
    pub gates: Vec<GateRecord>,
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(raw: CircuitJson) -> Result<Self> {
        if raw.n_qubits == 0 {
            return Err(Error::InvalidGate("register has no qubits".into()));
        }
        let mut circ = Circuit::new(raw.n_qubits);
        for record in raw.gates {
            circ.push(Gate::try_from(record)?)?;
        }
        Ok(circ)
    }
}

/// Computational basis vector `|index⟩` on `n_qubits` qubits.
pub fn basis_state(n_qubits: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; 1 << n_qubits];
    v[index] = ONE;
    v
}

/// Applies the circuit to an amplitude vector.
pub fn simulate_statevector(circ: &Circuit, input: &[Complex64]) -> Result<Vec<Complex64>> {
    let dim = 1usize << circ.n_qubits;
    if input.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes for a {}-qubit circuit",
            input.len(),
            circ.n_qubits
        )));
    }
    let norm = input.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm });
    }
    let mut state = input.to_vec();
    for gate in &circ.gates {
        apply_gate(&mut state, circ.n_qubits, gate);
    }
    Ok(state)
}

fn bit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

fn apply_gate(state: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Cnot { control, target } => {
            let cm = bit_mask(n_qubits, control);
            let tm = bit_mask(n_qubits, target);
            for i in 0..state.len() {
                if i & cm != 0 && i & tm == 0 {
                    state.swap(i, i | tm);
                }
            }
        }
        _ => {
            let u = gate.matrix();
            let tm = bit_mask(n_qubits, gate.targets()[0]);
            for i in 0..state.len() {
                if i & tm == 0 {
                    let (a0, a1) = (state[i], state[i | tm]);
                    state[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                    state[i | tm] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
                }
            }
        }
    }
}
