use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::qmath::Pauli;

/// Logical-to-physical qubit map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(physical: Vec<usize>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(dup) = physical.iter().find(|&&p| !seen.insert(p)) {
            return Err(Error::InvalidLayout(format!(
                "physical qubit {dup} assigned twice"
            )));
        }
        Ok(Self(physical))
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self((0..n_qubits).collect())
    }

    /// a→Q1, b→Q3, c→Q2, d→Q4.
    pub fn device_default() -> Self {
        Self(vec![1, 3, 2, 4])
    }

    pub fn physical(&self, logical: usize) -> Option<usize> {
        self.0.get(logical).copied()
    }

    fn register_size(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }
}

impl FromStr for Layout {
    type Err = Error;

    /// Parses `a:1,b:3,c:2,d:4`; logical qubits may be letters `a..` or indices.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (logical, physical) = item.split_once(':').ok_or_else(|| {
                Error::InvalidLayout(format!("expected name:index, got {item:?}"))
            })?;
            let logical = parse_logical(logical.trim())?;
            let physical: usize = physical
                .trim()
                .parse()
                .map_err(|_| Error::InvalidLayout(format!("bad physical index in {item:?}")))?;
            pairs.push((logical, physical));
        }
        pairs.sort_unstable();
        if pairs.is_empty() || pairs.iter().enumerate().any(|(i, &(l, _))| l != i) {
            return Err(Error::InvalidLayout(format!(
                "{s:?} must map each logical qubit exactly once"
            )));
        }
        Layout::new(pairs.into_iter().map(|(_, p)| p).collect())
    }
}

fn parse_logical(name: &str) -> Result<usize> {
    let mut chars = name.chars();
    match (chars.next(), chars.next()) {
        (Some(c @ 'a'..='z'), None) => Ok(c as usize - 'a' as usize),
        _ => name
            .parse()
            .map_err(|_| Error::InvalidLayout(format!("unknown logical qubit {name:?}"))),
    }
}

/// Renders an angle, using `pi` fractions when the value is one.
pub fn format_angle(x: f64) -> String {
    if x.abs() < 1e-15 {
        return "0".into();
    }
    let ratio = x / PI;
    for den in [1i64, 2, 3, 4, 6, 8, 12] {
        let num = (ratio * den as f64).round();
        if num != 0.0 && (ratio * den as f64 - num).abs() < 1e-12 {
            let num = num as i64;
            let sign = if num < 0 { "-" } else { "" };
            let coeff = match num.abs() {
                1 => String::new(),
                n => format!("{n}*"),
            };
            return if den == 1 {
                format!("{sign}{coeff}pi")
            } else {
                format!("{sign}{coeff}pi/{den}")
            };
        }
    }
    let s = format!("{x:.15}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// OpenQASM 2.0 text for `circ` under `layout`.
///
/// `measurements` lists logical qubits to measure and the Pauli basis for each;
/// results land in classical bits in list order. X is measured after `h`, Y
/// after `sdg` then `h`.
pub fn to_qasm(circ: &Circuit, layout: &Layout, measurements: &[(usize, Pauli)]) -> Result<String> {
    let phys = |q: usize| {
        layout.physical(q).ok_or_else(|| {
            Error::InvalidLayout(format!("logical qubit {q} has no physical assignment"))
        })
    };
    for q in 0..circ.n_qubits() {
        phys(q)?;
    }

    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", layout.register_size()).unwrap();
    if !measurements.is_empty() {
        writeln!(out, "creg c[{}];", measurements.len()).unwrap();
    }

    for gate in circ.gates() {
        match *gate {
            Gate::R { target, angle } => writeln!(
                out,
                "u3({},0,0) q[{}];",
                format_angle(2.0 * angle),
                phys(target)?
            ),
            Gate::U3 {
                target,
                theta,
                phi,
                lambda,
            } => writeln!(
                out,
                "u3({},{},{}) q[{}];",
                format_angle(theta),
                format_angle(phi),
                format_angle(lambda),
                phys(target)?
            ),
            Gate::H { target } => writeln!(out, "h q[{}];", phys(target)?),
            Gate::SDagger { target } => writeln!(out, "sdg q[{}];", phys(target)?),
            Gate::Cnot { control, target } => {
                writeln!(out, "cx q[{}],q[{}];", phys(control)?, phys(target)?)
            }
        }
        .unwrap();
    }

    for &(q, basis) in measurements {
        if q >= circ.n_qubits() {
            return Err(Error::InvalidLayout(format!(
                "cannot measure qubit {q} of a {}-qubit circuit",
                circ.n_qubits()
            )));
        }
        let p = phys(q)?;
        match basis {
            Pauli::X => writeln!(out, "h q[{p}];").unwrap(),
            Pauli::Y => writeln!(out, "sdg q[{p}];\nh q[{p}];").unwrap(),
            Pauli::Z => {}
        }
    }
    for (bit, &(q, _)) in measurements.iter().enumerate() {
        writeln!(out, "measure q[{}] -> c[{bit}];", phys(q)?).unwrap();
    }
    Ok(out)
}
