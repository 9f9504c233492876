//! Cycle-structured circuits and the gate algebra the rewriting passes use.

pub mod clifford;
mod json;
pub mod matrix;
pub mod pauli;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use clifford::{conjugate_clifford_through_cycle, CliffordCorrection, CliffordId, SingleQubitClifford};
pub use json::{circuit_from_json, circuit_to_json};
pub use matrix::{circuit_unitary, DEFAULT_UNITARY_LIMIT};
pub use pauli::{conjugate_pauli_through_gate, Axis, Pauli, PauliString};

use crate::error::{Error, Result};

pub type Qubit = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    Rx,
    Ry,
    Rz,
    Rzz,
    Cnot,
    Measure,
    /// Single-qubit Clifford from the 24-element table, optionally followed
    /// by an axis rotation. Produced when frames are folded into easy cycles.
    C1,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "SDG",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Rzz => "RZZ",
            GateKind::Cnot => "CNOT",
            GateKind::Measure => "MEASURE",
            GateKind::C1 => "C1",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        const KINDS: [GateKind; 13] = [
            GateKind::H,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::Rx,
            GateKind::Ry,
            GateKind::Rz,
            GateKind::Rzz,
            GateKind::Cnot,
            GateKind::Measure,
            GateKind::C1,
        ];
        KINDS.into_iter().find(|k| k.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Rzz | GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn is_parametric(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub axis: Axis,
    pub angle: f64,
}

/// Rotations follow `R_P(θ) = exp(-i θ/2 P)`; `Rzz(a, b, θ) = exp(-i θ/2 Z_a Z_b)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(Qubit),
    X(Qubit),
    Y(Qubit),
    Z(Qubit),
    S(Qubit),
    Sdg(Qubit),
    Rx(Qubit, f64),
    Ry(Qubit, f64),
    Rz(Qubit, f64),
    Rzz(Qubit, Qubit, f64),
    /// `Cnot(control, target)`
    Cnot(Qubit, Qubit),
    Measure(Qubit),
    /// `rotation · clifford` (the Clifford acts first).
    Local {
        qubit: Qubit,
        clifford: CliffordId,
        rotation: Option<Rotation>,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Y(_) => GateKind::Y,
            Gate::Z(_) => GateKind::Z,
            Gate::S(_) => GateKind::S,
            Gate::Sdg(_) => GateKind::Sdg,
            Gate::Rx(..) => GateKind::Rx,
            Gate::Ry(..) => GateKind::Ry,
            Gate::Rz(..) => GateKind::Rz,
            Gate::Rzz(..) => GateKind::Rzz,
            Gate::Cnot(..) => GateKind::Cnot,
            Gate::Measure(_) => GateKind::Measure,
            Gate::Local { .. } => GateKind::C1,
        }
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::Rx(q, _)
            | Gate::Ry(q, _)
            | Gate::Rz(q, _)
            | Gate::Measure(q)
            | Gate::Local { qubit: q, .. } => vec![q],
            Gate::Rzz(a, b, _) | Gate::Cnot(a, b) => vec![a, b],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) | Gate::Rzz(_, _, t) => Some(t),
            Gate::Local { rotation: Some(r), .. } => Some(r.angle),
            _ => None,
        }
    }

    /// Same gate with its angle replaced; non-parametric gates are unchanged.
    pub fn with_angle(&self, angle: f64) -> Gate {
        match *self {
            Gate::Rx(q, _) => Gate::Rx(q, angle),
            Gate::Ry(q, _) => Gate::Ry(q, angle),
            Gate::Rz(q, _) => Gate::Rz(q, angle),
            Gate::Rzz(a, b, _) => Gate::Rzz(a, b, angle),
            Gate::Local {
                qubit,
                clifford,
                rotation: Some(r),
            } => Gate::Local {
                qubit,
                clifford,
                rotation: Some(Rotation { angle, ..r }),
            },
            ref other => other.clone(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind().arity() == 2
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs = self.qubits();
        write!(f, "{}", self.kind())?;
        if let Gate::Local { clifford, .. } = self {
            write!(f, "[{clifford}]")?;
        }
        if let Some(theta) = self.angle() {
            write!(f, "({theta})")?;
        }
        write!(f, " on {qs:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleClass {
    Easy,
    Hard,
    Measurement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub class: CycleClass,
    pub gates: Vec<Gate>,
}

impl Cycle {
    pub fn new(class: CycleClass, gates: Vec<Gate>) -> Self {
        Cycle { class, gates }
    }

    pub fn easy(gates: Vec<Gate>) -> Self {
        Cycle::new(CycleClass::Easy, gates)
    }

    pub fn hard(gates: Vec<Gate>) -> Self {
        Cycle::new(CycleClass::Hard, gates)
    }

    pub fn measurement(n_qubits: usize) -> Self {
        Cycle::new(CycleClass::Measurement, (0..n_qubits).map(Gate::Measure).collect())
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Gate acting on `q`, if any.
    pub fn gate_on(&self, q: Qubit) -> Option<&Gate> {
        self.gates.iter().find(|g| g.qubits().contains(&q))
    }

    fn validate(&self, n_qubits: usize, path: &str) -> Result<()> {
        let mut used = HashSet::new();
        for (k, gate) in self.gates.iter().enumerate() {
            let gpath = format!("{path}.gates[{k}]");
            let qs = gate.qubits();
            for &q in &qs {
                if q >= n_qubits {
                    return Err(Error::invalid_circuit(
                        format!("{gpath}.qubits"),
                        format!("qubit {q} out of range for {n_qubits} qubits"),
                    ));
                }
                if !used.insert(q) {
                    return Err(Error::invalid_circuit(
                        format!("{gpath}.qubits"),
                        format!("qubit {q} appears in more than one gate of the cycle"),
                    ));
                }
            }
            if let Some(theta) = gate.angle() {
                if !theta.is_finite() {
                    return Err(Error::invalid_circuit(format!("{gpath}.angle"), "angle is not finite"));
                }
            }
            let ok = match self.class {
                CycleClass::Hard => gate.is_two_qubit(),
                CycleClass::Measurement => gate.kind() == GateKind::Measure,
                CycleClass::Easy => !gate.is_two_qubit() && gate.kind() != GateKind::Measure,
            };
            if !ok {
                return Err(Error::invalid_circuit(
                    format!("{gpath}.kind"),
                    format!("{} gate not allowed in a {:?} cycle", gate.kind(), self.class),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    cycles: Vec<Cycle>,
}

impl Circuit {
    /// Builds a circuit, checking every structural invariant.
    pub fn new(n_qubits: usize, cycles: Vec<Cycle>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid_circuit("n_qubits", "must be positive"));
        }
        for (k, cycle) in cycles.iter().enumerate() {
            cycle.validate(n_qubits, &format!("cycles[{k}]"))?;
            if cycle.class == CycleClass::Measurement && k + 1 != cycles.len() {
                return Err(Error::invalid_circuit(
                    format!("cycles[{k}].class"),
                    "a measurement cycle must be the last cycle",
                ));
            }
        }
        Ok(Circuit { n_qubits, cycles })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.cycles.iter().flat_map(|c| c.gates.iter())
    }

    pub fn has_measurement(&self) -> bool {
        self.cycles.iter().any(|c| c.class == CycleClass::Measurement)
    }

    /// The circuit with its measurement cycle removed.
    pub fn without_measurement(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            cycles: self
                .cycles
                .iter()
                .filter(|c| c.class != CycleClass::Measurement)
                .cloned()
                .collect(),
        }
    }

    pub fn hard_cycle_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.class == CycleClass::Hard).count()
    }

    pub fn easy_cycle_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.class == CycleClass::Easy).count()
    }

    /// Inserts empty easy cycles so every hard cycle has an easy cycle on
    /// both sides. Idempotent.
    pub fn normalized(&self) -> Circuit {
        let mut cycles: Vec<Cycle> = Vec::with_capacity(self.cycles.len() * 2);
        for cycle in &self.cycles {
            let prev_is_easy = cycles.last().is_some_and(|c| c.class == CycleClass::Easy);
            let needs_gap = match cycle.class {
                CycleClass::Hard => !prev_is_easy,
                CycleClass::Easy => false,
                CycleClass::Measurement => cycles.last().is_some_and(|c| c.class == CycleClass::Hard),
            };
            if needs_gap {
                cycles.push(Cycle::easy(Vec::new()));
            }
            cycles.push(cycle.clone());
        }
        if cycles.last().is_some_and(|c| c.class == CycleClass::Hard) {
            cycles.push(Cycle::easy(Vec::new()));
        }
        Circuit {
            n_qubits: self.n_qubits,
            cycles,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_qubit_in_cycle_is_rejected() {
        let err = Circuit::new(2, vec![Cycle::easy(vec![Gate::H(0), Gate::X(0)])]).unwrap_err();
        assert!(err.to_string().contains("cycles[0].gates[1].qubits"), "{err}");
    }

    #[test]
    fn hard_cycles_only_hold_two_qubit_gates() {
        assert!(Circuit::new(2, vec![Cycle::hard(vec![Gate::H(0)])]).is_err());
        assert!(Circuit::new(2, vec![Cycle::easy(vec![Gate::Cnot(0, 1)])]).is_err());
    }

    #[test]
    fn measurement_must_be_last() {
        let cycles = vec![Cycle::measurement(2), Cycle::easy(vec![Gate::H(0)])];
        assert!(Circuit::new(2, cycles).is_err());
    }

    #[test]
    fn out_of_range_qubit_is_rejected() {
        assert!(Circuit::new(2, vec![Cycle::hard(vec![Gate::Rzz(0, 2, 0.1)])]).is_err());
    }

    #[test]
    fn normalization_separates_hard_cycles() {
        let c = Circuit::new(
            2,
            vec![
                Cycle::hard(vec![Gate::Cnot(0, 1)]),
                Cycle::hard(vec![Gate::Cnot(1, 0)]),
                Cycle::measurement(2),
            ],
        )
        .unwrap();
        let n = c.normalized();
        let classes: Vec<_> = n.cycles().iter().map(|c| c.class).collect();
        use CycleClass::*;
        assert_eq!(classes, vec![Easy, Hard, Easy, Hard, Easy, Measurement]);
        assert_eq!(n.normalized(), n);
    }
}
