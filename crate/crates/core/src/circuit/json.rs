//! Circuit JSON documents.
//!
//! ```json
//! {"n_qubits": 2, "cycles": [{"class": "hard", "gates": [{"kind": "RZZ", "qubits": [0, 1], "angle": -5.0000000000000000e-1}]}]}
//! ```
//!
//! Angles are written in scientific notation with 17 significant digits so
//! every `f64` survives a round trip bit-for-bit.

use serde::ser::Error as _;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{clifford::CliffordId, Axis, Circuit, Cycle, CycleClass, Gate, GateKind, Rotation};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitRecord {
    n_qubits: usize,
    cycles: Vec<CycleRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycleRecord {
    class: CycleClass,
    gates: Vec<GateRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clifford: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "serialize_angle")]
    angle: Option<f64>,
}

pub(crate) fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn serialize_angle<S: Serializer>(angle: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match angle {
        Some(x) if x.is_finite() => RawValue::from_string(format_float(*x))
            .map_err(S::Error::custom)?
            .serialize(s),
        Some(_) => Err(S::Error::custom("non-finite angle")),
        None => s.serialize_none(),
    }
}

fn gate_record(gate: &Gate) -> GateRecord {
    let mut rec = GateRecord {
        kind: gate.kind().name().to_string(),
        qubits: gate.qubits(),
        clifford: None,
        axis: None,
        angle: gate.angle(),
    };
    if let Gate::Local { clifford, rotation, .. } = gate {
        rec.clifford = Some(clifford.index());
        rec.axis = rotation.map(|r| r.axis);
    }
    rec
}

fn gate_from_record(rec: GateRecord, path: &str) -> Result<Gate> {
    let kind = GateKind::from_name(&rec.kind)
        .ok_or_else(|| Error::invalid_circuit(format!("{path}.kind"), format!("unknown gate kind '{}'", rec.kind)))?;
    if rec.qubits.len() != kind.arity() {
        return Err(Error::invalid_circuit(
            format!("{path}.qubits"),
            format!("{kind} takes {} qubit(s), got {}", kind.arity(), rec.qubits.len()),
        ));
    }
    if kind.arity() == 2 && rec.qubits[0] == rec.qubits[1] {
        return Err(Error::invalid_circuit(
            format!("{path}.qubits"),
            "qubit indices must be distinct",
        ));
    }
    let wants_angle = kind.is_parametric() || (kind == GateKind::C1 && rec.axis.is_some());
    match (wants_angle, rec.angle) {
        (true, None) => {
            return Err(Error::invalid_circuit(
                format!("{path}.angle"),
                format!("{kind} requires an angle"),
            ));
        }
        (false, Some(_)) => {
            return Err(Error::invalid_circuit(
                format!("{path}.angle"),
                format!("{kind} takes no angle"),
            ));
        }
        _ => {}
    }
    if kind != GateKind::C1 && (rec.clifford.is_some() || rec.axis.is_some()) {
        return Err(Error::invalid_circuit(
            path.to_string(),
            format!("'clifford' and 'axis' are only valid on C1 gates, not {kind}"),
        ));
    }
    let q = rec.qubits[0];
    let theta = rec.angle.unwrap_or(0.0);
    Ok(match kind {
        GateKind::H => Gate::H(q),
        GateKind::X => Gate::X(q),
        GateKind::Y => Gate::Y(q),
        GateKind::Z => Gate::Z(q),
        GateKind::S => Gate::S(q),
        GateKind::Sdg => Gate::Sdg(q),
        GateKind::Rx => Gate::Rx(q, theta),
        GateKind::Ry => Gate::Ry(q, theta),
        GateKind::Rz => Gate::Rz(q, theta),
        GateKind::Rzz => Gate::Rzz(q, rec.qubits[1], theta),
        GateKind::Cnot => Gate::Cnot(q, rec.qubits[1]),
        GateKind::Measure => Gate::Measure(q),
        GateKind::C1 => {
            let index = rec
                .clifford
                .ok_or_else(|| Error::invalid_circuit(format!("{path}.clifford"), "C1 requires a Clifford index"))?;
            let clifford = CliffordId::new(index).ok_or_else(|| {
                Error::invalid_circuit(format!("{path}.clifford"), format!("index {index} outside 0..24"))
            })?;
            Gate::Local {
                qubit: q,
                clifford,
                rotation: rec.axis.map(|axis| Rotation { axis, angle: theta }),
            }
        }
    })
}

pub fn circuit_to_json(c: &Circuit) -> Result<String> {
    let rec = CircuitRecord {
        n_qubits: c.n_qubits(),
        cycles: c
            .cycles()
            .iter()
            .map(|cy| CycleRecord {
                class: cy.class,
                gates: cy.gates.iter().map(gate_record).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&rec)?)
}

pub fn circuit_from_json(s: &str) -> Result<Circuit> {
    let de = &mut serde_json::Deserializer::from_str(s);
    let rec: CircuitRecord = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let mut cycles = Vec::with_capacity(rec.cycles.len());
    for (k, cy) in rec.cycles.into_iter().enumerate() {
        let gates = cy
            .gates
            .into_iter()
            .enumerate()
            .map(|(g, gr)| gate_from_record(gr, &format!("cycles[{k}].gates[{g}]")))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(Cycle::new(cy.class, gates));
    }
    Circuit::new(rec.n_qubits, cycles)
}
