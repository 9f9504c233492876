//! Folding frame gates into easy cycles.
//!
//! Every single-qubit gate is viewed as a pair `(C, R)` meaning "Clifford `C`,
//! then optional axis rotation `R`". Folding a Clifford on either side keeps
//! that shape, so a qubit never carries more than one gate per easy cycle.

use crate::circuit::clifford::table;
use crate::circuit::{Axis, CliffordId, Cycle, Gate, Qubit, Rotation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The frame acts before the cycle's gates.
    Before,
    /// The frame acts after the cycle's gates.
    After,
}

/// `(Clifford, rotation)` word of a single-qubit gate.
pub fn canonical_word(gate: &Gate) -> Option<(CliffordId, Option<Rotation>)> {
    let rot = |axis, angle| Some(Rotation { axis, angle });
    match *gate {
        Gate::Rx(_, t) => Some((CliffordId::IDENTITY, rot(Axis::X, t))),
        Gate::Ry(_, t) => Some((CliffordId::IDENTITY, rot(Axis::Y, t))),
        Gate::Rz(_, t) => Some((CliffordId::IDENTITY, rot(Axis::Z, t))),
        Gate::Local { clifford, rotation, .. } => Some((clifford, rotation)),
        ref g => table().id_of_gate(g).map(|c| (c, None)),
    }
}

/// The simplest gate equal to the word, or `None` for the identity.
pub fn gate_from_word(qubit: Qubit, clifford: CliffordId, rotation: Option<Rotation>) -> Option<Gate> {
    match (clifford.is_identity(), rotation) {
        (true, None) => None,
        (false, None) => Some(table().named_gate(clifford, qubit).unwrap_or(Gate::Local {
            qubit,
            clifford,
            rotation: None,
        })),
        (true, Some(Rotation { axis, angle })) => Some(match axis {
            Axis::X => Gate::Rx(qubit, angle),
            Axis::Y => Gate::Ry(qubit, angle),
            Axis::Z => Gate::Rz(qubit, angle),
        }),
        (false, Some(_)) => Some(Gate::Local {
            qubit,
            clifford,
            rotation,
        }),
    }
}

/// `F · R_a(θ) = R_b(σθ) · F` where `F a F† = σ b`.
fn move_rotation_through(f: CliffordId, rot: Rotation) -> Rotation {
    let (sign, image) = table().get(f).image(rot.axis.pauli());
    Rotation {
        axis: Axis::from_pauli(image).expect("Cliffords map axes to axes"),
        angle: if sign < 0 { -rot.angle } else { rot.angle },
    }
}

fn fold_word(word: (CliffordId, Option<Rotation>), frame: CliffordId, side: Side) -> (CliffordId, Option<Rotation>) {
    let t = table();
    let (c, rot) = word;
    match side {
        // R·C·F
        Side::Before => (t.compose(c, frame), rot),
        // F·R·C = R'·F·C
        Side::After => (t.compose(frame, c), rot.map(|r| move_rotation_through(frame, r))),
    }
}

/// Merges per-qubit frame Cliffords (indexed by register qubit) into an easy
/// cycle. Identity entries leave their qubit untouched.
pub fn fold_frame_into_easy_cycle(easy: &Cycle, frame: &[CliffordId], side: Side) -> Cycle {
    let mut gates = Vec::with_capacity(easy.gates.len());
    let mut covered = vec![false; frame.len()];
    for gate in &easy.gates {
        let q = gate.qubits()[0];
        let f = frame.get(q).copied().unwrap_or(CliffordId::IDENTITY);
        if q < covered.len() {
            covered[q] = true;
        }
        if f.is_identity() {
            gates.push(gate.clone());
            continue;
        }
        let word = canonical_word(gate).expect("easy cycles hold single-qubit unitaries");
        let (c, rot) = fold_word(word, f, side);
        gates.extend(gate_from_word(q, c, rot));
    }
    for (q, &f) in frame.iter().enumerate() {
        if !covered[q] && !f.is_identity() {
            gates.extend(gate_from_word(q, f, None));
        }
    }
    Cycle::new(easy.class, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::matrix::{circuit_unitary, distance_up_to_phase, mul2, single_qubit_matrix};
    use crate::circuit::{Circuit, CycleClass};
    use proptest::prelude::*;

    fn id(g: Gate) -> CliffordId {
        table().id_of_gate(&g).unwrap()
    }

    #[test]
    fn x_after_x_cancels() {
        let easy = Cycle::easy(vec![Gate::X(0)]);
        let out = fold_frame_into_easy_cycle(&easy, &[id(Gate::X(0))], Side::After);
        assert!(out.gates.is_empty());
    }

    #[test]
    fn z_before_rx_is_rx_times_z() {
        let theta = 0.83;
        let easy = Cycle::easy(vec![Gate::Rx(0, theta)]);
        let out = fold_frame_into_easy_cycle(&easy, &[id(Gate::Z(0))], Side::Before);
        assert_eq!(out.gates.len(), 1);
        let got = single_qubit_matrix(&out.gates[0]).unwrap();
        let want = mul2(
            &single_qubit_matrix(&Gate::Rx(0, theta)).unwrap(),
            &single_qubit_matrix(&Gate::Z(0)).unwrap(),
        );
        let phase = got
            .iter()
            .zip(&want)
            .find(|(_, w)| w.norm() > 1e-9)
            .map(|(g, w)| g / w)
            .unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w * phase).norm() < 1e-14);
        }
        assert!((phase.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_frame_changes_nothing() {
        let easy = Cycle::easy(vec![Gate::H(0), Gate::Ry(2, 0.3)]);
        let frame = [CliffordId::IDENTITY; 3];
        assert_eq!(fold_frame_into_easy_cycle(&easy, &frame, Side::Before), easy);
        assert_eq!(fold_frame_into_easy_cycle(&easy, &frame, Side::After), easy);
    }

    #[test]
    fn frames_on_idle_qubits_become_gates() {
        let easy = Cycle::easy(vec![]);
        let out = fold_frame_into_easy_cycle(&easy, &[CliffordId::IDENTITY, id(Gate::S(0))], Side::After);
        assert_eq!(out.gates, vec![Gate::S(1)]);
    }

    #[test]
    fn words_simplify_to_named_gates() {
        assert_eq!(gate_from_word(3, id(Gate::H(0)), None), Some(Gate::H(3)));
        let rz = Rotation {
            axis: Axis::Z,
            angle: 0.5,
        };
        assert_eq!(
            gate_from_word(1, CliffordId::IDENTITY, Some(rz)),
            Some(Gate::Rz(1, 0.5))
        );
        assert_eq!(gate_from_word(1, CliffordId::IDENTITY, None), None);
    }

    fn arb_gate() -> impl Strategy<Value = Gate> {
        (0u8..8, -3.0f64..3.0, 0usize..24, 0u8..3).prop_map(|(k, t, c, a)| match k {
            0 => Gate::H(0),
            1 => Gate::S(0),
            2 => Gate::Sdg(0),
            3 => Gate::Y(0),
            4 => Gate::Rx(0, t),
            5 => Gate::Ry(0, t),
            6 => Gate::Rz(0, t),
            _ => Gate::Local {
                qubit: 0,
                clifford: CliffordId::new(c).unwrap(),
                rotation: Some(Rotation {
                    axis: [Axis::X, Axis::Y, Axis::Z][a as usize],
                    angle: t,
                }),
            },
        })
    }

    proptest! {
        #[test]
        fn folding_matches_matrix_product(gate in arb_gate(), f in 0usize..24, after in any::<bool>()) {
            let f = CliffordId::new(f).unwrap();
            let side = if after { Side::After } else { Side::Before };
            let folded = fold_frame_into_easy_cycle(&Cycle::easy(vec![gate.clone()]), &[f], side);
            prop_assert!(folded.gates.len() <= 1);
            let frame_gate = Cycle::easy(vec![Gate::Local { qubit: 0, clifford: f, rotation: None }]);
            let original = Cycle::easy(vec![gate]);
            let reference = match side {
                Side::Before => vec![frame_gate, original],
                Side::After => vec![original, frame_gate],
            };
            let a = circuit_unitary(&Circuit::new(1, reference).unwrap()).unwrap();
            let b = circuit_unitary(&Circuit::new(1, vec![folded]).unwrap()).unwrap();
            prop_assert!(distance_up_to_phase(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn class_is_kept() {
        let out = fold_frame_into_easy_cycle(&Cycle::easy(vec![]), &[id(Gate::H(0))], Side::Before);
        assert_eq!(out.class, CycleClass::Easy);
    }
}
