//! The 24-element single-qubit Clifford group (modulo phase).
//!
//! Elements are enumerated breadth-first from words in `{H, S}`, so the
//! numbering is fixed: index 0 is the identity. Each element stores its
//! conjugation action as a signed permutation of `{X, Y, Z}` together with a
//! representative 2×2 matrix.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::LazyLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pauli::{gate_tableau, Pauli, PauliString, Tableau};
use super::{Cycle, Gate, GateKind, Qubit};
use crate::error::{Error, Result};

pub const GROUP_ORDER: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CliffordId(u8);

impl CliffordId {
    pub const IDENTITY: CliffordId = CliffordId(0);

    pub fn new(index: usize) -> Option<CliffordId> {
        (index < GROUP_ORDER).then_some(CliffordId(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self == CliffordId::IDENTITY
    }

    pub fn all() -> impl Iterator<Item = CliffordId> {
        (0..GROUP_ORDER as u8).map(CliffordId)
    }
}

impl fmt::Display for CliffordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// Signed image `(sign, P)` of a Pauli axis.
pub type SignedPauli = (i8, Pauli);

#[derive(Clone, Debug)]
pub struct SingleQubitClifford {
    pub index: CliffordId,
    /// Images of X, Y, Z under `P -> C P C†`.
    pub action: [SignedPauli; 3],
    pub matrix: [Complex64; 4],
    /// Generating word in time order, e.g. `"HS"` means H first.
    pub word: String,
}

impl SingleQubitClifford {
    pub fn image(&self, p: Pauli) -> SignedPauli {
        match p {
            Pauli::I => (1, Pauli::I),
            Pauli::X => self.action[0],
            Pauli::Y => self.action[1],
            Pauli::Z => self.action[2],
        }
    }
}

pub struct CliffordTable {
    elements: Vec<SingleQubitClifford>,
    by_action: HashMap<[SignedPauli; 3], CliffordId>,
    products: [[CliffordId; GROUP_ORDER]; GROUP_ORDER],
    inverses: [CliffordId; GROUP_ORDER],
}

fn axis_index(p: Pauli) -> usize {
    match p {
        Pauli::X => 0,
        Pauli::Y => 1,
        Pauli::Z => 2,
        Pauli::I => unreachable!("identity has no axis"),
    }
}

fn apply_action(action: &[SignedPauli; 3], (sign, p): SignedPauli) -> SignedPauli {
    if p == Pauli::I {
        return (sign, p);
    }
    let (s, q) = action[axis_index(p)];
    (sign * s, q)
}

/// Completes an action from the X and Z images (Y = iXZ).
fn action_from_xz(x: SignedPauli, z: SignedPauli) -> [SignedPauli; 3] {
    let (k, p) = x.1.product(z.1);
    let total = (k + 1) % 4;
    debug_assert!(total % 2 == 0, "X and Z images must anticommute");
    let y_sign = x.0 * z.0 * if total == 2 { -1 } else { 1 };
    [x, (y_sign, p), z]
}

fn mat_mul(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

impl CliffordTable {
    fn build() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let generators = [
            (
                'H',
                action_from_xz((1, Pauli::Z), (1, Pauli::X)),
                [one * r, one * r, one * r, -one * r],
            ),
            (
                'S',
                action_from_xz((1, Pauli::Y), (1, Pauli::Z)),
                [one, zero, zero, Complex64::new(0.0, 1.0)],
            ),
        ];

        let identity = SingleQubitClifford {
            index: CliffordId::IDENTITY,
            action: [(1, Pauli::X), (1, Pauli::Y), (1, Pauli::Z)],
            matrix: [one, zero, zero, one],
            word: String::new(),
        };
        let mut by_action = HashMap::new();
        by_action.insert(identity.action, CliffordId::IDENTITY);
        let mut elements = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            for (name, gen_action, gen_matrix) in &generators {
                let base = &elements[at];
                let action = base.action.map(|img| apply_action(gen_action, img));
                if by_action.contains_key(&action) {
                    continue;
                }
                let index = CliffordId(elements.len() as u8);
                let element = SingleQubitClifford {
                    index,
                    action,
                    matrix: mat_mul(gen_matrix, &base.matrix),
                    word: format!("{}{}", base.word, name),
                };
                by_action.insert(action, index);
                elements.push(element);
                queue.push_back(index.index());
            }
        }
        assert_eq!(elements.len(), GROUP_ORDER, "Clifford enumeration incomplete");

        let mut products = [[CliffordId::IDENTITY; GROUP_ORDER]; GROUP_ORDER];
        let mut inverses = [CliffordId::IDENTITY; GROUP_ORDER];
        for a in &elements {
            for b in &elements {
                let action = b.action.map(|img| apply_action(&a.action, img));
                let c = by_action[&action];
                products[a.index.index()][b.index.index()] = c;
                if c.is_identity() {
                    inverses[b.index.index()] = a.index;
                }
            }
        }
        CliffordTable {
            elements,
            by_action,
            products,
            inverses,
        }
    }

    pub fn get(&self, id: CliffordId) -> &SingleQubitClifford {
        &self.elements[id.index()]
    }

    pub fn elements(&self) -> &[SingleQubitClifford] {
        &self.elements
    }

    /// `a · b`: apply `b` first, then `a`.
    pub fn compose(&self, a: CliffordId, b: CliffordId) -> CliffordId {
        self.products[a.index()][b.index()]
    }

    pub fn inverse(&self, a: CliffordId) -> CliffordId {
        self.inverses[a.index()]
    }

    pub fn find(&self, x_image: SignedPauli, z_image: SignedPauli) -> Option<CliffordId> {
        if x_image.1 == Pauli::I || z_image.1 == Pauli::I || x_image.1 == z_image.1 {
            return None;
        }
        self.by_action.get(&action_from_xz(x_image, z_image)).copied()
    }

    pub fn from_pauli(&self, p: Pauli) -> CliffordId {
        let x = (if p.commutes_with(Pauli::X) { 1 } else { -1 }, Pauli::X);
        let z = (if p.commutes_with(Pauli::Z) { 1 } else { -1 }, Pauli::Z);
        self.find(x, z).expect("Pauli conjugation is a Clifford action")
    }

    /// The Pauli this element equals (up to phase), if any.
    pub fn as_pauli(&self, id: CliffordId) -> Option<Pauli> {
        let action = self.get(id).action;
        if action
            .iter()
            .zip([Pauli::X, Pauli::Y, Pauli::Z])
            .any(|(img, p)| img.1 != p)
        {
            return None;
        }
        let signs = action.map(|img| img.0);
        Some(match signs {
            [1, 1, 1] => Pauli::I,
            [1, -1, -1] => Pauli::X,
            [-1, 1, -1] => Pauli::Y,
            [-1, -1, 1] => Pauli::Z,
            _ => return None,
        })
    }

    /// The named gate equal to this element (up to phase), if one exists.
    pub fn named_gate(&self, id: CliffordId, qubit: Qubit) -> Option<Gate> {
        let named = [
            Gate::H(qubit),
            Gate::S(qubit),
            Gate::Sdg(qubit),
            Gate::X(qubit),
            Gate::Y(qubit),
            Gate::Z(qubit),
        ];
        named.into_iter().find(|g| self.id_of_gate(g) == Some(id))
    }

    /// Table index of a single-qubit Clifford gate.
    pub fn id_of_gate(&self, gate: &Gate) -> Option<CliffordId> {
        match gate {
            Gate::Local {
                clifford,
                rotation: None,
                ..
            } => Some(*clifford),
            Gate::H(_) | Gate::S(_) | Gate::Sdg(_) | Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {
                let tab = gate_tableau(gate)?;
                let single = |p: &PauliString| (p.sign(), p.ops()[0]);
                self.find(single(tab.x_image(0)), single(tab.z_image(0)))
            }
            _ => None,
        }
    }

    /// Conjugation tableau of one element (single qubit).
    pub fn tableau(&self, id: CliffordId) -> Tableau {
        let e = self.get(id);
        let img = |(s, p): SignedPauli| PauliString::with_sign(vec![p], s);
        Tableau::from_images(vec![img(e.action[0])], vec![img(e.action[2])])
    }

    /// Elements that, placed at `position` of a lone `kind` gate (identity on
    /// the other qubit), conjugate through it into a local correction.
    pub fn acceptance_subgroup(&self, kind: GateKind, position: usize) -> &[CliffordId] {
        static SUBGROUPS: LazyLock<HashMap<(GateKind, usize), Vec<CliffordId>>> = LazyLock::new(|| {
            let mut out = HashMap::new();
            for kind in [GateKind::Cnot, GateKind::Rzz] {
                for position in 0..2 {
                    let accepted = CliffordId::all()
                        .filter(|&c| {
                            let gate = match kind {
                                GateKind::Cnot => Gate::Cnot(0, 1),
                                _ => Gate::Rzz(0, 1, 1.0),
                            };
                            let cycle = Cycle::hard(vec![gate]);
                            let mut frame = vec![CliffordId::IDENTITY; 2];
                            frame[position] = c;
                            conjugate_clifford_through_cycle(&cycle, &frame).is_ok()
                        })
                        .collect();
                    out.insert((kind, position), accepted);
                }
            }
            out
        });
        SUBGROUPS.get(&(kind, position)).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn table() -> &'static CliffordTable {
    static TABLE: LazyLock<CliffordTable> = LazyLock::new(CliffordTable::build);
    &TABLE
}

/// Result of moving a Clifford frame through a hard cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCorrection {
    /// Per register qubit; `correction[q]` is the identity on idle qubits
    /// that carry no frame.
    pub correction: Vec<CliffordId>,
    /// Per gate of the cycle: the sign the gate's angle picks up.
    pub angle_signs: Vec<i8>,
}

fn two_qubit_frame(a: CliffordId, b: CliffordId) -> Tableau {
    let t = table();
    let (ea, eb) = (t.get(a), t.get(b));
    let img = |(s, p): SignedPauli, at: usize| {
        let mut ps = PauliString::single(2, at, p);
        if s < 0 {
            ps = ps.negated();
        }
        ps
    };
    Tableau::from_images(
        vec![img(ea.action[0], 0), img(eb.action[0], 1)],
        vec![img(ea.action[2], 0), img(eb.action[2], 1)],
    )
}

fn local_factor(p: &PauliString, at: usize) -> Option<SignedPauli> {
    let mut support = p.support();
    match (support.next(), support.next()) {
        (Some(k), None) if k == at => Some((p.sign(), p.ops()[at])),
        _ => None,
    }
}

/// Moves a per-qubit Clifford frame from before a hard cycle to after it.
///
/// Returns the correction and angle signs with
/// `cycle(θ)·frame = correction·cycle(s·θ)` exactly (up to global phase).
/// CNOT gates use tableau conjugation; RZZ gates accept only frames that map
/// `Z⊗Z` to `±Z⊗Z`. Anything else fails with [`Error::NonLocalCorrection`].
pub fn conjugate_clifford_through_cycle(cycle: &Cycle, frame: &[CliffordId]) -> Result<CliffordCorrection> {
    let t = table();
    let mut correction = frame.to_vec();
    let mut angle_signs = Vec::with_capacity(cycle.gates.len());
    for gate in &cycle.gates {
        let qs = gate.qubits();
        if qs.iter().any(|&q| q >= frame.len()) {
            return Err(Error::DimensionMismatch {
                expected: qs.iter().max().unwrap() + 1,
                actual: frame.len(),
            });
        }
        match gate {
            Gate::Cnot(c, tq) => {
                let cnot = gate_tableau(gate).expect("CNOT is Clifford");
                let k = cnot
                    .then_after(&two_qubit_frame(frame[*c], frame[*tq]))
                    .then_after(&cnot);
                let mut ids = [CliffordId::IDENTITY; 2];
                for (at, id) in ids.iter_mut().enumerate() {
                    let x = local_factor(k.x_image(at), at);
                    let z = local_factor(k.z_image(at), at);
                    *id = match (x, z) {
                        (Some(x), Some(z)) => t.find(x, z).expect("valid Clifford action"),
                        _ => return Err(Error::NonLocalCorrection(format!("{gate}"))),
                    };
                }
                correction[*c] = ids[0];
                correction[*tq] = ids[1];
                angle_signs.push(1);
            }
            Gate::Rzz(a, b, _) => {
                let mut sign = 1;
                for &q in &[*a, *b] {
                    match t.get(frame[q]).image(Pauli::Z) {
                        (s, Pauli::Z) => sign *= s,
                        _ => return Err(Error::NonLocalCorrection(format!("{gate}"))),
                    }
                }
                angle_signs.push(sign);
            }
            other => return Err(Error::UnsupportedGate(other.kind(), "Clifford frame conjugation")),
        }
    }
    Ok(CliffordCorrection {
        correction,
        angle_signs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_has_24_distinct_elements_with_identity_first() {
        let t = table();
        assert_eq!(t.elements().len(), 24);
        assert_eq!(t.get(CliffordId::IDENTITY).word, "");
        for a in CliffordId::all() {
            assert_eq!(t.compose(a, t.inverse(a)), CliffordId::IDENTITY);
            assert_eq!(t.compose(CliffordId::IDENTITY, a), a);
        }
    }

    #[test]
    fn actions_are_orientation_preserving_signed_permutations() {
        for e in table().elements() {
            let axes: Vec<_> = e.action.iter().map(|img| img.1).collect();
            let mut sorted = axes.clone();
            sorted.sort();
            assert_eq!(sorted, vec![Pauli::X, Pauli::Y, Pauli::Z]);
            // X·Y = iZ must be preserved: image(X)·image(Y) = i·image(Z)
            let (k, p) = e.action[0].1.product(e.action[1].1);
            assert_eq!(p, e.action[2].1);
            let lhs_sign = e.action[0].0 * e.action[1].0 * if k == 3 { -1 } else { 1 };
            assert_eq!(lhs_sign, e.action[2].0, "{}", e.word);
        }
    }

    #[test]
    fn paulis_round_trip_through_table() {
        let t = table();
        for p in Pauli::ALL {
            assert_eq!(t.as_pauli(t.from_pauli(p)), Some(p));
        }
        assert_eq!(t.from_pauli(Pauli::I), CliffordId::IDENTITY);
    }

    #[test]
    fn named_gates_are_found() {
        let t = table();
        for g in [Gate::H(0), Gate::S(0), Gate::Sdg(0), Gate::X(0), Gate::Y(0), Gate::Z(0)] {
            let id = t.id_of_gate(&g).unwrap();
            assert_eq!(t.named_gate(id, 0), Some(g));
        }
    }

    #[test]
    fn identity_frame_gives_identity_correction() {
        let cycle = Cycle::hard(vec![Gate::Cnot(0, 1), Gate::Cnot(2, 3)]);
        let out = conjugate_clifford_through_cycle(&cycle, &[CliffordId::IDENTITY; 4]).unwrap();
        assert!(out.correction.iter().all(|c| c.is_identity()));
    }

    #[test]
    fn s_on_control_commutes_through_cnot() {
        let t = table();
        let s = t.id_of_gate(&Gate::S(0)).unwrap();
        let cycle = Cycle::hard(vec![Gate::Cnot(0, 1)]);
        let out = conjugate_clifford_through_cycle(&cycle, &[s, CliffordId::IDENTITY]).unwrap();
        assert_eq!(out.correction, vec![s, CliffordId::IDENTITY]);
    }

    #[test]
    fn hadamard_on_control_is_non_local() {
        let h = table().id_of_gate(&Gate::H(0)).unwrap();
        let cycle = Cycle::hard(vec![Gate::Cnot(0, 1)]);
        let err = conjugate_clifford_through_cycle(&cycle, &[h, CliffordId::IDENTITY]).unwrap_err();
        assert!(matches!(err, Error::NonLocalCorrection(_)));
    }

    #[test]
    fn acceptance_subgroups_have_eight_elements() {
        let t = table();
        for kind in [GateKind::Cnot, GateKind::Rzz] {
            for pos in 0..2 {
                let group = t.acceptance_subgroup(kind, pos);
                assert_eq!(group.len(), 8, "{kind} position {pos}");
                // closed under composition
                for &a in group {
                    for &b in group {
                        assert!(group.contains(&t.compose(a, b)));
                    }
                }
            }
        }
    }
}
