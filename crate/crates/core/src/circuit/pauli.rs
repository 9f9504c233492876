//! Signed Pauli strings and their conjugation through the supported gates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{clifford, Gate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Single-qubit product `self * rhs = i^k * out`, with `k` in `0..4`.
    pub fn product(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Rotation axis for RX/RY/RZ-type gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Axis> {
        match p {
            Pauli::X => Some(Axis::X),
            Pauli::Y => Some(Axis::Y),
            Pauli::Z => Some(Axis::Z),
            Pauli::I => None,
        }
    }
}

/// A Hermitian Pauli operator `±P_0 ⊗ P_1 ⊗ ...`.
///
/// Position `k` of `ops` refers to whatever qubit list the string is attached
/// to: the gate's qubit list for local strings, the register otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString { ops, negative: false }
    }

    pub fn with_sign(ops: Vec<Pauli>, sign: i8) -> Self {
        PauliString {
            ops,
            negative: sign < 0,
        }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(vec![Pauli::I; n])
    }

    /// Single non-identity factor `p` at position `at` of an `n`-long string.
    pub fn single(n: usize, at: usize, p: Pauli) -> Self {
        let mut ops = vec![Pauli::I; n];
        ops[at] = p;
        PauliString::new(ops)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.ops
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// Positions carrying a non-identity factor.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(k, _)| k)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.len(), other.len(), "Pauli strings of different length");
        let anti = self
            .ops
            .iter()
            .zip(&other.ops)
            .filter(|(a, b)| !a.commutes_with(**b))
            .count();
        anti % 2 == 0
    }

    /// Operator product `self * rhs = i^k * out` where `k` is 0 or 1 and the
    /// sign of the product is folded into `out`.
    pub fn compose(&self, rhs: &PauliString) -> (u8, PauliString) {
        assert_eq!(self.len(), rhs.len(), "Pauli strings of different length");
        let mut k = if self.negative ^ rhs.negative { 2u8 } else { 0 };
        let ops = self
            .ops
            .iter()
            .zip(&rhs.ops)
            .map(|(&a, &b)| {
                let (phase, p) = a.product(b);
                k = (k + phase) % 4;
                p
            })
            .collect();
        let negative = k >= 2;
        (k % 2, PauliString { ops, negative })
    }

    /// Parses strings like `"XIZ"` or `"-YY"`.
    pub fn parse(s: &str) -> Option<PauliString> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let ops = body.chars().map(Pauli::from_char).collect::<Option<Vec<_>>>()?;
        Some(PauliString { ops, negative })
    }

    /// The sub-string at the given positions, in order.
    pub fn restrict(&self, positions: &[usize]) -> PauliString {
        PauliString::new(positions.iter().map(|&q| self.ops[q]).collect())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        for p in &self.ops {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// Conjugation action of a Clifford on `n` qubits, stored as the images of
/// every `X_q` and `Z_q` under `P -> C P C†`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        Tableau {
            x_images: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            z_images: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        }
    }

    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Self {
        assert_eq!(x_images.len(), z_images.len());
        Tableau { x_images, z_images }
    }

    pub fn n_qubits(&self) -> usize {
        self.x_images.len()
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    fn image_of(&self, q: usize, p: Pauli) -> PauliString {
        match p {
            Pauli::I => PauliString::identity(self.n_qubits()),
            Pauli::X => self.x_images[q].clone(),
            Pauli::Z => self.z_images[q].clone(),
            Pauli::Y => {
                // Y = i X Z
                let (k, prod) = self.x_images[q].compose(&self.z_images[q]);
                debug_assert_eq!(k, 1, "X and Z images must anticommute");
                prod.negated()
            }
        }
    }

    /// `C p C†`.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        assert_eq!(p.len(), self.n_qubits(), "Pauli string does not match tableau");
        let mut out = PauliString::identity(self.n_qubits());
        for (q, &op) in p.ops.iter().enumerate() {
            if op != Pauli::I {
                let (k, prod) = out.compose(&self.image_of(q, op));
                debug_assert_eq!(k, 0, "factors on distinct qubits commute");
                out = prod;
            }
        }
        if p.negative {
            out.negated()
        } else {
            out
        }
    }

    /// Tableau of `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Tableau) -> Tableau {
        Tableau {
            x_images: other.x_images.iter().map(|p| self.conjugate(p)).collect(),
            z_images: other.z_images.iter().map(|p| self.conjugate(p)).collect(),
        }
    }
}

fn ps(s: &str) -> PauliString {
    PauliString::parse(s).expect("static Pauli literal")
}

/// Conjugation tableau of a Clifford gate on its own qubit list, or `None`
/// for non-Clifford kinds.
pub fn gate_tableau(gate: &Gate) -> Option<Tableau> {
    let t = |x: &str, z: &str| Some(Tableau::from_images(vec![ps(x)], vec![ps(z)]));
    match gate {
        Gate::H(_) => t("Z", "X"),
        Gate::S(_) => t("Y", "Z"),
        Gate::Sdg(_) => t("-Y", "Z"),
        Gate::X(_) => t("X", "-Z"),
        Gate::Y(_) => t("-X", "-Z"),
        Gate::Z(_) => t("-X", "Z"),
        Gate::Cnot(..) => Some(Tableau::from_images(vec![ps("XX"), ps("IX")], vec![ps("ZI"), ps("ZZ")])),
        Gate::Local {
            clifford,
            rotation: None,
            ..
        } => Some(clifford::table().tableau(*clifford)),
        _ => None,
    }
}

/// Moves a Pauli `p` (on `g`'s qubits, in `g`'s qubit order) from before the
/// gate to after it: returns `(p_out, s)` with `g(θ)·p = p_out·g(s·θ)`.
///
/// Clifford gates use exact stabilizer conjugation (`s = +1`); rotations keep
/// `p` and flip the angle when `p` anticommutes with the rotation generator.
pub fn conjugate_pauli_through_gate(g: &Gate, p: &PauliString) -> Result<(PauliString, i8)> {
    if let Gate::Measure(_) = g {
        return Err(Error::UnsupportedGate(g.kind(), "Pauli conjugation"));
    }
    let arity = g.qubits().len();
    if p.len() != arity {
        return Err(Error::DimensionMismatch {
            expected: arity,
            actual: p.len(),
        });
    }
    let flip = |generator: &PauliString| if p.commutes_with(generator) { 1 } else { -1 };
    let out = match g {
        Gate::Rx(..) => (p.clone(), flip(&ps("X"))),
        Gate::Ry(..) => (p.clone(), flip(&ps("Y"))),
        Gate::Rz(..) => (p.clone(), flip(&ps("Z"))),
        Gate::Rzz(..) => (p.clone(), flip(&ps("ZZ"))),
        Gate::Local {
            clifford,
            rotation: Some(rot),
            ..
        } => {
            let moved = clifford::table().tableau(*clifford).conjugate(p);
            let generator = PauliString::new(vec![rot.axis.pauli()]);
            let s = if moved.commutes_with(&generator) { 1 } else { -1 };
            (moved, s)
        }
        _ => {
            let tab = gate_tableau(g).ok_or(Error::UnsupportedGate(g.kind(), "Pauli conjugation"))?;
            (tab.conjugate(p), 1)
        }
    };
    Ok(out)
}
