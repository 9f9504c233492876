//! Dense gate matrices and the full-circuit unitary (verification oracle).
//!
//! Basis index bit `q` is the state of qubit `q` (qubit 0 least significant).
//! Local gate matrices use the same rule over the gate's own qubit list.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{clifford, Axis, Circuit, Gate, Rotation};
use crate::error::{Error, Result};

pub const DEFAULT_UNITARY_LIMIT: usize = 8;

pub type Matrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn rotation_matrix(rot: Rotation) -> [Complex64; 4] {
    let (s, c) = (rot.angle / 2.0).sin_cos();
    match rot.axis {
        Axis::X => [ONE * c, -I * s, -I * s, ONE * c],
        Axis::Y => [ONE * c, -ONE * s, ONE * s, ONE * c],
        Axis::Z => [Complex64::new(c, -s), ZERO, ZERO, Complex64::new(c, s)],
    }
}

/// Row-major 2×2 matrix of a single-qubit gate.
pub fn single_qubit_matrix(gate: &Gate) -> Option<[Complex64; 4]> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let rot = |axis, angle| rotation_matrix(Rotation { axis, angle });
    Some(match *gate {
        Gate::H(_) => [ONE * r, ONE * r, ONE * r, -ONE * r],
        Gate::X(_) => [ZERO, ONE, ONE, ZERO],
        Gate::Y(_) => [ZERO, -I, I, ZERO],
        Gate::Z(_) => [ONE, ZERO, ZERO, -ONE],
        Gate::S(_) => [ONE, ZERO, ZERO, I],
        Gate::Sdg(_) => [ONE, ZERO, ZERO, -I],
        Gate::Rx(_, t) => rot(Axis::X, t),
        Gate::Ry(_, t) => rot(Axis::Y, t),
        Gate::Rz(_, t) => rot(Axis::Z, t),
        Gate::Local { clifford, rotation, .. } => {
            let c = clifford::table().get(clifford).matrix;
            match rotation {
                None => c,
                Some(rot) => mul2(&rotation_matrix(rot), &c),
            }
        }
        _ => return None,
    })
}

pub(crate) fn mul2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Local matrix of a gate: 2×2 or 4×4 over the gate's qubit list.
pub fn gate_matrix(gate: &Gate) -> Result<Matrix> {
    if let Some(m) = single_qubit_matrix(gate) {
        return Ok(Matrix::from_row_slice(2, 2, &m));
    }
    match *gate {
        Gate::Rzz(_, _, theta) => Ok(Matrix::from_fn(4, 4, |i, j| {
            if i != j {
                return ZERO;
            }
            let parity = ((i & 1) ^ (i >> 1)) & 1;
            let zz = if parity == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(1.0, -theta / 2.0 * zz)
        })),
        Gate::Cnot(..) => Ok(Matrix::from_fn(4, 4, |i, j| {
            // bit 0 = control, bit 1 = target
            let control = j & 1;
            let image = j ^ (control << 1);
            if i == image {
                ONE
            } else {
                ZERO
            }
        })),
        _ => Err(Error::UnsupportedGate(gate.kind(), "matrix construction")),
    }
}

/// Embeds a local gate matrix acting on `qubits` into the full register.
pub fn embed(local: &Matrix, qubits: &[usize], n_qubits: usize) -> Matrix {
    let dim = 1usize << n_qubits;
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let local_index = |full: usize| -> usize { qubits.iter().enumerate().map(|(k, &q)| ((full >> q) & 1) << k).sum() };
    Matrix::from_fn(dim, dim, |i, j| {
        if (i & !mask) != (j & !mask) {
            ZERO
        } else {
            local[(local_index(i), local_index(j))]
        }
    })
}

/// Full `2^n × 2^n` unitary of a measurement-free circuit, multiplying gate
/// matrices in cycle order. Limited to [`DEFAULT_UNITARY_LIMIT`] qubits.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix> {
    circuit_unitary_with_limit(c, DEFAULT_UNITARY_LIMIT)
}

pub fn circuit_unitary_with_limit(c: &Circuit, limit: usize) -> Result<Matrix> {
    if c.n_qubits() > limit {
        return Err(Error::TooLarge {
            what: "circuit_unitary",
            n: c.n_qubits(),
            limit,
        });
    }
    if c.has_measurement() {
        return Err(Error::MeasurementPresent("circuit_unitary"));
    }
    let dim = 1usize << c.n_qubits();
    let mut u = Matrix::identity(dim, dim);
    for gate in c.gates() {
        let full = embed(&gate_matrix(gate)?, &gate.qubits(), c.n_qubits());
        u = full * u;
    }
    Ok(u)
}

/// `|Tr(A† B)| / d`: 1 exactly when the unitaries agree up to global phase.
pub fn process_overlap(a: &Matrix, b: &Matrix) -> f64 {
    let d = a.nrows() as f64;
    (a.adjoint() * b).trace().norm() / d
}

/// Max-entry distance after aligning the global phase of `b` to `a`.
pub fn distance_up_to_phase(a: &Matrix, b: &Matrix) -> f64 {
    let tr = (a.adjoint() * b).trace();
    let phase = if tr.norm() > 1e-300 { tr.conj() / tr.norm() } else { ONE };
    (a - b * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
