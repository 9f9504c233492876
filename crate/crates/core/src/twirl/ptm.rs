//! Pauli transfer matrices of small noisy cycles, bare and frame-averaged.

use nalgebra::DMatrix;

use crate::circuit::matrix::Matrix;
use crate::circuit::{conjugate_pauli_through_gate, Cycle, Gate, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::sim::noise::{noisy_cycle_mixture, pauli_matrix, NoiseModel};

pub const PTM_QUBIT_LIMIT: usize = 2;

/// Real PTM, `R_ij = Tr(P_i E(P_j)) / d`.
pub type Ptm = DMatrix<f64>;

/// Pauli `k` of an `n`-qubit register: base-4 digit `q` of `k` picks the
/// factor on qubit `q` in the order I, X, Y, Z.
pub fn pauli_basis_element(n: usize, k: usize) -> PauliString {
    PauliString::new((0..n).map(|q| Pauli::ALL[(k >> (2 * q)) & 3]).collect())
}

/// PTM of `ρ → Σ p_k U_k ρ U_k†`.
pub fn ptm_of_mixture(mixture: &[(f64, Matrix)], n_qubits: usize) -> Ptm {
    let d = 1usize << n_qubits;
    let basis: Vec<Matrix> = (0..d * d)
        .map(|k| pauli_matrix(&pauli_basis_element(n_qubits, k)))
        .collect();
    Ptm::from_fn(d * d, d * d, |i, j| {
        mixture
            .iter()
            .map(|(p, u)| p * (&basis[i] * u * &basis[j] * u.adjoint()).trace().re)
            .sum::<f64>()
            / d as f64
    })
}

/// Relabels the cycle onto qubits `0..k` in ascending order of its support.
fn compact(cycle: &Cycle) -> Result<(Cycle, usize)> {
    let mut support: Vec<usize> = cycle.gates.iter().flat_map(Gate::qubits).collect();
    support.sort_unstable();
    support.dedup();
    if support.len() > PTM_QUBIT_LIMIT {
        return Err(Error::TooLarge {
            what: "PTM averaging",
            n: support.len(),
            limit: PTM_QUBIT_LIMIT,
        });
    }
    let at = |q: usize| support.binary_search(&q).unwrap();
    let gates = cycle
        .gates
        .iter()
        .map(|g| match *g {
            Gate::Rzz(a, b, t) => Gate::Rzz(at(a), at(b), t),
            Gate::Cnot(a, b) => Gate::Cnot(at(a), at(b)),
            Gate::Local {
                qubit,
                clifford,
                rotation,
            } => Gate::Local {
                qubit: at(qubit),
                clifford,
                rotation,
            },
            Gate::H(q) => Gate::H(at(q)),
            Gate::X(q) => Gate::X(at(q)),
            Gate::Y(q) => Gate::Y(at(q)),
            Gate::Z(q) => Gate::Z(at(q)),
            Gate::S(q) => Gate::S(at(q)),
            Gate::Sdg(q) => Gate::Sdg(at(q)),
            Gate::Rx(q, t) => Gate::Rx(at(q), t),
            Gate::Ry(q, t) => Gate::Ry(at(q), t),
            Gate::Rz(q, t) => Gate::Rz(at(q), t),
            Gate::Measure(q) => Gate::Measure(at(q)),
        })
        .collect();
    Ok((Cycle::new(cycle.class, gates), support.len()))
}

/// PTM of the ideal (noiseless) cycle.
pub fn ideal_ptm(cycle: &Cycle) -> Result<Ptm> {
    let (cycle, n) = compact(cycle)?;
    Ok(ptm_of_mixture(
        &noisy_cycle_mixture(&cycle, &NoiseModel::noiseless(), n)?,
        n,
    ))
}

/// PTM of the noisy cycle without frames.
pub fn noisy_ptm(cycle: &Cycle, nm: &NoiseModel) -> Result<Ptm> {
    let (cycle, n) = compact(cycle)?;
    Ok(ptm_of_mixture(&noisy_cycle_mixture(&cycle, nm, n)?, n))
}

/// Exact average over all `4^k` Pauli frames of the twirled noisy cycle
/// `P_out · Ẽ(s·θ) · P`, where `P_out` is the correction that makes the
/// ideal twirled cycle equal the bare one.
pub fn twirl_average_channel(cycle: &Cycle, nm: &NoiseModel) -> Result<Ptm> {
    let (cycle, n) = compact(cycle)?;
    let frames = 1usize << (2 * n);
    let mut mixture = Vec::new();
    for k in 0..frames {
        let entry = pauli_basis_element(n, k);
        let mut exit = entry.ops().to_vec();
        let mut gates = Vec::with_capacity(cycle.gates.len());
        for gate in &cycle.gates {
            let qs = gate.qubits();
            let local = entry.restrict(&qs);
            let (moved, s) = conjugate_pauli_through_gate(gate, &local)?;
            for (i, &q) in qs.iter().enumerate() {
                exit[q] = moved.ops()[i];
            }
            gates.push(match gate.angle() {
                Some(theta) if s < 0 => gate.with_angle(-theta),
                _ => gate.clone(),
            });
        }
        let pre = pauli_matrix(&entry);
        let post = pauli_matrix(&PauliString::new(exit));
        let weight = 1.0 / frames as f64;
        for (p, u) in noisy_cycle_mixture(&Cycle::new(cycle.class, gates), nm, n)? {
            mixture.push((p * weight, &post * u * &pre));
        }
    }
    Ok(ptm_of_mixture(&mixture, n))
}

/// `R · R_ideal⁻¹`: the error channel after the ideal gate is factored out.
pub fn error_ptm(channel: &Ptm, ideal: &Ptm) -> Ptm {
    // ideal unitary PTMs are orthogonal
    channel * ideal.transpose()
}

pub fn max_off_diagonal(m: &Ptm) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].abs());
            }
        }
    }
    worst
}
