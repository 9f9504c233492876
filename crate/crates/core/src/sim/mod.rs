//! Statevector simulation.
//!
//! Gates are applied in place: single-qubit gates as 2×2 blocks over index
//! pairs differing in one bit, RZZ as parity phases, CNOT as a permutation.

pub mod noise;
pub mod sampling;
pub mod verify;

use num_complex::Complex64;

use crate::circuit::matrix::single_qubit_matrix;
use crate::circuit::{Circuit, CycleClass, Gate, Pauli};
use crate::error::{Error, Result};
use crate::ising::IsingModel;

pub use noise::{simulate_noisy_trajectory, NoiseModel, TrajectorySimulator};
pub use sampling::{sample, ShotCounts};

/// Largest register a [`StateVector`] will allocate.
pub const MAX_QUBITS: usize = 26;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = StateVector::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: s.amps.len(),
                actual: index,
            });
        }
        s.amps.swap(0, index);
        Ok(s)
    }

    /// Wraps a normalized amplitude vector of length `2^n`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!("{len} amplitudes is not a power of two")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_size(n_qubits)?;
        let s = StateVector { n_qubits, amps };
        if (s.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidConfig(format!("state has squared norm {}", s.norm_sqr())));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other.n_qubits)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: q + 1,
            });
        }
        Ok(())
    }

    fn check_same_size(&self, n: usize) -> Result<()> {
        if n != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: n,
            });
        }
        Ok(())
    }

    /// Applies a row-major 2×2 matrix to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: &[Complex64; 4]) {
        let bit = 1usize << q;
        for hi in (0..self.amps.len()).step_by(bit << 1) {
            for i in hi..hi + bit {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0] * a + m[1] * b;
                self.amps[i | bit] = m[2] * a + m[3] * b;
            }
        }
    }

    pub fn apply_rzz(&mut self, a: usize, b: usize, theta: f64) {
        let even = Complex64::from_polar(1.0, -theta / 2.0);
        let odd = even.conj();
        for (z, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if ((z >> a) ^ (z >> b)) & 1 == 0 { even } else { odd };
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for z in 0..self.amps.len() {
            if z & c != 0 && z & t == 0 {
                self.amps.swap(z, z | t);
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let bit = 1usize << q;
        let i = Complex64::new(0.0, 1.0);
        match p {
            Pauli::I => {}
            Pauli::X => {
                for hi in (0..self.amps.len()).step_by(bit << 1) {
                    for z in hi..hi + bit {
                        self.amps.swap(z, z | bit);
                    }
                }
            }
            Pauli::Z => {
                for (z, amp) in self.amps.iter_mut().enumerate() {
                    if z & bit != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Pauli::Y => {
                for hi in (0..self.amps.len()).step_by(bit << 1) {
                    for z in hi..hi + bit {
                        let (a, b) = (self.amps[z], self.amps[z | bit]);
                        self.amps[z] = -i * b;
                        self.amps[z | bit] = i * a;
                    }
                }
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match *gate {
            Gate::X(q) => self.apply_pauli(q, Pauli::X),
            Gate::Y(q) => self.apply_pauli(q, Pauli::Y),
            Gate::Z(q) => self.apply_pauli(q, Pauli::Z),
            Gate::Rzz(a, b, theta) => self.apply_rzz(a, b, theta),
            Gate::Cnot(c, t) => self.apply_cnot(c, t),
            Gate::Measure(_) => return Err(Error::UnsupportedGate(gate.kind(), "statevector evolution")),
            _ => {
                let m =
                    single_qubit_matrix(gate).ok_or(Error::UnsupportedGate(gate.kind(), "statevector evolution"))?;
                self.apply_single(gate.qubits()[0], &m);
            }
        }
        Ok(())
    }

    /// `⟨Z_q⟩`.
    pub fn expectation_z(&self, q: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(z, a)| if (z >> q) & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }

    /// `⟨Z_a Z_b⟩`.
    pub fn expectation_zz(&self, a: usize, b: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(z, amp)| {
                if ((z >> a) ^ (z >> b)) & 1 == 0 {
                    amp.norm_sqr()
                } else {
                    -amp.norm_sqr()
                }
            })
            .sum()
    }

    /// `Σ_z |a_z|² table[z]` for a precomputed diagonal observable.
    pub fn expectation_diagonal(&self, table: &[f64]) -> Result<f64> {
        if table.len() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                actual: table.len(),
            });
        }
        Ok(self.amps.iter().zip(table).map(|(a, e)| a.norm_sqr() * e).sum())
    }
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "statevector",
            n: n_qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Runs `c` on `|0…0⟩`, skipping the measurement cycle.
pub fn simulate(c: &Circuit) -> Result<StateVector> {
    simulate_from(c, StateVector::zero(c.n_qubits())?)
}

pub fn simulate_from(c: &Circuit, mut state: StateVector) -> Result<StateVector> {
    state.check_same_size(c.n_qubits())?;
    for cycle in c.cycles().iter().filter(|cy| cy.class != CycleClass::Measurement) {
        for gate in &cycle.gates {
            state.apply_gate(gate)?;
        }
    }
    Ok(state)
}

/// Exact `⟨ψ|H|ψ⟩` for an Ising model.
pub fn expectation_energy(s: &StateVector, m: &IsingModel) -> Result<f64> {
    s.check_same_size(m.n())?;
    let pairs: f64 = m.couplings().map(|(i, j, v)| v * s.expectation_zz(i, j)).sum();
    let fields: f64 = m
        .fields()
        .iter()
        .enumerate()
        .filter(|(_, h)| **h != 0.0)
        .map(|(q, h)| h * s.expectation_z(q))
        .sum();
    Ok(-pairs - fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::matrix::{circuit_unitary, Matrix};
    use crate::circuit::{Axis, CliffordId, Cycle, Rotation};
    use crate::ising::frustrated_ring;
    use crate::qaoa::{build_qaoa_circuit, QaoaParams};
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_wall_gives_uniform_amplitudes() {
        let circ = Circuit::new(12, vec![Cycle::easy((0..12).map(Gate::H).collect())]).unwrap();
        let s = simulate(&circ).unwrap();
        for a in s.amplitudes() {
            assert!((a - c(1.0 / 64.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_gamma_has_zero_energy() {
        let m = frustrated_ring(12, 11).unwrap();
        let circ = build_qaoa_circuit(&m, &QaoaParams::single(0.0, 0.3).unwrap()).unwrap();
        let e = expectation_energy(&simulate(&circ).unwrap(), &m).unwrap();
        assert!(e.abs() < 1e-12, "{e}");
    }

    #[test]
    fn energies_of_simple_states() {
        let m = frustrated_ring(12, 11).unwrap();
        let uniform = simulate(&Circuit::new(12, vec![Cycle::easy((0..12).map(Gate::H).collect())]).unwrap()).unwrap();
        assert!(expectation_energy(&uniform, &m).unwrap().abs() < 1e-12);
        let zero = StateVector::zero(12).unwrap();
        assert_eq!(expectation_energy(&zero, &m).unwrap(), -10.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 1 << 12];
        amps[0] = c(r, 0.0);
        amps[(1 << 12) - 1] = c(r, 0.0);
        let cat = StateVector::from_amplitudes(amps).unwrap();
        assert!((expectation_energy(&cat, &m).unwrap() + 10.0).abs() < 1e-12);
        let table = m.energy_table().unwrap();
        assert!((cat.expectation_diagonal(&table).unwrap() + 10.0).abs() < 1e-12);
    }

    #[test]
    fn y_matches_its_matrix() {
        let mut s = StateVector::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        s.apply_gate(&Gate::Y(0)).unwrap();
        // Y = [[0, -i], [i, 0]]
        assert!((s.amplitudes()[0] - c(0.8, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(0.0, 0.6)).norm() < 1e-15);
    }

    #[test]
    fn measurement_gate_is_not_applied() {
        let mut s = StateVector::zero(1).unwrap();
        assert!(s.apply_gate(&Gate::Measure(0)).is_err());
        assert!(s.apply_gate(&Gate::H(3)).is_err());
    }

    fn random_circuit(n: usize, picks: &[(u8, usize, usize, f64)]) -> Circuit {
        let cycles = picks
            .iter()
            .map(|&(k, a, b, theta)| {
                let (a, b) = (a % n, b % n);
                let b = if a == b { (b + 1) % n } else { b };
                let g = match k % 9 {
                    0 => Gate::H(a),
                    1 => Gate::S(a),
                    2 => Gate::Y(a),
                    3 => Gate::Rx(a, theta),
                    4 => Gate::Ry(a, theta),
                    5 => Gate::Rz(a, theta),
                    6 => Gate::Local {
                        qubit: a,
                        clifford: CliffordId::new(b * 5 % 24).unwrap(),
                        rotation: Some(Rotation {
                            axis: Axis::Y,
                            angle: theta,
                        }),
                    },
                    7 => Gate::Rzz(a, b, theta),
                    _ => Gate::Cnot(a, b),
                };
                if g.is_two_qubit() {
                    Cycle::hard(vec![g])
                } else {
                    Cycle::easy(vec![g])
                }
            })
            .collect();
        Circuit::new(n, cycles).unwrap()
    }

    pub(crate) fn unitary_on_zero(u: &Matrix) -> DVector<Complex64> {
        u.column(0).into_owned()
    }

    proptest! {
        #[test]
        fn simulation_matches_circuit_unitary(
            n in 1usize..=6,
            picks in prop::collection::vec((0u8..9, 0usize..6, 0usize..6, -3.0f64..3.0), 1..40),
        ) {
            prop_assume!(n >= 2 || picks.iter().all(|p| p.0 % 9 < 7));
            let circ = random_circuit(n, &picks);
            let s = simulate(&circ).unwrap();
            let col = unitary_on_zero(&circuit_unitary(&circ).unwrap());
            for (a, b) in s.amplitudes().iter().zip(col.iter()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn norm_is_preserved_after_every_cycle(
            picks in prop::collection::vec((0u8..9, 0usize..5, 0usize..5, -3.0f64..3.0), 1..30),
        ) {
            let circ = random_circuit(5, &picks);
            let mut s = StateVector::zero(5).unwrap();
            for cycle in circ.cycles() {
                for g in &cycle.gates {
                    s.apply_gate(g).unwrap();
                }
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }
}
