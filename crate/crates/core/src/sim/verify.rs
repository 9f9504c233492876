//! Numerical equivalence checks between two circuits.
//!
//! Small registers compare full unitaries up to global phase; larger ones
//! compare output states on seeded random inputs.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{simulate_from, StateVector};
use crate::circuit::matrix::{circuit_unitary, process_overlap, DEFAULT_UNITARY_LIMIT};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed::rng_for;

/// Largest register checked with random input states.
pub const STATE_CHECK_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Unitary,
    RandomStates,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Equivalence {
    pub method: Method,
    /// Process fidelity `|Tr(A†B)/d|²`, or the worst state fidelity over the inputs.
    pub fidelity: f64,
}

impl Equivalence {
    pub fn deficit(&self) -> f64 {
        1.0 - self.fidelity
    }
}

/// Haar-distributed state from normalized complex Gaussian amplitudes.
pub fn random_state(n_qubits: usize, seed: u64) -> Result<StateVector> {
    let mut rng = rng_for(seed, &[]);
    let amps: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|z| z / norm).collect())
}

/// Compares `a` and `b` with measurements stripped.
pub fn check_equivalence(a: &Circuit, b: &Circuit, n_states: usize, seed: u64) -> Result<Equivalence> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: a.n_qubits(),
            actual: b.n_qubits(),
        });
    }
    let (a, b) = (a.without_measurement(), b.without_measurement());
    let n = a.n_qubits();
    if n <= DEFAULT_UNITARY_LIMIT {
        let overlap = process_overlap(&circuit_unitary(&a)?, &circuit_unitary(&b)?);
        return Ok(Equivalence {
            method: Method::Unitary,
            fidelity: overlap * overlap,
        });
    }
    if n > STATE_CHECK_LIMIT {
        return Err(Error::TooLarge {
            what: "equivalence check",
            n,
            limit: STATE_CHECK_LIMIT,
        });
    }
    if n_states == 0 {
        return Err(Error::InvalidConfig("at least one input state is required".into()));
    }
    let mut worst = f64::INFINITY;
    for k in 0..n_states {
        let input = random_state(n, crate::seed::derive_seed(seed, &[k as u64]))?;
        let fa = simulate_from(&a, input.clone())?;
        let fb = simulate_from(&b, input)?;
        worst = worst.min(fa.fidelity(&fb)?);
    }
    Ok(Equivalence {
        method: Method::RandomStates,
        fidelity: worst,
    })
}
