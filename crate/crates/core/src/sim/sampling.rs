//! Measurement sampling.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::{Bernoulli, Distribution};

use super::noise::NoiseModel;
use super::StateVector;
use crate::error::{Error, Result};
use crate::seed::rng_for;

/// Measurement outcomes keyed by basis index (bit `q` = qubit `q`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShotCounts {
    n_qubits: usize,
    counts: BTreeMap<usize, u64>,
    total: u64,
}

impl ShotCounts {
    pub fn new(n_qubits: usize) -> Self {
        ShotCounts {
            n_qubits,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn from_counts(n_qubits: usize, counts: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut out = ShotCounts::new(n_qubits);
        for (z, k) in counts {
            out.add(z, k);
        }
        out
    }

    pub fn add(&mut self, index: usize, count: u64) {
        if count > 0 {
            *self.counts.entry(index).or_default() += count;
            self.total += count;
        }
    }

    pub fn merge(&mut self, other: &ShotCounts) {
        for (&z, &k) in &other.counts {
            self.add(z, k);
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&z, &k)| (z, k))
    }

    /// Bitstring for a basis index, qubit `n-1` first.
    pub fn bitstring(&self, index: usize) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn to_bitstrings(&self) -> BTreeMap<String, u64> {
        self.iter().map(|(z, k)| (self.bitstring(z), k)).collect()
    }

    /// Mean of `table[z]` over the recorded shots.
    pub fn mean(&self, table: &[f64]) -> Option<f64> {
        if self.total == 0 {
            return None;
        }
        let sum: f64 = self.iter().map(|(z, k)| table[z] * k as f64).sum();
        Some(sum / self.total as f64)
    }
}

/// Draws `shots` i.i.d. outcomes from `|a_z|²`, flipping each bit with the
/// model's readout probability when one is given.
pub fn sample(s: &StateVector, shots: u64, seed: u64, noise: Option<&NoiseModel>) -> Result<ShotCounts> {
    let mut rng = rng_for(seed, &[]);
    sample_with(s, shots, &mut rng, noise)
}

pub(crate) fn sample_with<R: rand::Rng>(
    s: &StateVector,
    shots: u64,
    rng: &mut R,
    noise: Option<&NoiseModel>,
) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidConfig("shot count must be at least 1".into()));
    }
    let dist = WeightedIndex::new(s.probabilities())
        .map_err(|e| Error::InvalidConfig(format!("cannot sample from state: {e}")))?;
    let flip = noise.map_or(0.0, |nm| nm.readout_flip);
    let flipper = if flip > 0.0 {
        Some(Bernoulli::new(flip).map_err(|e| Error::InvalidNoise(e.to_string()))?)
    } else {
        None
    };
    let mut counts = ShotCounts::new(s.n_qubits());
    for _ in 0..shots {
        let mut z = dist.sample(rng);
        if let Some(b) = &flipper {
            for q in 0..s.n_qubits() {
                if b.sample(rng) {
                    z ^= 1 << q;
                }
            }
        }
        counts.add(z, 1);
    }
    Ok(counts)
}
