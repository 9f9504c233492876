//! Classical Ising models `H = -Σ J_ij s_i s_j - Σ h_i s_i`.
//!
//! Spins follow the Z eigenvalues of the computational basis: bit 0 is spin
//! +1 and bit 1 is spin -1. Basis index bit `q` is the bit of node `q`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest model `ground_states` and `energy_table` will enumerate.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    bits: Vec<bool>,
}

impl SpinConfig {
    pub fn new(bits: Vec<bool>) -> Self {
        SpinConfig { bits }
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        SpinConfig {
            bits: (0..n).map(|q| (index >> q) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().enumerate().map(|(q, &b)| usize::from(b) << q).sum()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn spin(&self, q: usize) -> f64 {
        if self.bits[q] {
            -1.0
        } else {
            1.0
        }
    }

    pub fn flipped(&self) -> SpinConfig {
        SpinConfig {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsingModel {
    n: usize,
    /// Keyed by `(i, j)` with `i < j`.
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
}

impl IsingModel {
    pub fn new(n: usize, couplings: &[(usize, usize, f64)], fields: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("node count must be positive".into()));
        }
        if fields.len() != n {
            return Err(Error::InvalidModel(format!(
                "expected {n} field values, got {}",
                fields.len()
            )));
        }
        let mut map = BTreeMap::new();
        for &(i, j, value) in couplings {
            if i == j {
                return Err(Error::InvalidModel(format!("self-coupling on node {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidModel(format!(
                    "coupling ({i}, {j}) out of range for {n} nodes"
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidModel(format!("coupling ({i}, {j}) is not finite")));
            }
            if map.insert((i.min(j), i.max(j)), value).is_some() {
                return Err(Error::InvalidModel(format!("duplicate coupling for pair ({i}, {j})")));
            }
        }
        if fields.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidModel("field values must be finite".into()));
        }
        Ok(IsingModel {
            n,
            couplings: map,
            fields,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Couplings as `(i, j, J)` with `i < j`, in ascending pair order.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<f64> {
        self.couplings.get(&(i.min(j), i.max(j))).copied()
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn has_fields(&self) -> bool {
        self.fields.iter().any(|&h| h != 0.0)
    }

    /// `Σ|J| + Σ|h|`, an upper bound on `|energy|`.
    pub fn energy_bound(&self) -> f64 {
        self.couplings.values().map(|v| v.abs()).sum::<f64>() + self.fields.iter().map(|h| h.abs()).sum::<f64>()
    }

    pub fn energy(&self, config: &SpinConfig) -> Result<f64> {
        if config.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: config.len(),
            });
        }
        Ok(self.energy_of_index(config.index()))
    }

    /// Energy of the configuration whose bits are the binary digits of `index`.
    pub fn energy_of_index(&self, index: usize) -> f64 {
        let spin = |q: usize| if (index >> q) & 1 == 1 { -1.0 } else { 1.0 };
        let pair: f64 = self.couplings.iter().map(|(&(i, j), &v)| v * spin(i) * spin(j)).sum();
        let field: f64 = self.fields.iter().enumerate().map(|(q, &h)| h * spin(q)).sum();
        -pair - field
    }

    /// Energies of all `2^n` basis configurations.
    pub fn energy_table(&self) -> Result<Vec<f64>> {
        self.check_enumerable()?;
        Ok((0..1usize << self.n).map(|z| self.energy_of_index(z)).collect())
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.n > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "exhaustive enumeration",
                n: self.n,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok(())
    }

    /// Exhaustive minimum energy and every configuration attaining it.
    pub fn ground_states(&self) -> Result<(f64, Vec<SpinConfig>)> {
        self.check_enumerable()?;
        let mut best = f64::INFINITY;
        let mut configs = Vec::new();
        for z in 0..1usize << self.n {
            let e = self.energy_of_index(z);
            if e < best - 1e-9 {
                best = e;
                configs.clear();
            }
            if (e - best).abs() <= 1e-9 {
                configs.push(z);
            }
        }
        Ok((
            best,
            configs.into_iter().map(|z| SpinConfig::from_index(self.n, z)).collect(),
        ))
    }

    /// Model whose exact expectation equals the readout-corrupted expectation
    /// of `self` when every bit flips independently with probability `flip`.
    pub fn attenuated(&self, flip: f64) -> IsingModel {
        let f = 1.0 - 2.0 * flip;
        IsingModel {
            n: self.n,
            couplings: self.couplings.iter().map(|(&k, &v)| (k, v * f * f)).collect(),
            fields: self.fields.iter().map(|h| h * f).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDocument {
            n: self.n,
            couplings: self.couplings().collect(),
            fields: self.fields.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<IsingModel> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let doc: ModelDocument = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        IsingModel::new(doc.n, &doc.couplings, doc.fields)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    n: usize,
    couplings: Vec<(usize, usize, f64)>,
    fields: Vec<f64>,
}

/// Ring of `n` nodes with `J = +1` on every edge `(k, k+1 mod n)` except
/// edge `flipped_edge`, which gets `J = -1`. All fields are zero.
pub fn frustrated_ring(n: usize, flipped_edge: usize) -> Result<IsingModel> {
    if n < 3 {
        return Err(Error::InvalidModel(format!("a ring needs at least 3 nodes, got {n}")));
    }
    if flipped_edge >= n {
        return Err(Error::InvalidModel(format!(
            "flipped edge {flipped_edge} out of range for a {n}-node ring"
        )));
    }
    let couplings: Vec<_> = (0..n)
        .map(|k| (k, (k + 1) % n, if k == flipped_edge { -1.0 } else { 1.0 }))
        .collect();
    IsingModel::new(n, &couplings, vec![0.0; n])
}

/// The default frustrated ring: the closing edge `(n-1, 0)` carries `J = -1`.
pub fn default_frustrated_ring(n: usize) -> Result<IsingModel> {
    frustrated_ring(n, n.saturating_sub(1))
}
