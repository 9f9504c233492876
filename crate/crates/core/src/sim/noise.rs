//! Synthetic noise: stochastic Pauli channels after every gate, coherent
//! over-rotations, and readout bit flips.
//!
//! ```json
//! {"one_qubit_depol": 3e-4, "two_qubit_depol": 1e-2, "readout_flip": 1.5e-2, "coherent_zz": 0.1,
//!  "channels": {"CNOT": {"ZI": 0.01}}}
//! ```
//!
//! `channels` is optional. Its keys are a gate kind (`"H"`, `"RZZ"`, ...) or a
//! gate class (`"one_qubit"`, `"two_qubit"`); a table replaces the
//! depolarizing channel for the gates it matches, the most specific key
//! winning.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::StateVector;
use crate::circuit::matrix::{embed, gate_matrix, Matrix};
use crate::circuit::{Circuit, Cycle, CycleClass, Gate, GateKind, Pauli, PauliString};
use crate::error::{Error, Result};
use crate::seed::rng_for;

pub const PRESETS: [&str; 2] = ["falcon-like", "none"];

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub one_qubit_depol: f64,
    #[serde(default)]
    pub two_qubit_depol: f64,
    #[serde(default)]
    pub readout_flip: f64,
    /// Radians added to every RZZ angle; for CNOT circuits an `RZZ(δ)` is
    /// applied after every second CNOT on the same ordered pair.
    #[serde(default)]
    pub coherent_zz: f64,
    /// `RZ(ε)` on the target after every CNOT.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub coherent_target_z: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub channels: BTreeMap<String, BTreeMap<String, f64>>,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::noiseless()
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            one_qubit_depol: 0.0,
            two_qubit_depol: 0.0,
            readout_flip: 0.0,
            coherent_zz: 0.0,
            coherent_target_z: 0.0,
            channels: BTreeMap::new(),
        }
    }

    pub fn falcon_like() -> Self {
        NoiseModel {
            one_qubit_depol: 3.0e-4,
            two_qubit_depol: 1.0e-2,
            readout_flip: 1.5e-2,
            coherent_zz: 0.10,
            ..NoiseModel::noiseless()
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "falcon-like" => Some(NoiseModel::falcon_like()),
            "none" => Some(NoiseModel::noiseless()),
            _ => None,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let nm: NoiseModel = serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        nm.validate()?;
        Ok(nm)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("one_qubit_depol", self.one_qubit_depol),
            ("two_qubit_depol", self.two_qubit_depol),
            ("readout_flip", self.readout_flip),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidNoise(format!("{name} = {p} is not a probability")));
            }
        }
        for (name, x) in [
            ("coherent_zz", self.coherent_zz),
            ("coherent_target_z", self.coherent_target_z),
        ] {
            if !x.is_finite() {
                return Err(Error::InvalidNoise(format!("{name} must be finite")));
            }
        }
        for (key, table) in &self.channels {
            let arity = match key.as_str() {
                "one_qubit" => 1,
                "two_qubit" => 2,
                other => match GateKind::from_name(other) {
                    Some(GateKind::Measure) | None => {
                        return Err(Error::InvalidNoise(format!("unknown channel key '{other}'")));
                    }
                    Some(kind) => kind.arity(),
                },
            };
            PauliChannel::from_table(arity, table).map_err(|e| Error::InvalidNoise(format!("channels.{key}: {e}")))?;
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        *self == NoiseModel::noiseless()
    }

    fn channel_for(&self, kind: GateKind) -> Result<PauliChannel> {
        let arity = kind.arity();
        let class = if arity == 1 { "one_qubit" } else { "two_qubit" };
        if let Some(table) = self.channels.get(kind.name()).or_else(|| self.channels.get(class)) {
            return PauliChannel::from_table(arity, table).map_err(Error::InvalidNoise);
        }
        let p = if arity == 1 {
            self.one_qubit_depol
        } else {
            self.two_qubit_depol
        };
        Ok(PauliChannel::depolarizing(arity, p))
    }
}

/// A stochastic Pauli channel over the qubits of one gate; the remaining
/// probability mass is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannel {
    terms: Vec<(Vec<Pauli>, f64)>,
}

impl PauliChannel {
    /// Each of the `4^k - 1` non-identity Paulis with probability `p / (4^k - 1)`.
    pub fn depolarizing(arity: usize, p: f64) -> Self {
        if p == 0.0 {
            return PauliChannel { terms: Vec::new() };
        }
        let count = (1usize << (2 * arity)) - 1;
        let terms = (1..=count)
            .map(|code| {
                (
                    (0..arity).map(|k| Pauli::ALL[(code >> (2 * k)) & 3]).collect(),
                    p / count as f64,
                )
            })
            .collect();
        PauliChannel { terms }
    }

    /// Pauli strings are written qubit by qubit in gate order: `"XZ"` is X on
    /// the gate's first qubit and Z on its second.
    pub fn from_table(arity: usize, table: &BTreeMap<String, f64>) -> std::result::Result<Self, String> {
        let mut terms = Vec::new();
        let mut total = 0.0;
        for (label, &p) in table {
            let ops: Option<Vec<Pauli>> = label.chars().map(Pauli::from_char).collect();
            let ops = ops.ok_or_else(|| format!("'{label}' is not a Pauli string"))?;
            if ops.len() != arity {
                return Err(format!("'{label}' should act on {arity} qubit(s)"));
            }
            if ops.iter().all(|&o| o == Pauli::I) {
                return Err(format!("'{label}' is the identity; its probability is implied"));
            }
            if !(p.is_finite() && p >= 0.0) {
                return Err(format!("'{label}' has invalid probability {p}"));
            }
            total += p;
            if p > 0.0 {
                terms.push((ops, p));
            }
        }
        if total > 1.0 + 1e-12 {
            return Err(format!("probabilities sum to {total} > 1"));
        }
        Ok(PauliChannel { terms })
    }

    pub fn is_identity(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Vec<Pauli>, f64)] {
        &self.terms
    }

    /// Error probability.
    pub fn weight(&self) -> f64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    /// Maps a uniform draw in `[0, 1)` to a term, or `None` for the identity.
    fn pick(&self, u: f64) -> Option<usize> {
        let mut acc = 0.0;
        for (k, (_, p)) in self.terms.iter().enumerate() {
            acc += p;
            if u < acc {
                return Some(k);
            }
        }
        None
    }
}

/// One gate as executed: the gate with coherent errors folded in, then its
/// stochastic channel.
#[derive(Clone, Debug)]
struct Slot {
    ops: Vec<Gate>,
    qubits: Vec<usize>,
    channel: Option<usize>,
}

fn compile_slots(cycles: &[Cycle], nm: &NoiseModel) -> Result<(Vec<Slot>, Vec<PauliChannel>, Vec<usize>)> {
    let mut slots = Vec::new();
    let mut channels: Vec<PauliChannel> = Vec::new();
    let mut by_kind: HashMap<GateKind, Option<usize>> = HashMap::new();
    let mut cnot_parity: HashMap<(usize, usize), bool> = HashMap::new();
    let mut cycle_starts = Vec::new();
    for cycle in cycles.iter().filter(|c| c.class != CycleClass::Measurement) {
        cycle_starts.push(slots.len());
        for gate in &cycle.gates {
            let mut ops = Vec::with_capacity(2);
            match *gate {
                Gate::Rzz(a, b, theta) => ops.push(Gate::Rzz(a, b, theta + nm.coherent_zz)),
                Gate::Cnot(c, t) => {
                    ops.push(gate.clone());
                    if nm.coherent_target_z != 0.0 {
                        ops.push(Gate::Rz(t, nm.coherent_target_z));
                    }
                    let second = cnot_parity.entry((c, t)).or_insert(false);
                    *second = !*second;
                    if !*second && nm.coherent_zz != 0.0 {
                        ops.push(Gate::Rzz(c, t, nm.coherent_zz));
                    }
                }
                Gate::Measure(_) => return Err(Error::UnsupportedGate(gate.kind(), "noisy simulation")),
                _ => ops.push(gate.clone()),
            }
            let channel = match by_kind.get(&gate.kind()) {
                Some(&c) => c,
                None => {
                    let ch = nm.channel_for(gate.kind())?;
                    let id = (!ch.is_identity()).then(|| {
                        channels.push(ch);
                        channels.len() - 1
                    });
                    by_kind.insert(gate.kind(), id);
                    id
                }
            };
            slots.push(Slot {
                ops,
                qubits: gate.qubits(),
                channel,
            });
        }
    }
    Ok((slots, channels, cycle_starts))
}

/// Largest register for which a state is cached at every cycle boundary.
const CHECKPOINT_QUBITS: usize = 16;

/// Samples Pauli trajectories of one circuit under a noise model.
///
/// Errors are drawn before any amplitudes are touched. Error-free
/// trajectories reuse the cached coherent state, and the others resume from
/// the last cycle boundary before their first error.
#[derive(Clone, Debug)]
pub struct TrajectorySimulator {
    slots: Vec<Slot>,
    channels: Vec<PauliChannel>,
    /// `(first slot, state before it)`, ascending.
    checkpoints: Vec<(usize, StateVector)>,
    clean: StateVector,
}

impl TrajectorySimulator {
    pub fn new(c: &Circuit, nm: &NoiseModel) -> Result<Self> {
        nm.validate()?;
        let (slots, channels, cycle_starts) = compile_slots(c.cycles(), nm)?;
        let mut state = StateVector::zero(c.n_qubits())?;
        let mut checkpoints = vec![(0, state.clone())];
        let keep_all = c.n_qubits() <= CHECKPOINT_QUBITS;
        for (k, slot) in slots.iter().enumerate() {
            if keep_all && k > 0 && cycle_starts.contains(&k) {
                checkpoints.push((k, state.clone()));
            }
            for op in &slot.ops {
                state.apply_gate(op)?;
            }
        }
        Ok(TrajectorySimulator {
            slots,
            channels,
            checkpoints,
            clean: state,
        })
    }

    /// The trajectory with no stochastic errors (coherent errors included).
    pub fn clean_state(&self) -> &StateVector {
        &self.clean
    }

    /// Probability that a trajectory has no stochastic error.
    pub fn error_free_probability(&self) -> f64 {
        self.slots
            .iter()
            .filter_map(|s| s.channel)
            .map(|c| 1.0 - self.channels[c].weight())
            .product()
    }

    fn plan(&self, seed: u64) -> Vec<(usize, usize)> {
        let mut rng = rng_for(seed, &[]);
        let mut plan = Vec::new();
        for (k, slot) in self.slots.iter().enumerate() {
            if let Some(c) = slot.channel {
                let u: f64 = rng.random();
                if let Some(term) = self.channels[c].pick(u) {
                    plan.push((k, term));
                }
            }
        }
        plan
    }

    fn run_plan(&self, plan: &[(usize, usize)]) -> Result<StateVector> {
        let first = plan[0].0;
        let (start, state) = self
            .checkpoints
            .iter()
            .rev()
            .find(|(k, _)| *k <= first)
            .expect("the initial state is always a checkpoint");
        let mut state = state.clone();
        let mut errors = plan.iter().peekable();
        for (k, slot) in self.slots.iter().enumerate().skip(*start) {
            for op in &slot.ops {
                state.apply_gate(op)?;
            }
            if let Some(&&(at, term)) = errors.peek() {
                if at == k {
                    let (paulis, _) = &self.channels[slot.channel.unwrap()].terms[term];
                    for (&q, &p) in slot.qubits.iter().zip(paulis) {
                        state.apply_pauli(q, p);
                    }
                    errors.next();
                }
            }
        }
        Ok(state)
    }

    /// Final state of trajectory `seed`.
    pub fn state(&self, seed: u64) -> Result<StateVector> {
        Ok(self.errored_state(seed)?.unwrap_or_else(|| self.clean.clone()))
    }

    /// Final state of trajectory `seed`, or `None` when it draws no
    /// stochastic error and so ends in [`Self::clean_state`].
    pub fn errored_state(&self, seed: u64) -> Result<Option<StateVector>> {
        let plan = self.plan(seed);
        if plan.is_empty() {
            return Ok(None);
        }
        self.run_plan(&plan).map(Some)
    }

    /// Diagonal expectation of trajectory `seed`; `clean_value` is the
    /// expectation on [`Self::clean_state`].
    pub fn expectation(&self, seed: u64, table: &[f64], clean_value: f64) -> Result<f64> {
        let plan = self.plan(seed);
        if plan.is_empty() {
            return Ok(clean_value);
        }
        self.run_plan(&plan)?.expectation_diagonal(table)
    }
}

/// One stochastic trajectory of `c` from `|0…0⟩`.
pub fn simulate_noisy_trajectory(c: &Circuit, nm: &NoiseModel, seed: u64) -> Result<StateVector> {
    TrajectorySimulator::new(c, nm)?.state(seed)
}

/// The noisy action of one cycle on an `n_qubits` register as a mixture of
/// unitaries `Σ p_k U_k ρ U_k†`.
pub fn noisy_cycle_mixture(cycle: &Cycle, nm: &NoiseModel, n_qubits: usize) -> Result<Vec<(f64, Matrix)>> {
    nm.validate()?;
    let (slots, channels, _) = compile_slots(std::slice::from_ref(cycle), nm)?;
    let dim = 1usize << n_qubits;
    let mut mixture = vec![(1.0, Matrix::identity(dim, dim))];
    for slot in &slots {
        let mut u = Matrix::identity(dim, dim);
        for op in &slot.ops {
            u = embed(&gate_matrix(op)?, &op.qubits(), n_qubits) * u;
        }
        let mut branches = Vec::new();
        match slot.channel {
            None => branches.push((1.0, u)),
            Some(c) => {
                let ch = &channels[c];
                branches.push((1.0 - ch.weight(), u.clone()));
                for (paulis, p) in &ch.terms {
                    let mut ops = vec![Pauli::I; n_qubits];
                    for (&q, &o) in slot.qubits.iter().zip(paulis) {
                        ops[q] = o;
                    }
                    branches.push((*p, pauli_matrix(&PauliString::new(ops)) * &u));
                }
            }
        }
        mixture = mixture
            .iter()
            .flat_map(|(p, acc)| branches.iter().map(move |(q, b)| (p * q, b * acc)))
            .collect();
    }
    Ok(mixture)
}

/// Dense matrix of a signed Pauli string (qubit 0 least significant).
pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let n = p.len();
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim, dim);
    let i = num_complex::Complex64::new(0.0, 1.0);
    for col in 0..dim {
        let mut row = col;
        let mut amp = num_complex::Complex64::new(f64::from(p.sign()), 0.0);
        for (q, op) in p.ops().iter().enumerate() {
            let bit = (col >> q) & 1;
            match op {
                Pauli::I => {}
                Pauli::X => row ^= 1 << q,
                Pauli::Y => {
                    row ^= 1 << q;
                    amp *= if bit == 0 { i } else { -i };
                }
                Pauli::Z => {
                    if bit == 1 {
                        amp = -amp;
                    }
                }
            }
        }
        m[(row, col)] = amp;
    }
    m
}
