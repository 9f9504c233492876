//! Frame samplers, selected by name at runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::clifford::{table, GROUP_ORDER};
use crate::circuit::{
    conjugate_clifford_through_cycle, conjugate_pauli_through_gate, CliffordId, Cycle, Pauli, PauliString,
};
use crate::error::{Error, Result};
use crate::seed::rng_for;

/// Frames around one hard cycle, indexed by register qubit.
///
/// The twirled cycle is `exit · cycle(s·θ) · entry`, which equals the bare
/// cycle up to global phase; `angle_signs[k]` is `s` for gate `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleFrame {
    pub cycle: usize,
    pub entry: Vec<CliffordId>,
    pub exit: Vec<CliffordId>,
    pub angle_signs: Vec<i8>,
}

impl CycleFrame {
    pub fn identity(cycle: usize, n_qubits: usize, n_gates: usize) -> Self {
        CycleFrame {
            cycle,
            entry: vec![CliffordId::IDENTITY; n_qubits],
            exit: vec![CliffordId::IDENTITY; n_qubits],
            angle_signs: vec![1; n_gates],
        }
    }
}

/// Per-qubit random streams for one hard cycle of one compilation.
#[derive(Clone, Copy, Debug)]
pub struct FrameRng {
    pub master: u64,
    pub compilation: u64,
    pub cycle: u64,
}

impl FrameRng {
    pub fn qubit(&self, q: usize) -> ChaCha8Rng {
        rng_for(self.master, &[self.compilation, self.cycle, q as u64])
    }
}

pub trait FrameSampler: Send + Sync {
    fn name(&self) -> &str;

    /// Draws frames for the hard cycle at `cycle_index` of a normalized circuit.
    fn draw(&self, cycle: &Cycle, cycle_index: usize, n_qubits: usize, rng: &FrameRng) -> Result<CycleFrame>;
}

pub struct NoFrames;

impl FrameSampler for NoFrames {
    fn name(&self) -> &str {
        "none"
    }

    fn draw(&self, cycle: &Cycle, cycle_index: usize, n_qubits: usize, _: &FrameRng) -> Result<CycleFrame> {
        Ok(CycleFrame::identity(cycle_index, n_qubits, cycle.gates.len()))
    }
}

/// Uniform Pauli frames on every qubit.
pub struct PauliFrames;

impl FrameSampler for PauliFrames {
    fn name(&self) -> &str {
        "pauli"
    }

    fn draw(&self, cycle: &Cycle, cycle_index: usize, n_qubits: usize, rng: &FrameRng) -> Result<CycleFrame> {
        let paulis: Vec<Pauli> = (0..n_qubits)
            .map(|q| Pauli::ALL[rng.qubit(q).random_range(0..4)])
            .collect();
        pauli_frame(cycle, cycle_index, &paulis)
    }
}

/// Frame for a fixed Pauli entry assignment.
pub fn pauli_frame(cycle: &Cycle, cycle_index: usize, paulis: &[Pauli]) -> Result<CycleFrame> {
    let t = table();
    let entry: Vec<CliffordId> = paulis.iter().map(|&p| t.from_pauli(p)).collect();
    let mut exit = entry.clone();
    let mut angle_signs = Vec::with_capacity(cycle.gates.len());
    for gate in &cycle.gates {
        let qs = gate.qubits();
        let local = PauliString::new(qs.iter().map(|&q| paulis[q]).collect());
        let (moved, sign) = conjugate_pauli_through_gate(gate, &local)?;
        for (k, &q) in qs.iter().enumerate() {
            exit[q] = t.from_pauli(moved.ops()[k]);
        }
        angle_signs.push(sign);
    }
    Ok(CycleFrame {
        cycle: cycle_index,
        entry,
        exit,
        angle_signs,
    })
}

/// Uniform single-qubit Clifford frames. A draw whose correction would not
/// factor into single-qubit gates is redrawn, qubit by qubit, from the
/// gate's acceptance subgroup.
pub struct CliffordFrames;

impl FrameSampler for CliffordFrames {
    fn name(&self) -> &str {
        "clifford"
    }

    fn draw(&self, cycle: &Cycle, cycle_index: usize, n_qubits: usize, rng: &FrameRng) -> Result<CycleFrame> {
        let t = table();
        let mut rngs: Vec<ChaCha8Rng> = (0..n_qubits).map(|q| rng.qubit(q)).collect();
        let mut entry: Vec<CliffordId> = rngs
            .iter_mut()
            .map(|r| CliffordId::new(r.random_range(0..GROUP_ORDER)).unwrap())
            .collect();
        let inverse = |frame: &[CliffordId]| frame.iter().map(|&c| t.inverse(c)).collect::<Vec<_>>();
        for gate in &cycle.gates {
            let single = Cycle::hard(vec![gate.clone()]);
            match conjugate_clifford_through_cycle(&single, &inverse(&entry)) {
                Ok(_) => continue,
                Err(Error::NonLocalCorrection(_)) => {}
                Err(e) => return Err(e),
            }
            for (position, q) in gate.qubits().into_iter().enumerate() {
                let subgroup = t.acceptance_subgroup(gate.kind(), position);
                if subgroup.is_empty() {
                    return Err(Error::EmptyAcceptanceSubgroup {
                        gate: gate.kind(),
                        cycle: cycle_index,
                    });
                }
                if !subgroup.contains(&entry[q]) {
                    entry[q] = subgroup[rngs[q].random_range(0..subgroup.len())];
                }
            }
        }
        // cycle(θ)·entry⁻¹ = exit·cycle(s·θ)  ⇒  cycle(θ) = exit·cycle(s·θ)·entry
        let moved = conjugate_clifford_through_cycle(cycle, &inverse(&entry))?;
        Ok(CycleFrame {
            cycle: cycle_index,
            entry,
            exit: moved.correction,
            angle_signs: moved.angle_signs,
        })
    }
}

/// Frame samplers by name.
#[derive(Clone)]
pub struct SamplerRegistry {
    samplers: BTreeMap<String, Arc<dyn FrameSampler>>,
}

impl Default for SamplerRegistry {
    fn default() -> Self {
        let mut r = SamplerRegistry::empty();
        r.register(Arc::new(NoFrames));
        r.register(Arc::new(PauliFrames));
        r.register(Arc::new(CliffordFrames));
        r
    }
}

impl SamplerRegistry {
    pub fn empty() -> Self {
        SamplerRegistry {
            samplers: BTreeMap::new(),
        }
    }

    /// Adds or replaces a sampler under its own name.
    pub fn register(&mut self, sampler: Arc<dyn FrameSampler>) {
        self.samplers.insert(sampler.name().to_string(), sampler);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn FrameSampler>> {
        self.samplers.get(name).cloned().ok_or_else(|| Error::UnknownStrategy {
            kind: "twirl mode",
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.samplers.keys().map(String::as_str).collect()
    }
}
