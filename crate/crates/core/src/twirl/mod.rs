//! Frame randomization: random single-qubit frames around every hard cycle,
//! with the frames and their corrections folded into the neighbouring easy
//! cycles so the cycle count never changes.

pub mod fold;
pub mod ptm;
pub mod sampler;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Cycle, CycleClass};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

pub use fold::{fold_frame_into_easy_cycle, Side};
pub use ptm::twirl_average_channel;
pub use sampler::{CycleFrame, FrameRng, FrameSampler, SamplerRegistry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwirlConfig {
    pub mode: String,
    pub n_compilations: usize,
    pub seed: u64,
}

impl TwirlConfig {
    /// `mode = "none"` always yields a single compilation.
    pub fn new(mode: &str, n_compilations: usize, seed: u64) -> Result<Self> {
        if n_compilations == 0 {
            return Err(Error::InvalidConfig("at least one compilation is required".into()));
        }
        let n_compilations = if mode == "none" { 1 } else { n_compilations };
        Ok(TwirlConfig {
            mode: mode.to_string(),
            n_compilations,
            seed,
        })
    }

    pub fn none() -> Self {
        TwirlConfig {
            mode: "none".into(),
            n_compilations: 1,
            seed: 0,
        }
    }

    /// Seed recorded for compilation `index`.
    pub fn compilation_seed(&self, index: usize) -> u64 {
        derive_seed(self.seed, &[index as u64])
    }
}

/// Frames drawn for every hard cycle of one compilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameAssignment {
    pub frames: Vec<CycleFrame>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compilation {
    pub index: usize,
    pub seed: u64,
    pub circuit: Circuit,
    pub assignment: FrameAssignment,
}

/// `cfg.n_compilations` randomized circuits equivalent to `c`.
pub fn randomize(c: &Circuit, cfg: &TwirlConfig) -> Result<Vec<Circuit>> {
    Ok(randomize_with(&SamplerRegistry::default(), c, cfg)?
        .into_iter()
        .map(|comp| comp.circuit)
        .collect())
}

pub fn randomize_with(registry: &SamplerRegistry, c: &Circuit, cfg: &TwirlConfig) -> Result<Vec<Compilation>> {
    if cfg.n_compilations == 0 {
        return Err(Error::InvalidConfig("at least one compilation is required".into()));
    }
    let sampler = registry.get(&cfg.mode)?;
    let normalized = c.normalized();
    (0..cfg.n_compilations)
        .into_par_iter()
        .map(|i| compile_one(sampler.as_ref(), &normalized, cfg, i))
        .collect()
}

/// One compilation of an already normalized circuit.
pub fn compile_one(
    sampler: &dyn FrameSampler,
    normalized: &Circuit,
    cfg: &TwirlConfig,
    index: usize,
) -> Result<Compilation> {
    let n = normalized.n_qubits();
    let mut cycles: Vec<Cycle> = normalized.cycles().to_vec();
    let mut frames = Vec::new();
    for (j, cycle) in normalized.cycles().iter().enumerate() {
        if cycle.class != CycleClass::Hard {
            continue;
        }
        let rng = FrameRng {
            master: cfg.seed,
            compilation: index as u64,
            cycle: j as u64,
        };
        let frame = sampler.draw(cycle, j, n, &rng)?;
        cycles[j] = Cycle::hard(
            cycle
                .gates
                .iter()
                .zip(&frame.angle_signs)
                .map(|(g, &s)| match g.angle() {
                    Some(theta) if s < 0 => g.with_angle(-theta),
                    _ => g.clone(),
                })
                .collect(),
        );
        cycles[j - 1] = fold_frame_into_easy_cycle(&cycles[j - 1], &frame.entry, Side::After);
        cycles[j + 1] = fold_frame_into_easy_cycle(&cycles[j + 1], &frame.exit, Side::Before);
        frames.push(frame);
    }
    Ok(Compilation {
        index,
        seed: cfg.compilation_seed(index),
        circuit: Circuit::new(n, cycles)?,
        assignment: FrameAssignment { frames },
    })
}
