//! Circuit evaluation backends, selected by name at runtime.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng_for};
use crate::sim::noise::{NoiseModel, TrajectorySimulator};
use crate::sim::sampling::sample_with;
use crate::sim::{simulate, ShotCounts};

use super::EnergyHistogram;

/// Inputs shared by every evaluation of one run.
pub struct EvalContext<'a> {
    /// Energy of every basis state.
    pub table: &'a [f64],
    /// Energy table with readout flips folded in (noisy backends).
    pub readout_table: &'a [f64],
    pub shots: u64,
    pub noise: Option<&'a NoiseModel>,
    pub trajectories: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub energy: f64,
    pub shots: Option<EnergyHistogram>,
}

pub trait Backend: Send + Sync {
    fn name(&self) -> &str;

    fn needs_noise(&self) -> bool {
        false
    }

    /// Whether results carry shot samples for the bootstrap.
    fn takes_shots(&self) -> bool;

    fn evaluate(&self, circuit: &Circuit, ctx: &EvalContext<'_>, seed: u64) -> Result<Evaluation>;
}

/// Exact expectation from the noiseless statevector.
pub struct Exact;

impl Backend for Exact {
    fn name(&self) -> &str {
        "exact"
    }

    fn takes_shots(&self) -> bool {
        false
    }

    fn evaluate(&self, circuit: &Circuit, ctx: &EvalContext<'_>, _: u64) -> Result<Evaluation> {
        let s = simulate(circuit)?;
        Ok(Evaluation {
            energy: s.expectation_diagonal(ctx.table)?,
            shots: None,
        })
    }
}

/// Mean energy over shots drawn from the noiseless statevector.
pub struct Sampled;

impl Backend for Sampled {
    fn name(&self) -> &str {
        "sampled"
    }

    fn takes_shots(&self) -> bool {
        true
    }

    fn evaluate(&self, circuit: &Circuit, ctx: &EvalContext<'_>, seed: u64) -> Result<Evaluation> {
        let s = simulate(circuit)?;
        let counts = sample_with(&s, ctx.shots, &mut rng_for(seed, &[]), None)?;
        let hist = EnergyHistogram::from_counts(&counts, ctx.table);
        Ok(Evaluation {
            energy: hist.mean().expect("at least one shot"),
            shots: Some(hist),
        })
    }
}

/// Trajectory-averaged exact expectation under a noise model, plus shots
/// spread evenly over the trajectories for the bootstrap.
pub struct Noisy;

impl Backend for Noisy {
    fn name(&self) -> &str {
        "noisy"
    }

    fn needs_noise(&self) -> bool {
        true
    }

    fn takes_shots(&self) -> bool {
        true
    }

    fn evaluate(&self, circuit: &Circuit, ctx: &EvalContext<'_>, seed: u64) -> Result<Evaluation> {
        let nm = ctx
            .noise
            .ok_or_else(|| Error::InvalidConfig("the noisy backend needs a noise model".into()))?;
        if ctx.trajectories == 0 {
            return Err(Error::InvalidConfig("at least one trajectory is required".into()));
        }
        let sim = TrajectorySimulator::new(circuit, nm)?;
        let clean_energy = sim.clean_state().expectation_diagonal(ctx.readout_table)?;
        let t = ctx.trajectories as u64;
        let mut energy = 0.0;
        let mut clean_shots = 0;
        let mut counts = ShotCounts::new(circuit.n_qubits());
        let mut shot_rng = rng_for(seed, &[u64::MAX]);
        for k in 0..t {
            let traj_seed = derive_seed(seed, &[k]);
            let shots = ctx.shots / t + u64::from(k < ctx.shots % t);
            match sim.errored_state(traj_seed)? {
                None => {
                    energy += clean_energy;
                    clean_shots += shots;
                }
                Some(state) => {
                    energy += state.expectation_diagonal(ctx.readout_table)?;
                    if shots > 0 {
                        counts.merge(&sample_with(&state, shots, &mut shot_rng, Some(nm))?);
                    }
                }
            }
        }
        if clean_shots > 0 {
            counts.merge(&sample_with(sim.clean_state(), clean_shots, &mut shot_rng, Some(nm))?);
        }
        Ok(Evaluation {
            energy: energy / t as f64,
            shots: Some(EnergyHistogram::from_counts(&counts, ctx.table)),
        })
    }
}

/// Backends by name.
#[derive(Clone)]
pub struct BackendRegistry {
    backends: BTreeMap<String, Arc<dyn Backend>>,
}

impl Default for BackendRegistry {
    fn default() -> Self {
        let mut r = BackendRegistry {
            backends: BTreeMap::new(),
        };
        r.register(Arc::new(Exact));
        r.register(Arc::new(Sampled));
        r.register(Arc::new(Noisy));
        r
    }
}

impl BackendRegistry {
    pub fn register(&mut self, backend: Arc<dyn Backend>) {
        self.backends.insert(backend.name().to_string(), backend);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Backend>> {
        self.backends.get(name).cloned().ok_or_else(|| Error::UnknownStrategy {
            kind: "backend",
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.backends.keys().map(String::as_str).collect()
    }
}
