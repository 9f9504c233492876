//! Energy landscapes over a `(γ, β)` grid.

pub mod backend;
pub mod heatmap;
pub mod io;
pub mod stats;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::qaoa::{build_qaoa_circuit, decompose_rzz, QaoaParams};
use crate::seed::derive_seed;
use crate::sim::noise::NoiseModel;
use crate::sim::ShotCounts;
use crate::twirl::{compile_one, SamplerRegistry, TwirlConfig};

pub use backend::{Backend, BackendRegistry, EvalContext, Evaluation};
pub use stats::{
    bayesian_bootstrap, bootstrap_landscape, compare_runs, extremal, BootstrapResult, Comparison, ExtremalReport,
};

/// Inclusive, uniformly spaced grid: `n` points on `[a, b]` have step
/// `(b - a) / (n - 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_gamma: usize,
    pub n_beta: usize,
    pub gamma_range: (f64, f64),
    pub beta_range: (f64, f64),
}

impl GridSpec {
    pub fn new(n_gamma: usize, n_beta: usize, gamma_range: (f64, f64), beta_range: (f64, f64)) -> Result<Self> {
        if n_gamma < 2 || n_beta < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 values per axis, got {n_gamma}×{n_beta}"
            )));
        }
        for (name, (a, b)) in [("gamma", gamma_range), ("beta", beta_range)] {
            if !(a.is_finite() && b.is_finite()) || a >= b {
                return Err(Error::InvalidConfig(format!("{name} range [{a}, {b}] is degenerate")));
            }
        }
        Ok(GridSpec {
            n_gamma,
            n_beta,
            gamma_range,
            beta_range,
        })
    }

    /// `n × n` on `[a, b]²`.
    pub fn square(n: usize, range: (f64, f64)) -> Result<Self> {
        GridSpec::new(n, n, range, range)
    }

    fn axis(n: usize, (a, b): (f64, f64)) -> Vec<f64> {
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn gammas(&self) -> Vec<f64> {
        GridSpec::axis(self.n_gamma, self.gamma_range)
    }

    pub fn betas(&self) -> Vec<f64> {
        GridSpec::axis(self.n_beta, self.beta_range)
    }

    /// Grid points in γ-major order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let betas = self.betas();
        self.gammas()
            .into_iter()
            .flat_map(|g| betas.iter().map(move |&b| (g, b)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_gamma * self.n_beta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Shot energies grouped by level, ascending.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyHistogram {
    levels: Vec<(f64, u64)>,
}

impl EnergyHistogram {
    pub fn new(pairs: impl IntoIterator<Item = (f64, u64)>) -> Self {
        let mut by_bits: HashMap<u64, u64> = HashMap::new();
        for (e, k) in pairs {
            if k > 0 {
                // -0.0 and 0.0 are the same level
                *by_bits.entry((e + 0.0).to_bits()).or_default() += k;
            }
        }
        let mut levels: Vec<(f64, u64)> = by_bits.into_iter().map(|(b, k)| (f64::from_bits(b), k)).collect();
        levels.sort_by(|a, b| a.0.total_cmp(&b.0));
        EnergyHistogram { levels }
    }

    pub fn from_counts(counts: &ShotCounts, table: &[f64]) -> Self {
        EnergyHistogram::new(counts.iter().map(|(z, k)| (table[z], k)))
    }

    pub fn levels(&self) -> &[(f64, u64)] {
        &self.levels
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().map(|l| l.1).sum()
    }

    pub fn mean(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| self.levels.iter().map(|&(e, k)| e * k as f64).sum::<f64>() / n as f64)
    }

    pub fn merge(&mut self, other: &EnergyHistogram) {
        *self = EnergyHistogram::new(self.levels.iter().chain(&other.levels).copied());
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandscapePoint {
    pub gamma: f64,
    pub beta: f64,
    /// Mean of `per_compilation_energies`.
    pub energy: f64,
    pub per_compilation_energies: Vec<f64>,
    /// Shots pooled over compilations, when the backend samples.
    pub shots: Option<EnergyHistogram>,
}

impl LandscapePoint {
    pub fn new(gamma: f64, beta: f64, per_compilation_energies: Vec<f64>, shots: Option<EnergyHistogram>) -> Self {
        let energy = per_compilation_energies.iter().sum::<f64>() / per_compilation_energies.len() as f64;
        LandscapePoint {
            gamma,
            beta,
            energy,
            per_compilation_energies,
            shots,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LandscapeGrid {
    pub points: Vec<LandscapePoint>,
    pub backend: String,
    /// True when energies carry no sampling noise.
    pub deterministic: bool,
    /// Shots per compilation; 0 when nothing was sampled.
    pub shots: u64,
    pub n_compilations: usize,
}

/// Everything a run needs besides the model and grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub backend: String,
    pub shots: u64,
    pub twirl: TwirlConfig,
    pub noise: Option<NoiseModel>,
    pub seed: u64,
    pub trajectories: usize,
    /// Build circuits with RZZ decomposed into CNOT·RZ·CNOT.
    pub decompose: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            backend: "exact".into(),
            shots: 5000,
            twirl: TwirlConfig::none(),
            noise: None,
            seed: 0,
            trajectories: 200,
            decompose: false,
        }
    }
}

/// Circuit for one grid point, before twirling.
pub fn point_circuit(m: &IsingModel, gamma: f64, beta: f64, decompose: bool) -> Result<Circuit> {
    let c = build_qaoa_circuit(m, &QaoaParams::single(gamma, beta)?)?;
    if decompose {
        decompose_rzz(&c)
    } else {
        Ok(c)
    }
}

pub fn run_landscape(m: &IsingModel, grid: &GridSpec, opts: &RunOptions) -> Result<LandscapeGrid> {
    run_landscape_with(&BackendRegistry::default(), &SamplerRegistry::default(), m, grid, opts)
}

/// Evaluates every `(point, compilation)` pair in parallel. Task seeds depend
/// only on the master seed and the pair, never on scheduling.
pub fn run_landscape_with(
    backends: &BackendRegistry,
    samplers: &SamplerRegistry,
    m: &IsingModel,
    grid: &GridSpec,
    opts: &RunOptions,
) -> Result<LandscapeGrid> {
    let backend = backends.get(&opts.backend)?;
    let sampler = samplers.get(&opts.twirl.mode)?;
    match (&opts.noise, backend.needs_noise()) {
        (None, true) => {
            return Err(Error::InvalidConfig(format!(
                "the {} backend needs a noise model",
                backend.name()
            )));
        }
        (Some(_), false) => {
            return Err(Error::InvalidConfig(format!(
                "the {} backend does not take a noise model",
                backend.name()
            )));
        }
        (Some(nm), true) => nm.validate()?,
        (None, false) => {}
    }
    if backend.takes_shots() && opts.shots == 0 {
        return Err(Error::InvalidConfig("shot count must be at least 1".into()));
    }
    if opts.twirl.n_compilations == 0 {
        return Err(Error::InvalidConfig("at least one compilation is required".into()));
    }
    let table = m.energy_table()?;
    let readout_table = match &opts.noise {
        Some(nm) if nm.readout_flip > 0.0 => m.attenuated(nm.readout_flip).energy_table()?,
        _ => table.clone(),
    };
    let ctx = EvalContext {
        table: &table,
        readout_table: &readout_table,
        shots: opts.shots,
        noise: opts.noise.as_ref(),
        trajectories: opts.trajectories,
    };
    let coords = grid.points();
    let n_comp = opts.twirl.n_compilations;
    let tasks: Vec<(usize, usize)> = (0..coords.len())
        .flat_map(|p| (0..n_comp).map(move |c| (p, c)))
        .collect();
    let results: Vec<Evaluation> = tasks
        .par_iter()
        .map(|&(p, c)| {
            let (gamma, beta) = coords[p];
            let attempt = || -> Result<Evaluation> {
                let bare = point_circuit(m, gamma, beta, opts.decompose)?;
                let twirl = TwirlConfig {
                    seed: derive_seed(opts.twirl.seed, &[p as u64]),
                    ..opts.twirl.clone()
                };
                let compiled = compile_one(sampler.as_ref(), &bare.normalized(), &twirl, c)?;
                backend.evaluate(&compiled.circuit, &ctx, derive_seed(opts.seed, &[p as u64, c as u64]))
            };
            attempt().map_err(|e| Error::GridPoint {
                index: p,
                gamma,
                beta,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let points = coords
        .iter()
        .zip(results.chunks(n_comp))
        .map(|(&(gamma, beta), evals)| {
            let shots = evals.iter().try_fold(EnergyHistogram::default(), |mut acc, e| {
                acc.merge(e.shots.as_ref()?);
                Some(acc)
            });
            LandscapePoint::new(gamma, beta, evals.iter().map(|e| e.energy).collect(), shots)
        })
        .collect();
    Ok(LandscapeGrid {
        points,
        backend: backend.name().to_string(),
        deterministic: !backend.takes_shots(),
        shots: if backend.takes_shots() { opts.shots } else { 0 },
        n_compilations: n_comp,
    })
}
