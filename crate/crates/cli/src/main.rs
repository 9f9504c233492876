use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use twirl_core::circuit::{circuit_from_json, circuit_to_json};
use twirl_core::ising::{frustrated_ring, IsingModel};
use twirl_core::landscape::heatmap::render_pgm;
use twirl_core::landscape::io::{landscape_rows, read_landscape_csv, report_to_json, write_landscape_csv};
use twirl_core::landscape::{bootstrap_landscape, run_landscape, GridSpec, RunOptions};
use twirl_core::seed::derive_seed;
use twirl_core::sim::noise::PRESETS;
use twirl_core::sim::verify::check_equivalence;
use twirl_core::sim::NoiseModel;
use twirl_core::twirl::{randomize_with, SamplerRegistry, TwirlConfig};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

/// Seed path for the bootstrap stream, apart from every task seed.
const BOOTSTRAP_STREAM: u64 = u64::MAX;

/// Equivalence threshold for `verify`.
const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-8;

#[derive(Parser)]
#[command(
    name = "qtwirl",
    version,
    about = "Frame-randomized QAOA landscapes on frustrated Ising rings"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a frustrated-ring Ising model.
    Ring(RingArgs),
    /// Sweep the p = 1 QAOA energy over a (γ, β) grid.
    Landscape(LandscapeArgs),
    /// Emit randomized compilations of a circuit.
    Twirl(TwirlArgs),
    /// Check that two circuits implement the same unitary.
    Verify(VerifyArgs),
    /// Render a landscape CSV as a grayscale PGM.
    Heatmap(HeatmapArgs),
}

#[derive(Args)]
struct RingArgs {
    #[arg(long)]
    nodes: usize,
    /// Index k of the antiferromagnetic edge (k, k+1 mod n). Defaults to n-1.
    #[arg(long)]
    flip_edge: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LandscapeArgs {
    #[arg(long)]
    model: PathBuf,
    /// Points per axis.
    #[arg(long, default_value_t = 17)]
    grid: usize,
    /// Inclusive range for both γ and β, as `a,b`.
    #[arg(long, default_value = "0,1", value_parser = parse_range)]
    range: (f64, f64),
    /// Shots per compilation.
    #[arg(long, default_value_t = 5000)]
    shots: u64,
    /// exact, sampled or noisy.
    #[arg(long, default_value = "exact")]
    backend: String,
    /// Noise preset name or noise-model JSON file.
    #[arg(long)]
    noise: Option<String>,
    /// none, pauli or clifford.
    #[arg(long, default_value = "none")]
    twirl: String,
    /// Randomized compilations per point (default 20, or 1 without twirling).
    #[arg(long)]
    compilations: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise trajectories per compilation.
    #[arg(long, default_value_t = 200)]
    trajectories: usize,
    /// Bayesian-bootstrap resamples.
    #[arg(long, default_value_t = 1000)]
    bootstrap: usize,
    /// Build RZZ as CNOT·RZ·CNOT.
    #[arg(long)]
    decompose: bool,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct TwirlArgs {
    #[arg(long)]
    circuit: PathBuf,
    /// none, pauli or clifford.
    #[arg(long, default_value = "pauli")]
    mode: String,
    #[arg(long, default_value_t = 20)]
    compilations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    against: PathBuf,
    /// Random input states for circuits too large for a full unitary.
    #[arg(long, default_value_t = 8)]
    states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct HeatmapArgs {
    #[arg(long)]
    landscape: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

/// Flags of a landscape run, stored next to its outputs.
#[derive(Debug, Serialize, Deserialize)]
struct RunConfig {
    model_path: PathBuf,
    model: serde_json::Value,
    grid: usize,
    range: (f64, f64),
    backend: String,
    shots: u64,
    twirl: String,
    compilations: usize,
    seed: u64,
    trajectories: usize,
    bootstrap: usize,
    decompose: bool,
    noise: Option<String>,
    noise_model: Option<NoiseModel>,
}

#[derive(Serialize)]
struct Manifest {
    circuit: PathBuf,
    mode: String,
    n_compilations: usize,
    seed: u64,
    compilations: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    index: usize,
    seed: u64,
    file: String,
}

/// Bad user input, reported with exit code 2.
#[derive(Debug)]
struct ConfigError(String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'a,b', got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    let config = e.chain().any(|cause| {
        cause.is::<ConfigError>()
            || cause
                .downcast_ref::<twirl_core::Error>()
                .is_some_and(twirl_core::Error::is_config_error)
    });
    if config {
        EXIT_CONFIG
    } else {
        EXIT_RUNTIME
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(config("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    match cli.command {
        Command::Ring(a) => cmd_ring(a),
        Command::Landscape(a) => cmd_landscape(a),
        Command::Twirl(a) => cmd_twirl(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Heatmap(a) => cmd_heatmap(a),
    }
}

fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| config(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, contents: impl AsRef<[u8]>) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn cmd_ring(a: RingArgs) -> anyhow::Result<ExitCode> {
    let model = frustrated_ring(a.nodes, a.flip_edge.unwrap_or(a.nodes.saturating_sub(1)))?;
    let json = with_newline(model.to_json()?);
    match a.output {
        Some(path) => write_output(&path, json)?,
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_noise(spec: &str) -> anyhow::Result<NoiseModel> {
    if let Some(nm) = NoiseModel::preset(spec) {
        return Ok(nm);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(config(format!(
            "'{spec}' is neither a noise preset ({}) nor a file",
            PRESETS.join(", ")
        )));
    }
    let nm = NoiseModel::from_json(&read_input(path)?).with_context(|| format!("noise model {spec}"))?;
    nm.validate()?;
    Ok(nm)
}

fn cmd_landscape(a: LandscapeArgs) -> anyhow::Result<ExitCode> {
    let model_text = read_input(&a.model)?;
    let model = IsingModel::from_json(&model_text).with_context(|| format!("model {}", a.model.display()))?;
    let grid = GridSpec::square(a.grid, a.range)?;
    let noise = a.noise.as_deref().map(resolve_noise).transpose()?;
    let compilations = a.compilations.unwrap_or(if a.twirl == "none" { 1 } else { 20 });
    let twirl = TwirlConfig::new(&a.twirl, compilations, a.seed)?;
    let opts = RunOptions {
        backend: a.backend.clone(),
        shots: a.shots,
        twirl: twirl.clone(),
        noise: noise.clone(),
        seed: a.seed,
        trajectories: a.trajectories,
        decompose: a.decompose,
    };
    let run_config = RunConfig {
        model_path: a.model.clone(),
        model: serde_json::from_str(&model.to_json()?)?,
        grid: a.grid,
        range: a.range,
        backend: a.backend,
        shots: a.shots,
        twirl: twirl.mode,
        compilations: twirl.n_compilations,
        seed: a.seed,
        trajectories: a.trajectories,
        bootstrap: a.bootstrap,
        decompose: a.decompose,
        noise: a.noise,
        noise_model: noise,
    };

    let landscape = run_landscape(&model, &grid, &opts)?;
    let boot = bootstrap_landscape(&landscape, a.bootstrap, derive_seed(a.seed, &[BOOTSTRAP_STREAM]))?;
    let rows = landscape_rows(&landscape, &boot.point_two_sigma)?;

    fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    let mut csv = Vec::new();
    write_landscape_csv(&mut csv, &rows)?;
    write_output(&a.output.join("landscape.csv"), csv)?;
    write_output(
        &a.output.join("extremal.json"),
        with_newline(report_to_json(&boot.report)?),
    )?;
    write_output(
        &a.output.join("config.json"),
        with_newline(serde_json::to_string_pretty(&run_config)?),
    )?;
    let r = &boot.report;
    println!(
        "extremal |E| = {} ± {} at gamma={} beta={} ({} points)",
        r.extremal_abs_energy,
        r.two_sigma,
        r.gamma,
        r.beta,
        rows.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_twirl(a: TwirlArgs) -> anyhow::Result<ExitCode> {
    let circuit =
        circuit_from_json(&read_input(&a.circuit)?).with_context(|| format!("circuit {}", a.circuit.display()))?;
    let cfg = TwirlConfig::new(&a.mode, a.compilations, a.seed)?;
    let compilations = randomize_with(&SamplerRegistry::default(), &circuit, &cfg)?;
    fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    let mut entries = Vec::with_capacity(compilations.len());
    for c in &compilations {
        let file = format!("rc_{}.json", c.index);
        write_output(&a.output.join(&file), with_newline(circuit_to_json(&c.circuit)?))?;
        entries.push(ManifestEntry {
            index: c.index,
            seed: c.seed,
            file,
        });
    }
    let manifest = Manifest {
        circuit: a.circuit,
        mode: cfg.mode,
        n_compilations: cfg.n_compilations,
        seed: cfg.seed,
        compilations: entries,
    };
    write_output(
        &a.output.join("manifest.json"),
        with_newline(serde_json::to_string_pretty(&manifest)?),
    )?;
    println!("wrote {} compilation(s) to {}", compilations.len(), a.output.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let load = |p: &Path| -> anyhow::Result<_> {
        circuit_from_json(&read_input(p)?).with_context(|| format!("circuit {}", p.display()))
    };
    let (x, y) = (load(&a.circuit)?, load(&a.against)?);
    let e = check_equivalence(&x, &y, a.states, a.seed)?;
    let verdict = e.fidelity >= FIDELITY_THRESHOLD;
    println!(
        "method: {}",
        serde_json::to_value(e.method)?.as_str().unwrap_or_default()
    );
    println!("fidelity: {}", e.fidelity);
    println!("deficit: {:e}", e.deficit());
    println!("equivalent: {verdict}");
    Ok(if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_heatmap(a: HeatmapArgs) -> anyhow::Result<ExitCode> {
    let file =
        fs::File::open(&a.landscape).map_err(|e| config(format!("cannot read {}: {e}", a.landscape.display())))?;
    let rows = read_landscape_csv(file).with_context(|| format!("landscape {}", a.landscape.display()))?;
    let pgm = render_pgm(&rows)?;
    write_output(&a.output, pgm)?;
    Ok(ExitCode::SUCCESS)
}
