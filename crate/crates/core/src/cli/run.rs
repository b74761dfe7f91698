use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::manifest::{config_hash, summarize, RunManifest, RunSummary};
use super::{exit, CliError, CliResult};
use crate::analysis::{classify_equilibrium, EquilibriumClass, EquilibriumTag};
use crate::simulator::csv::{write_trajectory, write_xi_trace};
use crate::simulator::{simulate, InitialState, SimConfig, Trajectory};

/// Caps the sweep worker pool when set to a positive integer.
pub const THREADS_ENV: &str = "TETRAFORM_THREADS";

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const XI_TRACE_FILE: &str = "xi_trace.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SWEEP_SUMMARY_FILE: &str = "summary.json";

/// Parses and validates a config document. Syntax and schema errors carry the
/// line and column reported by the JSON parser.
pub fn parse_config(text: &str) -> CliResult<SimConfig> {
    let config: SimConfig = serde_json::from_str(text)
        .map_err(|e| CliError::new(exit::BAD_CONFIG, format!("line {}, column {}: {e}", e.line(), e.column())))?;
    config.validate().map_err(|e| CliError::new(exit::BAD_CONFIG, e.to_string()))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> CliResult<SimConfig> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::new(exit::BAD_CONFIG, format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| CliError::new(e.code, format!("{}: {}", path.display(), e.message)))
}

fn write_file(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> CliResult<()>) -> CliResult<()> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    write(&mut out)?;
    out.flush().map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    write_file(path, |out| {
        serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::io(path, e))?;
        writeln!(out).map_err(|e| CliError::io(path, e))
    })
}

/// Runs one simulation and writes `trajectory.csv`, `xi_trace.csv` (four agents
/// only) and `manifest.json` into `out_dir`.
pub fn cmd_simulate(config_path: &Path, out_dir: &Path) -> CliResult<RunManifest> {
    let config = load_config(config_path)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let start = Instant::now();
    let traj = simulate(&config)?;

    let traj_path = out_dir.join(TRAJECTORY_FILE);
    write_file(&traj_path, |out| write_trajectory(&traj, out).map_err(|e| CliError::io(&traj_path, e)))?;
    let four = traj.states.first().is_some_and(|s| s.n() == 4);
    let xi_trace = if four {
        let xi_path = out_dir.join(XI_TRACE_FILE);
        write_file(&xi_path, |out| write_xi_trace(&traj, out).map_err(|e| CliError::io(&xi_path, e)))?;
        Some(XI_TRACE_FILE.to_string())
    } else {
        None
    };

    let manifest = RunManifest {
        config_hash: config_hash(&config),
        summary: summarize(&traj, &config.topology),
        config,
        trajectory: TRAJECTORY_FILE.to_string(),
        xi_trace,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}

/// Requested worker count from the environment; `None` when unset.
pub fn worker_threads() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::new(exit::BAD_CONFIG, format!("{THREADS_ENV}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::new(exit::BAD_CONFIG, format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

/// Per-run record written to `runs/seed_<seed>.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRun {
    pub seed: u64,
    pub config_hash: String,
    pub summary: Option<RunSummary>,
    pub terminal_class: Option<EquilibriumClass>,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub seed: u64,
    pub final_formation_error: Option<f64>,
    pub terminal_class: Option<EquilibriumTag>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub config_hash: String,
    pub base_seed: u64,
    pub seeds: usize,
    pub converged: usize,
    pub convergence_fraction: f64,
    /// Over runs that finished; `null` if none did.
    pub max_final_error: Option<f64>,
    pub failures: Vec<SweepFailure>,
    pub runs: Vec<String>,
    pub wall_time_s: f64,
}

fn classify_final(config: &SimConfig, traj: &Trajectory) -> Option<EquilibriumClass> {
    let state = traj.final_state()?;
    let topo = config.topology.build().ok()?;
    let gain = config.gain.build().ok()?;
    classify_equilibrium(state, &topo, &gain).ok()
}

fn run_seed(config: &SimConfig, seed: u64) -> SweepRun {
    let config = config.with_seed(seed);
    let start = Instant::now();
    let hash = config_hash(&config);
    match simulate(&config) {
        Ok(traj) => SweepRun {
            seed,
            config_hash: hash,
            summary: Some(summarize(&traj, &config.topology)),
            terminal_class: classify_final(&config, &traj),
            error: None,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        Err(e) => SweepRun {
            seed,
            config_hash: hash,
            summary: None,
            terminal_class: None,
            error: Some(e.to_string()),
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    }
}

/// Runs `seeds` simulations with seeds `s, s+1, …` where `s` is the config's
/// seed. Each worker writes its own `runs/seed_<seed>.json`; the coordinator
/// writes `summary.json` once all runs are done.
pub fn cmd_sweep(config_path: &Path, seeds: usize, out_dir: &Path) -> CliResult<SweepSummary> {
    let config = load_config(config_path)?;
    if seeds == 0 {
        return Err(CliError::new(exit::BAD_CONFIG, "--seeds must be at least 1"));
    }
    let InitialState::Random { seed: base_seed } = config.initial else {
        return Err(CliError::new(exit::BAD_CONFIG, "a sweep needs a random initial state, not an explicit one"));
    };
    let runs_dir = out_dir.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| CliError::io(&runs_dir, e))?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_threads()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::new(exit::IO, format!("worker pool: {e}")))?;

    let start = Instant::now();
    let results: Vec<CliResult<(SweepRun, String)>> = pool.install(|| {
        (0..seeds as u64)
            .into_par_iter()
            .map(|k| {
                let seed = base_seed.wrapping_add(k);
                let run = run_seed(&config, seed);
                let name = format!("runs/seed_{seed}.json");
                write_json(&out_dir.join(&name), &run)?;
                Ok((run, name))
            })
            .collect()
    });

    let mut runs = Vec::with_capacity(seeds);
    let mut names = Vec::with_capacity(seeds);
    for r in results {
        let (run, name) = r?;
        runs.push(run);
        names.push(name);
    }

    let converged = runs.iter().filter(|r| r.summary.as_ref().is_some_and(|s| s.converged)).count();
    let max_final_error =
        runs.iter().filter_map(|r| r.summary.as_ref().map(|s| s.final_formation_error)).reduce(f64::max);
    let failures = runs
        .iter()
        .filter(|r| !r.summary.as_ref().is_some_and(|s| s.converged))
        .map(|r| SweepFailure {
            seed: r.seed,
            final_formation_error: r.summary.as_ref().map(|s| s.final_formation_error),
            terminal_class: r.terminal_class.map(|c| c.tag),
            error: r.error.clone(),
        })
        .collect();
    let summary = SweepSummary {
        config_hash: config_hash(&config),
        base_seed,
        seeds,
        converged,
        convergence_fraction: converged as f64 / seeds as f64,
        max_final_error,
        failures,
        runs: names,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join(SWEEP_SUMMARY_FILE), &summary)?;
    Ok(summary)
}
