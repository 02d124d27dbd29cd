//! Experiment driver: builds targets and kernels from a config, runs the
//! chains, and writes trace CSVs plus a JSON summary.
//!
//! All randomness is derived from the config seed through indexed
//! sub-streams, and file contents are collected before writing, so a rerun
//! with the same config produces byte-identical trace files regardless of
//! the execution mode.

use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DVector;
use serde::Serialize;

use crate::diagnostics::{summarize, EssReport};
use crate::error::{Error, Result};
use crate::exec::{map_collect, ExecMode};
use crate::io::config::{
    EpsilonSpec, ExperimentConfig, ExperimentKind, KernelConfig, KernelKindName, SpaceKind,
};
use crate::io::edges::load_edges;
use crate::io::matches::{load_matches, parse_matches, player_count};
use crate::io::trace::{default_names, format_trace};
use crate::manifolds::{Manifold, Point};
use crate::rng::RngStream;
use crate::sampler::{run_chain, ChainTrace, HmcConfig, Kernel, StepSizes};
use crate::targets::{
    generate_network, Eigenmodel, EigenmodelData, MatchRecord, Target, VolleyballSimplex,
    VolleyballSphere,
};
use crate::tempering::{run_pt, TemperatureLadder};

/// The match fixture shipped with the crate: synthetic 9-player league data
/// drawn from the strengths in [`volleyball_fixture_truth`].
pub const VOLLEYBALL_FIXTURE: &str = include_str!("../data/volleyball.txt");

/// The network fixture shipped with the crate: the default planted
/// eigenmodel instance in file form.
pub const NETWORK_FIXTURE: &str = include_str!("../data/network.edges");

/// Generator seed the shipped volleyball fixture was drawn with.
pub const VOLLEYBALL_FIXTURE_SEED: u64 = 118;

/// Ground-truth player strengths behind the shipped volleyball fixture.
pub fn volleyball_fixture_truth() -> DVector<f64> {
    DVector::from_vec(vec![
        0.28, 0.20, 0.15, 0.11, 0.08, 0.06, 0.05, 0.04, 0.03,
    ])
}

/// Summary of one chain (or one tempering cold chain).
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub label: String,
    pub trace_file: String,
    pub wall_seconds: f64,
    /// ESS over the full trace.
    pub ess_raw: Option<EssReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess_raw_error: Option<String>,
    /// ESS with the burn-in prefix dropped.
    pub ess_post_burn_in: Option<EssReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ess_post_burn_in_error: Option<String>,
    pub best_log_density: Option<f64>,
    /// For tempering runs: accepted / attempted exchanges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exchange_acceptance_rate: Option<f64>,
}

/// Everything `run_experiment` writes into `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    /// The resolved config, defaults included.
    pub config: ExperimentConfig,
    pub runs: Vec<RunSummary>,
    pub wall_seconds_total: f64,
}

fn step_sizes(kernel: &KernelConfig) -> StepSizes {
    match &kernel.epsilon {
        EpsilonSpec::Scalar(e) => StepSizes::Uniform(*e),
        EpsilonSpec::PerBlock(v) => StepSizes::PerBlock(v.clone()),
    }
}

fn scalar_epsilon(kernel: &KernelConfig) -> Result<f64> {
    match &kernel.epsilon {
        EpsilonSpec::Scalar(e) => Ok(*e),
        EpsilonSpec::PerBlock(_) => Err(Error::Config(
            "this experiment needs a scalar kernel.epsilon".into(),
        )),
    }
}

fn build_kernel(kernel: &KernelConfig) -> Result<Kernel> {
    Ok(match kernel.kind {
        KernelKindName::GeodesicHmc => Kernel::GeodesicHmc(HmcConfig::new(
            step_sizes(kernel),
            kernel.t_steps.expect("validated by resolve"),
        )?),
        KernelKindName::RwSimplex => Kernel::SimplexRandomWalk {
            epsilon: scalar_epsilon(kernel)?,
        },
        KernelKindName::SphericalRw => Kernel::SphericalRandomWalk {
            epsilon: scalar_epsilon(kernel)?,
        },
    })
}

// One chain or one tempering ensemble, depending on the config's ladder.
struct ChainOutcome {
    trace: ChainTrace,
    best_log_density: Option<f64>,
    exchange_acceptance_rate: Option<f64>,
}

fn run_one(
    cfg: &ExperimentConfig,
    kernel: &Kernel,
    manifold: &Manifold,
    target: &dyn Target,
    x_init: &Point,
    rng: &mut RngStream,
) -> Result<ChainOutcome> {
    match &cfg.ladder {
        None => {
            let trace = run_chain(kernel, manifold, &target, x_init, cfg.n_samples, rng)?;
            let best = trace.best_log_density();
            Ok(ChainOutcome {
                trace,
                best_log_density: best,
                exchange_acceptance_rate: None,
            })
        }
        Some(ladder_cfg) => {
            let ladder = TemperatureLadder::new(ladder_cfg.rhos.clone())?;
            let ensemble = run_pt(
                manifold,
                &target,
                &ladder,
                std::slice::from_ref(kernel),
                x_init,
                cfg.n_samples,
                ladder_cfg.exchanges_per_sweep,
                rng,
                ExecMode::default(),
            )?;
            let rate = (ensemble.exchange_attempts > 0)
                .then(|| ensemble.exchange_accepts as f64 / ensemble.exchange_attempts as f64);
            Ok(ChainOutcome {
                best_log_density: Some(ensemble.best_log_density()),
                trace: ensemble.cold_trace().clone(),
                exchange_acceptance_rate: rate,
            })
        }
    }
}

fn summarize_run(
    cfg: &ExperimentConfig,
    label: String,
    trace_file: String,
    outcome: &ChainOutcome,
    wall_seconds: f64,
) -> RunSummary {
    let (ess_raw, ess_raw_error) = match summarize(&outcome.trace, wall_seconds) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let post = outcome.trace.discard_burn_in(cfg.resolved_burn_in());
    let (ess_post, ess_post_error) = match summarize(&post, wall_seconds) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    RunSummary {
        label,
        trace_file,
        wall_seconds,
        ess_raw,
        ess_raw_error,
        ess_post_burn_in: ess_post,
        ess_post_burn_in_error: ess_post_error,
        best_log_density: outcome.best_log_density,
        exchange_acceptance_rate: outcome.exchange_acceptance_rate,
    }
}

fn load_fixture_matches(cfg: &ExperimentConfig) -> Result<Vec<MatchRecord>> {
    match &cfg.dataset {
        Some(path) => load_matches(path),
        None => parse_matches(VOLLEYBALL_FIXTURE),
    }
}

fn sphere_barycentre(d: usize) -> Point {
    Point(DVector::from_element(d, (d as f64).sqrt().recip()))
}

fn simplex_barycentre(d: usize) -> Point {
    Point(DVector::from_element(d, (d as f64).recip()))
}

fn run_bvmf(cfg: &ExperimentConfig) -> Result<(Vec<(String, String)>, Vec<RunSummary>)> {
    let section = cfg.bvmf.as_ref().expect("validated");
    let kernel = build_kernel(&cfg.kernel)?;
    let d = section.a_diag.len();
    let root = RngStream::new(cfg.seed);

    let mut files = Vec::new();
    let mut runs = Vec::new();
    for (i, &c1) in section.c1_values.iter().enumerate() {
        let target = crate::targets::Bvmf::diagonal_with_linear_tilt(&section.a_diag, c1)?;
        let manifold = target.manifold().clone();
        let mut rng = root.substream(i as u64);
        let start = Instant::now();
        let outcome = run_one(cfg, &kernel, &manifold, &target, &sphere_barycentre(d), &mut rng)?;
        let wall = start.elapsed().as_secs_f64();

        let file = format!("bvmf_c1_{c1}.csv");
        let text = format_trace(&default_names(d), &outcome.trace)?;
        runs.push(summarize_run(cfg, format!("c1={c1}"), file.clone(), &outcome, wall));
        files.push((file, text));
    }
    Ok((files, runs))
}

fn run_volleyball(cfg: &ExperimentConfig) -> Result<(Vec<(String, String)>, Vec<RunSummary>)> {
    let section = cfg.volleyball.as_ref().expect("validated");
    let matches = load_fixture_matches(cfg)?;
    let players = player_count(&matches);
    if players < 2 {
        return Err(Error::Config("match data names fewer than 2 players".into()));
    }

    let space = match cfg.kernel.kind {
        KernelKindName::RwSimplex => SpaceKind::Simplex,
        KernelKindName::SphericalRw => SpaceKind::Sphere,
        KernelKindName::GeodesicHmc => cfg.kernel.space.unwrap_or(SpaceKind::Sphere),
    };
    let kernel = build_kernel(&cfg.kernel)?;
    let mut rng = RngStream::new(cfg.seed).substream(0);

    let start = Instant::now();
    let outcome = match space {
        SpaceKind::Sphere => {
            let target = VolleyballSphere::new(players, matches, section.alpha)?;
            let manifold = target.manifold().clone();
            run_one(cfg, &kernel, &manifold, &target, &sphere_barycentre(players), &mut rng)?
        }
        SpaceKind::Simplex => {
            let target = VolleyballSimplex::new(players, matches, section.alpha)?;
            let manifold = target.manifold().clone();
            run_one(cfg, &kernel, &manifold, &target, &simplex_barycentre(players), &mut rng)?
        }
    };
    let wall = start.elapsed().as_secs_f64();

    let file = "volleyball.csv".to_string();
    let text = format_trace(&default_names(players), &outcome.trace)?;
    let label = format!("alpha={} ({:?})", section.alpha, space);
    let runs = vec![summarize_run(cfg, label, file.clone(), &outcome, wall)];
    Ok((vec![(file, text)], runs))
}

fn eigenmodel_data(cfg: &ExperimentConfig) -> Result<EigenmodelData> {
    let section = cfg.eigenmodel.as_ref().expect("validated");
    if let Some(path) = &cfg.dataset {
        return load_edges(path);
    }
    match &section.synthetic {
        Some(synth) => {
            let mut rng = RngStream::new(synth.seed);
            let lambda = DVector::from_column_slice(&synth.lambda);
            let (data, _) = generate_network(synth.m, &lambda, synth.c, &mut rng)?;
            Ok(data)
        }
        None => crate::io::edges::parse_edges(NETWORK_FIXTURE),
    }
}

fn run_eigenmodel(cfg: &ExperimentConfig) -> Result<(Vec<(String, String)>, Vec<RunSummary>)> {
    let section = cfg.eigenmodel.as_ref().expect("validated");
    let data = eigenmodel_data(cfg)?;
    let model = Eigenmodel::new(data, section.p)?;
    let manifold = model.manifold().clone();
    let kernel = build_kernel(&cfg.kernel)?;
    let names = model.coordinate_names();
    let start_point = model.initial_state().to_point();

    let mut rng = RngStream::new(cfg.seed).substream(0);
    let start = Instant::now();
    let outcome = run_one(cfg, &kernel, &manifold, &model, &start_point, &mut rng)?;
    let wall = start.elapsed().as_secs_f64();

    let file = "eigenmodel.csv".to_string();
    let text = format_trace(&names, &outcome.trace)?;
    let label = format!("m={} p={}", model.data().node_count(), section.p);
    let runs = vec![summarize_run(cfg, label, file.clone(), &outcome, wall)];
    Ok((vec![(file, text)], runs))
}

const BENCH_SAMPLERS: [&str; 4] = ["rw-simplex", "spherical-rw", "simplex-hmc", "spherical-hmc"];

fn run_dirichlet_bench(cfg: &ExperimentConfig) -> Result<(Vec<(String, String)>, Vec<RunSummary>)> {
    let section = cfg.dirichlet_bench.as_ref().expect("validated");
    let matches = load_fixture_matches(cfg)?;
    let players = player_count(&matches);
    if players < 2 {
        return Err(Error::Config("match data names fewer than 2 players".into()));
    }
    let epsilon = scalar_epsilon(&cfg.kernel)?;
    let t_steps = cfg.kernel.t_steps.expect("validated by resolve");
    let root = RngStream::new(cfg.seed);

    // The full grid, one cell per (alpha, sampler), independent given its
    // own sub-stream.
    let mut jobs = Vec::new();
    for (ai, &alpha) in section.alphas.iter().enumerate() {
        for (si, &sampler) in BENCH_SAMPLERS.iter().enumerate() {
            let idx = (ai * BENCH_SAMPLERS.len() + si) as u64;
            jobs.push((alpha, sampler, root.substream(idx)));
        }
    }
    let n = cfg.n_samples;
    let matches_ref = &matches;
    let results: Vec<Result<(String, String, ChainOutcome, f64)>> =
        map_collect(ExecMode::default(), jobs, move |(alpha, sampler, mut rng)| {
            let started = Instant::now();
            let (kernel, outcome) = match sampler {
                "rw-simplex" => {
                    let target = VolleyballSimplex::new(players, matches_ref.to_vec(), alpha)?;
                    let kernel = Kernel::SimplexRandomWalk { epsilon };
                    let trace = run_chain(
                        &kernel,
                        target.manifold(),
                        &target,
                        &simplex_barycentre(players),
                        n,
                        &mut rng,
                    )?;
                    (kernel, trace)
                }
                "spherical-rw" => {
                    let target = VolleyballSphere::new(players, matches_ref.to_vec(), alpha)?;
                    let kernel = Kernel::SphericalRandomWalk { epsilon };
                    let trace = run_chain(
                        &kernel,
                        target.manifold(),
                        &target,
                        &sphere_barycentre(players),
                        n,
                        &mut rng,
                    )?;
                    (kernel, trace)
                }
                "simplex-hmc" => {
                    let target = VolleyballSimplex::new(players, matches_ref.to_vec(), alpha)?;
                    let kernel =
                        Kernel::GeodesicHmc(HmcConfig::new(StepSizes::Uniform(epsilon), t_steps)?);
                    let trace = run_chain(
                        &kernel,
                        target.manifold(),
                        &target,
                        &simplex_barycentre(players),
                        n,
                        &mut rng,
                    )?;
                    (kernel, trace)
                }
                "spherical-hmc" => {
                    let target = VolleyballSphere::new(players, matches_ref.to_vec(), alpha)?;
                    let kernel =
                        Kernel::GeodesicHmc(HmcConfig::new(StepSizes::Uniform(epsilon), t_steps)?);
                    let trace = run_chain(
                        &kernel,
                        target.manifold(),
                        &target,
                        &sphere_barycentre(players),
                        n,
                        &mut rng,
                    )?;
                    (kernel, trace)
                }
                other => unreachable!("unknown sampler {other}"),
            };
            let _ = kernel;
            let wall = started.elapsed().as_secs_f64();
            let best = outcome.best_log_density();
            Ok((
                format!("alpha={alpha} {sampler}"),
                format!("bench_alpha{alpha}_{sampler}.csv"),
                ChainOutcome {
                    trace: outcome,
                    best_log_density: best,
                    exchange_acceptance_rate: None,
                },
                wall,
            ))
        });

    let mut files = Vec::new();
    let mut runs = Vec::new();
    for res in results {
        let (label, file, outcome, wall) = res?;
        let text = format_trace(&default_names(players), &outcome.trace)?;
        runs.push(summarize_run(cfg, label, file.clone(), &outcome, wall));
        files.push((file, text));
    }
    Ok((files, runs))
}

/// Run the configured experiment end to end: trace CSVs and `summary.json`
/// land in `config.output`. Returns the summary that was written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let resolved = cfg.resolve()?;
    let total = Instant::now();
    let (files, runs) = match resolved.experiment {
        ExperimentKind::Bvmf => run_bvmf(&resolved)?,
        ExperimentKind::Volleyball => run_volleyball(&resolved)?,
        ExperimentKind::Eigenmodel => run_eigenmodel(&resolved)?,
        ExperimentKind::DirichletBench => run_dirichlet_bench(&resolved)?,
    };

    std::fs::create_dir_all(&resolved.output)?;
    for (name, text) in &files {
        std::fs::write(resolved.output.join(name), text)?;
    }
    let summary = ExperimentSummary {
        config: resolved.clone(),
        runs,
        wall_seconds_total: total.elapsed().as_secs_f64(),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serialization cannot fail");
    std::fs::write(resolved.output.join("summary.json"), json)?;
    Ok(summary)
}

/// Paths of the trace files an experiment writes, relative to its output
/// directory (useful for tooling and tests).
pub fn trace_files(summary: &ExperimentSummary) -> Vec<PathBuf> {
    summary
        .runs
        .iter()
        .map(|r| Path::new(&r.trace_file).to_path_buf())
        .collect()
}
