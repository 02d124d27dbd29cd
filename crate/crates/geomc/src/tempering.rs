//! Tempered targets and the parallel-tempering driver.
//!
//! Raising the density to a power `rho` in (0, 1] is a linear scaling of the
//! log-density and its gradient, so any kernel can sample the flattened
//! target unchanged. The driver runs one chain per ladder rung and, between
//! kernel sweeps, proposes random adjacent-pair state swaps with the usual
//! Metropolis correction, letting mode membership percolate from hot rungs
//! down to the reported cold chain.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::exec::{map_collect, ExecMode};
use crate::manifolds::{Manifold, Point};
use crate::rng::RngStream;
use crate::sampler::{transition, ChainTrace, Kernel, Transition};
use crate::targets::Target;

/// Ascending inverse temperatures in (0, 1], ending exactly at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TemperatureLadder {
    rhos: Vec<f64>,
}

impl TemperatureLadder {
    pub fn new(rhos: Vec<f64>) -> Result<Self> {
        if rhos.is_empty() {
            return Err(Error::Domain("temperature ladder is empty".into()));
        }
        for pair in rhos.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::Domain(
                    "temperature ladder must be strictly ascending".into(),
                ));
            }
        }
        if rhos[0] <= 0.0 || *rhos.last().unwrap() != 1.0 {
            return Err(Error::Domain(
                "ladder must lie in (0, 1] and end exactly at 1".into(),
            ));
        }
        Ok(TemperatureLadder { rhos })
    }

    /// Evenly spaced ladder `step, 2 step, ..., 1`.
    pub fn linear(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("ladder needs at least one rung".into()));
        }
        TemperatureLadder::new((1..=n).map(|k| k as f64 / n as f64).collect())
    }

    /// Geometric ladder from `lo` up to 1.
    pub fn geometric(lo: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && lo < 1.0) || n < 2 {
            return Err(Error::Domain(
                "geometric ladder needs 0 < lo < 1 and >= 2 rungs".into(),
            ));
        }
        let mut rhos: Vec<f64> = (0..n)
            .map(|k| lo.powf(1.0 - k as f64 / (n - 1) as f64))
            .collect();
        rhos[n - 1] = 1.0;
        TemperatureLadder::new(rhos)
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }
}

/// A target with log-density and gradient scaled by `rho`.
#[derive(Clone, Debug)]
pub struct Tempered<T> {
    inner: T,
    rho: f64,
}

/// Flatten `target` to `[pi]^rho`. The manifold is unchanged.
pub fn tempered<T: Target>(target: T, rho: f64) -> Result<Tempered<T>> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Domain(format!(
            "tempering exponent must be in (0, 1], got {rho}"
        )));
    }
    Ok(Tempered { inner: target, rho })
}

impl<T: Target> Target for Tempered<T> {
    fn manifold(&self) -> &Manifold {
        self.inner.manifold()
    }

    fn log_density(&self, x: &Point) -> f64 {
        if self.rho == 1.0 {
            // Bit-exact passthrough at rho = 1.
            self.inner.log_density(x)
        } else {
            self.rho * self.inner.log_density(x)
        }
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        let g = self.inner.gradient(x)?;
        if self.rho == 1.0 {
            Ok(g)
        } else {
            Ok(g * self.rho)
        }
    }
}

/// Log acceptance ratio for swapping the states of rungs with exponents
/// `(rho_a, rho_b)` holding untempered log-densities `(logpi_a, logpi_b)`.
pub fn exchange_log_ratio(rho_a: f64, rho_b: f64, log_pi_a: f64, log_pi_b: f64) -> f64 {
    (rho_a - rho_b) * (log_pi_b - log_pi_a)
}

/// One chain per ladder rung, with pre-split RNG sub-streams and per-rung
/// traces. Only the last (cold, `rho = 1`) rung is the sample stream; hotter
/// rungs are exploration diagnostics.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<Point>,
    log_pi: Vec<f64>,
    rngs: Vec<RngStream>,
    traces: Vec<ChainTrace>,
    pub exchange_attempts: u64,
    pub exchange_accepts: u64,
    best_log_density: f64,
}

impl Ensemble {
    /// All rungs start at `x_init`; rung `k` draws from `rng.substream(k)`.
    pub fn new(
        manifold: &Manifold,
        target: &impl Target,
        x_init: &Point,
        n_rungs: usize,
        rng: &RngStream,
    ) -> Result<Self> {
        if n_rungs < 1 {
            return Err(Error::Domain("ensemble needs at least one rung".into()));
        }
        manifold.check_point(x_init)?;
        let log_pi0 = target.log_density(x_init);
        if !log_pi0.is_finite() {
            return Err(Error::Domain(
                "ensemble start has non-finite log-density".into(),
            ));
        }
        Ok(Ensemble {
            states: vec![x_init.clone(); n_rungs],
            log_pi: vec![log_pi0; n_rungs],
            rngs: (0..n_rungs).map(|k| rng.substream(k as u64)).collect(),
            traces: vec![ChainTrace::default(); n_rungs],
            exchange_attempts: 0,
            exchange_accepts: 0,
            best_log_density: log_pi0,
        })
    }

    pub fn states(&self) -> &[Point] {
        &self.states
    }

    pub fn traces(&self) -> &[ChainTrace] {
        &self.traces
    }

    /// Trace of the `rho = 1` rung: the output sample stream.
    pub fn cold_trace(&self) -> &ChainTrace {
        self.traces.last().expect("ensemble has at least one rung")
    }

    /// Highest untempered log-density seen by any rung so far.
    pub fn best_log_density(&self) -> f64 {
        self.best_log_density
    }
}

/// One tempering sweep: every rung advances one kernel transition against
/// its tempered target (phase A, parallelisable), then `n_exchanges` random
/// adjacent-pair swaps are proposed (phase B, serial). Post-exchange states
/// are appended to the per-rung traces.
///
/// `kernels` supplies one kernel per rung, or a single kernel for all.
#[allow(clippy::too_many_arguments)]
pub fn pt_sweep<T: Target + ?Sized>(
    ensemble: &mut Ensemble,
    ladder: &TemperatureLadder,
    kernels: &[Kernel],
    manifold: &Manifold,
    target: &T,
    n_exchanges: usize,
    rng: &mut RngStream,
    mode: ExecMode,
) -> Result<()> {
    let n = ladder.len();
    if ensemble.states.len() != n {
        return Err(Error::Dimension(format!(
            "ensemble has {} rungs but ladder has {n}",
            ensemble.states.len()
        )));
    }
    if kernels.len() != n && kernels.len() != 1 {
        return Err(Error::Dimension(format!(
            "{} kernels for {n} rungs",
            kernels.len()
        )));
    }

    // Phase A: independent tempered transitions, order-preserving.
    let jobs: Vec<(usize, Point, RngStream)> = ensemble
        .states
        .iter()
        .zip(ensemble.rngs.iter())
        .enumerate()
        .map(|(k, (x, r))| (k, x.clone(), r.clone()))
        .collect();
    let results: Vec<Result<(Transition, RngStream)>> = map_collect(mode, jobs, |(k, x, mut r)| {
        let kernel = if kernels.len() == 1 { &kernels[0] } else { &kernels[k] };
        let flat = tempered(target, ladder.rhos()[k])?;
        let t = transition(kernel, manifold, &flat, &x, &mut r)
            .map_err(|e| Error::AtStep { step: k, source: Box::new(e) })?;
        Ok((t, r))
    });

    let mut accepted = Vec::with_capacity(n);
    let mut delta_h = Vec::with_capacity(n);
    for (k, res) in results.into_iter().enumerate() {
        let (t, r) = res?;
        ensemble.states[k] = t.state;
        ensemble.rngs[k] = r;
        accepted.push(t.accepted);
        delta_h.push(t.delta_h);
        // Untempered log-density for exchanges and mode tracking.
        ensemble.log_pi[k] = target.log_density(&ensemble.states[k]);
        if ensemble.log_pi[k] > ensemble.best_log_density {
            ensemble.best_log_density = ensemble.log_pi[k];
        }
    }

    // Phase B: random adjacent swaps with Metropolis correction.
    if n >= 2 {
        for _ in 0..n_exchanges {
            let k = rng.uniform_index(n - 1);
            let log_ratio = exchange_log_ratio(
                ladder.rhos()[k],
                ladder.rhos()[k + 1],
                ensemble.log_pi[k],
                ensemble.log_pi[k + 1],
            );
            ensemble.exchange_attempts += 1;
            if rng.uniform() < log_ratio.exp() {
                ensemble.states.swap(k, k + 1);
                ensemble.log_pi.swap(k, k + 1);
                ensemble.exchange_accepts += 1;
            }
        }
    }

    for k in 0..n {
        ensemble.traces[k].push(&Transition {
            state: ensemble.states[k].clone(),
            accepted: accepted[k],
            delta_h: delta_h[k],
            log_density: ensemble.log_pi[k],
        });
    }
    Ok(())
}

/// Run `n_sweeps` tempering sweeps from `x_init` and return the ensemble
/// (cold-chain trace, per-rung diagnostics, exchange statistics).
#[allow(clippy::too_many_arguments)]
pub fn run_pt<T: Target + ?Sized>(
    manifold: &Manifold,
    target: &T,
    ladder: &TemperatureLadder,
    kernels: &[Kernel],
    x_init: &Point,
    n_sweeps: usize,
    n_exchanges: usize,
    rng: &mut RngStream,
    mode: ExecMode,
) -> Result<Ensemble> {
    let mut ensemble = Ensemble::new(manifold, &target, x_init, ladder.len(), rng)?;
    let mut driver = rng.substream(u64::MAX);
    for _ in 0..n_sweeps {
        pt_sweep(
            &mut ensemble,
            ladder,
            kernels,
            manifold,
            target,
            n_exchanges,
            &mut driver,
            mode,
        )?;
    }
    Ok(ensemble)
}
