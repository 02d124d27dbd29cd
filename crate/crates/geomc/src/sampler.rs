//! Transition kernels and the chain runner.
//!
//! The geodesic HMC kernel alternates exact solutions of the split
//! Hamiltonians `H = -log pi(x) + v'v/2`: a half-step linear momentum kick
//! from the log-density gradient followed by a tangent projection, the
//! geodesic flow of the manifold for the full step (boundary-reflecting on
//! the simplex), and a second half-kick with projection. The composition is
//! reversible and volume-preserving, so the usual Metropolis correction in
//! `h = log pi - v'v/2` leaves the target invariant. On Euclidean manifolds
//! the whole scheme collapses to textbook leapfrog HMC.
//!
//! Two random-walk baselines are included: a Gaussian walk in the simplex
//! plane and a great-circle walk on the sphere.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::manifolds::{Manifold, PhasePoint, Point, Tangent};
use crate::rng::RngStream;
use crate::targets::Target;

/// Integrator step sizes: one value for the whole manifold, or one per
/// top-level block of a product manifold (applied to both the gradient kick
/// and that block's flow duration).
#[derive(Clone, Debug, PartialEq)]
pub enum StepSizes {
    Uniform(f64),
    PerBlock(Vec<f64>),
}

impl StepSizes {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            StepSizes::Uniform(e) => e.is_finite() && *e > 0.0,
            StepSizes::PerBlock(v) => !v.is_empty() && v.iter().all(|e| e.is_finite() && *e > 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(
                "step sizes must be positive and finite".into(),
            ))
        }
    }

    /// One duration per top-level manifold block.
    pub fn resolve(&self, manifold: &Manifold) -> Result<Vec<f64>> {
        let blocks = manifold.components().len();
        match self {
            StepSizes::Uniform(e) => Ok(vec![*e; blocks]),
            StepSizes::PerBlock(v) => {
                if v.len() != blocks {
                    return Err(Error::Dimension(format!(
                        "{} step sizes for {} manifold blocks",
                        v.len(),
                        blocks
                    )));
                }
                Ok(v.clone())
            }
        }
    }

    /// All step sizes scaled by a common factor.
    pub fn scaled(&self, factor: f64) -> StepSizes {
        match self {
            StepSizes::Uniform(e) => StepSizes::Uniform(e * factor),
            StepSizes::PerBlock(v) => StepSizes::PerBlock(v.iter().map(|e| e * factor).collect()),
        }
    }
}

/// Geodesic HMC parameters: step sizes and integration steps per proposal.
#[derive(Clone, Debug, PartialEq)]
pub struct HmcConfig {
    pub step_sizes: StepSizes,
    pub n_steps: usize,
}

impl HmcConfig {
    pub fn new(step_sizes: StepSizes, n_steps: usize) -> Result<Self> {
        step_sizes.validate()?;
        if n_steps < 1 {
            return Err(Error::Domain("need at least one integration step".into()));
        }
        Ok(HmcConfig {
            step_sizes,
            n_steps,
        })
    }
}

/// The transition kernels available to experiments.
#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    /// Hamiltonian proposals driven by the geodesic integrator.
    GeodesicHmc(HmcConfig),
    /// Metropolis random walk in the simplex plane; proposals leaving the
    /// simplex have zero density and auto-reject.
    SimplexRandomWalk { epsilon: f64 },
    /// Metropolis random walk along great circles of the sphere.
    SphericalRandomWalk { epsilon: f64 },
}

impl Kernel {
    fn validate(&self, manifold: &Manifold) -> Result<()> {
        match self {
            Kernel::GeodesicHmc(cfg) => {
                cfg.step_sizes.resolve(manifold)?;
                Ok(())
            }
            Kernel::SimplexRandomWalk { epsilon } => {
                if !(epsilon.is_finite() && *epsilon > 0.0) {
                    return Err(Error::Domain("random-walk scale must be positive".into()));
                }
                match manifold {
                    Manifold::ReflectiveSimplex { .. } => Ok(()),
                    other => Err(Error::Config(format!(
                        "simplex random walk needs a simplex manifold, got {other:?}"
                    ))),
                }
            }
            Kernel::SphericalRandomWalk { epsilon } => {
                if !(epsilon.is_finite() && *epsilon > 0.0) {
                    return Err(Error::Domain("random-walk scale must be positive".into()));
                }
                match manifold {
                    Manifold::Sphere { .. } => Ok(()),
                    other => Err(Error::Config(format!(
                        "spherical random walk needs a sphere manifold, got {other:?}"
                    ))),
                }
            }
        }
    }
}

/// Outcome of one kernel application.
#[derive(Clone, Debug)]
pub struct Transition {
    /// The new chain state (the input state when rejected, bit for bit).
    pub state: Point,
    pub accepted: bool,
    /// Energy error `-(h* - h)`; for the random walks the analogous
    /// log-density drop. May be infinite on rejected divergent proposals.
    pub delta_h: f64,
    /// Log-density of `state`.
    pub log_density: f64,
}

/// Ordered samples plus per-step acceptance/energy metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainTrace {
    samples: Vec<DVector<f64>>,
    accepted: Vec<bool>,
    delta_h: Vec<f64>,
    log_density: Vec<f64>,
}

impl ChainTrace {
    pub fn with_capacity(n: usize) -> Self {
        ChainTrace {
            samples: Vec::with_capacity(n),
            accepted: Vec::with_capacity(n),
            delta_h: Vec::with_capacity(n),
            log_density: Vec::with_capacity(n),
        }
    }

    /// Rebuild a trace from parallel columns (used by trace file readers).
    pub fn from_parts(
        samples: Vec<DVector<f64>>,
        accepted: Vec<bool>,
        delta_h: Vec<f64>,
        log_density: Vec<f64>,
    ) -> Result<Self> {
        let n = samples.len();
        if accepted.len() != n || delta_h.len() != n || log_density.len() != n {
            return Err(Error::Dimension(
                "trace columns must all have the same length".into(),
            ));
        }
        Ok(ChainTrace {
            samples,
            accepted,
            delta_h,
            log_density,
        })
    }

    pub fn push(&mut self, t: &Transition) {
        self.samples.push(t.state.0.clone());
        self.accepted.push(t.accepted);
        self.delta_h.push(t.delta_h);
        self.log_density.push(t.log_density);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[DVector<f64>] {
        &self.samples
    }

    pub fn accepted(&self) -> &[bool] {
        &self.accepted
    }

    pub fn delta_h(&self) -> &[f64] {
        &self.delta_h
    }

    pub fn log_density(&self) -> &[f64] {
        &self.log_density
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.accepted.is_empty() {
            return 0.0;
        }
        self.accepted.iter().filter(|&&a| a).count() as f64 / self.accepted.len() as f64
    }

    /// The series of one ambient coordinate across the trace.
    pub fn coordinate(&self, index: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[index]).collect()
    }

    /// Trace with the first `burn_in` samples dropped.
    pub fn discard_burn_in(&self, burn_in: usize) -> ChainTrace {
        let b = burn_in.min(self.len());
        ChainTrace {
            samples: self.samples[b..].to_vec(),
            accepted: self.accepted[b..].to_vec(),
            delta_h: self.delta_h[b..].to_vec(),
            log_density: self.log_density[b..].to_vec(),
        }
    }

    pub fn best_log_density(&self) -> Option<f64> {
        self.log_density
            .iter()
            .copied()
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))))
    }

    pub fn mean(&self) -> Option<DVector<f64>> {
        if self.samples.is_empty() {
            return None;
        }
        let mut sum = DVector::zeros(self.samples[0].len());
        for s in &self.samples {
            sum += s;
        }
        Some(sum / self.samples.len() as f64)
    }
}

// Errors that mean "the trajectory blew up numerically", which a transition
// converts into a rejection rather than propagating.
fn is_divergence(e: &Error) -> bool {
    matches!(
        e,
        Error::Membership(_) | Error::Boundary | Error::ReflectionLimit(_)
    )
}

fn half_kick(
    manifold: &Manifold,
    position: &Point,
    velocity: &DVector<f64>,
    grad: &DVector<f64>,
    eps: &[f64],
) -> Result<Tangent> {
    let mut v = velocity.clone();
    for ((offset, len), &e) in manifold.block_ranges().iter().zip(eps) {
        v.rows_mut(*offset, *len)
            .axpy(0.5 * e, &grad.rows(*offset, *len), 1.0);
    }
    manifold.tangent_project(position, &v)
}

/// One reversible integrator step: half momentum kick with projection,
/// geodesic (or reflective) flow, second half kick with projection.
///
/// Errors if the gradient is undefined at either end of the step; numeric
/// blowups inside the flow surface as membership errors.
pub fn integrator_step(
    manifold: &Manifold,
    target: &impl Target,
    s: &PhasePoint,
    step_sizes: &StepSizes,
) -> Result<PhasePoint> {
    let eps = step_sizes.resolve(manifold)?;
    let grad = target.gradient(&s.position)?;
    let v = half_kick(manifold, &s.position, &s.velocity.0, &grad, &eps)?;
    let flowed = manifold.flow_blocks(&PhasePoint::new(s.position.clone(), v), &eps)?;
    let grad = target.gradient(&flowed.position)?;
    let v = half_kick(manifold, &flowed.position, &flowed.velocity.0, &grad, &eps)?;
    Ok(PhasePoint::new(flowed.position, v))
}

/// One geodesic HMC transition: fresh momentum, `n_steps` integrator steps,
/// Metropolis accept/reject on `h = log pi - v'v/2`.
///
/// Divergent trajectories (non-finite energy, constraint blowup, reflection
/// budget) count as rejections; a gradient request on a zero-density set is
/// a hard error.
pub fn hmc_transition(
    manifold: &Manifold,
    target: &impl Target,
    x0: &Point,
    cfg: &HmcConfig,
    rng: &mut RngStream,
) -> Result<Transition> {
    let eps = cfg.step_sizes.resolve(manifold)?;
    let log_pi0 = target.log_density(x0);
    if !log_pi0.is_finite() {
        return Err(Error::Domain(
            "chain state has non-finite log-density".into(),
        ));
    }
    let v0 = manifold.sample_velocity(x0, rng)?;
    let h0 = log_pi0 - 0.5 * v0.0.norm_squared();

    let mut state = PhasePoint::new(x0.clone(), v0);
    let mut grad = Some(target.gradient(&state.position)?);
    let mut diverged = false;

    for _ in 0..cfg.n_steps {
        let step = (|| -> Result<(PhasePoint, DVector<f64>)> {
            let g = grad.take().expect("gradient cached for current position");
            let v = half_kick(manifold, &state.position, &state.velocity.0, &g, &eps)?;
            let flowed = manifold.flow_blocks(&PhasePoint::new(state.position.clone(), v), &eps)?;
            let g = target.gradient(&flowed.position)?;
            let v = half_kick(manifold, &flowed.position, &flowed.velocity.0, &g, &eps)?;
            Ok((PhasePoint::new(flowed.position, v), g))
        })();
        match step {
            Ok((next, g)) => {
                state = next;
                grad = Some(g);
            }
            Err(e) if is_divergence(&e) => {
                diverged = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let (h1, log_pi1) = if diverged {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    } else {
        let lp = target.log_density(&state.position);
        (lp - 0.5 * state.velocity.0.norm_squared(), lp)
    };

    let u = rng.uniform();
    // NaN-safe: a non-finite h1 never accepts.
    let accepted = u < (h1 - h0).exp();
    if accepted {
        Ok(Transition {
            state: state.position,
            accepted: true,
            delta_h: h0 - h1,
            log_density: log_pi1,
        })
    } else {
        Ok(Transition {
            state: x0.clone(),
            accepted: false,
            delta_h: h0 - h1,
            log_density: log_pi0,
        })
    }
}

/// Metropolis step with a degenerate Gaussian proposal in the simplex plane
/// `N(x, eps^2 (I - n n^T))`, `n` the unit normal of `sum x = 1`.
pub fn rwmh_simplex_transition(
    target: &impl Target,
    x0: &Point,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<Transition> {
    let d = x0.0.len();
    let log_pi0 = target.log_density(x0);
    let z = rng.normal_vector(d);
    let mean = z.mean();
    let proposal = Point(DVector::from_fn(d, |i, _| x0.0[i] + epsilon * (z[i] - mean)));
    let log_pi1 = target.log_density(&proposal);

    let u = rng.uniform();
    let accepted = u < (log_pi1 - log_pi0).exp();
    Ok(if accepted {
        Transition {
            state: proposal,
            accepted: true,
            delta_h: log_pi0 - log_pi1,
            log_density: log_pi1,
        }
    } else {
        Transition {
            state: x0.clone(),
            accepted: false,
            delta_h: log_pi0 - log_pi1,
            log_density: log_pi0,
        }
    })
}

/// Deterministic part of the spherical walk: move from `x` along the great
/// circle in the direction of the tangent `delta`, by arc length `|delta|`.
pub fn great_circle_step(x: &Point, delta: &DVector<f64>) -> Point {
    let norm = delta.norm();
    if norm == 0.0 {
        return x.clone();
    }
    let (sin, cos) = norm.sin_cos();
    Point(&x.0 * cos + delta * (sin / norm))
}

/// Metropolis step on the sphere: a tangent Gaussian `N(0, eps^2 (I - xx^T))`
/// bent onto the sphere along the great circle, treated as a symmetric
/// proposal.
pub fn spherical_rw_transition(
    target: &impl Target,
    x0: &Point,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<Transition> {
    let d = x0.0.len();
    let log_pi0 = target.log_density(x0);
    let z = rng.normal_vector(d);
    let delta = (&z - &x0.0 * x0.0.dot(&z)) * epsilon;
    let proposal = great_circle_step(x0, &delta);
    let log_pi1 = target.log_density(&proposal);

    let u = rng.uniform();
    let accepted = u < (log_pi1 - log_pi0).exp();
    Ok(if accepted {
        Transition {
            state: proposal,
            accepted: true,
            delta_h: log_pi0 - log_pi1,
            log_density: log_pi1,
        }
    } else {
        Transition {
            state: x0.clone(),
            accepted: false,
            delta_h: log_pi0 - log_pi1,
            log_density: log_pi0,
        }
    })
}

/// Apply whichever kernel once.
pub fn transition(
    kernel: &Kernel,
    manifold: &Manifold,
    target: &impl Target,
    x: &Point,
    rng: &mut RngStream,
) -> Result<Transition> {
    match kernel {
        Kernel::GeodesicHmc(cfg) => hmc_transition(manifold, target, x, cfg, rng),
        Kernel::SimplexRandomWalk { epsilon } => rwmh_simplex_transition(target, x, *epsilon, rng),
        Kernel::SphericalRandomWalk { epsilon } => {
            spherical_rw_transition(target, x, *epsilon, rng)
        }
    }
}

/// Run a kernel for `n_samples` transitions from `x_init`, recording every
/// state (no thinning) with acceptance flags, energy errors and log-density.
///
/// Kernel errors are annotated with the 0-based step index they occurred at.
pub fn run_chain(
    kernel: &Kernel,
    manifold: &Manifold,
    target: &impl Target,
    x_init: &Point,
    n_samples: usize,
    rng: &mut RngStream,
) -> Result<ChainTrace> {
    if target.manifold() != manifold {
        return Err(Error::Config("target and chain manifold disagree".into()));
    }
    kernel.validate(manifold)?;
    manifold.check_point(x_init)?;
    if !target.log_density(x_init).is_finite() {
        return Err(Error::Domain(
            "initial state has non-finite log-density".into(),
        ));
    }

    let mut trace = ChainTrace::with_capacity(n_samples);
    let mut x = x_init.clone();
    for step in 0..n_samples {
        let t = transition(kernel, manifold, target, &x, rng).map_err(|e| e.at_step(step))?;
        x = t.state.clone();
        trace.push(&t);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{Bvmf, DirichletSimplex, Vmf};
    use nalgebra::DMatrix;

    fn figure_bvmf() -> Bvmf {
        Bvmf::diagonal_with_linear_tilt(&[-20.0, -10.0, 0.0, 10.0, 20.0], 0.0).unwrap()
    }

    fn sphere_point(d: usize, rng: &mut RngStream) -> Point {
        let z = rng.normal_vector(d);
        Point(&z / z.norm())
    }

    // A Gaussian on R^n for the leapfrog-equivalence check.
    struct Gaussian {
        manifold: Manifold,
        precision: DMatrix<f64>,
    }

    impl Target for Gaussian {
        fn manifold(&self) -> &Manifold {
            &self.manifold
        }
        fn log_density(&self, x: &Point) -> f64 {
            -0.5 * x.0.dot(&(&self.precision * &x.0))
        }
        fn gradient(&self, x: &Point) -> crate::error::Result<DVector<f64>> {
            Ok(-(&self.precision * &x.0))
        }
    }

    #[test]
    fn vanishing_step_size_accepts_with_tiny_energy_error() {
        let target = figure_bvmf();
        let manifold = target.manifold().clone();
        let cfg = HmcConfig::new(StepSizes::Uniform(1e-6), 3).unwrap();
        let mut rng = RngStream::new(1);
        for _ in 0..20 {
            let x = sphere_point(5, &mut rng);
            let t = hmc_transition(&manifold, &target, &x, &cfg, &mut rng).unwrap();
            assert!(t.delta_h.abs() < 1e-9, "delta_h {}", t.delta_h);
            assert!(t.accepted);
        }
    }

    #[test]
    fn uniform_target_conserves_energy_exactly() {
        let target = Vmf::new(DVector::zeros(4)).unwrap();
        let manifold = target.manifold().clone();
        let cfg = HmcConfig::new(StepSizes::Uniform(0.3), 15).unwrap();
        let mut rng = RngStream::new(2);
        for _ in 0..10 {
            let x = sphere_point(4, &mut rng);
            let t = hmc_transition(&manifold, &target, &x, &cfg, &mut rng).unwrap();
            assert!(t.delta_h.abs() < 1e-12);
            assert!(t.accepted);
        }
    }

    #[test]
    fn euclidean_kernel_is_textbook_leapfrog() {
        let precision =
            DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 3.0]);
        let target = Gaussian {
            manifold: Manifold::euclidean(3).unwrap(),
            precision: precision.clone(),
        };
        let manifold = target.manifold().clone();
        let (eps, steps) = (0.05, 12);
        let cfg = HmcConfig::new(StepSizes::Uniform(eps), steps).unwrap();

        let mut ours = RngStream::new(99);
        let mut reference = RngStream::new(99);
        let mut x_ours = Point(DVector::from_vec(vec![0.3, -0.4, 0.2]));
        let mut x_ref = x_ours.clone();

        for _ in 0..50 {
            let t = hmc_transition(&manifold, &target, &x_ours, &cfg, &mut ours).unwrap();
            x_ours = t.state;

            // Textbook leapfrog with the same draw sequence.
            let mut v = reference.normal_vector(3);
            let log_pi0 = -0.5 * x_ref.0.dot(&(&precision * &x_ref.0));
            let h0 = log_pi0 - 0.5 * v.norm_squared();
            let mut q = x_ref.0.clone();
            for _ in 0..steps {
                let g = -(&precision * &q);
                v.axpy(0.5 * eps, &g, 1.0);
                q += &v * eps;
                let g = -(&precision * &q);
                v.axpy(0.5 * eps, &g, 1.0);
            }
            let log_pi1 = -0.5 * q.dot(&(&precision * &q));
            let h1 = log_pi1 - 0.5 * v.norm_squared();
            if reference.uniform() < (h1 - h0).exp() {
                x_ref = Point(q);
            }

            assert_eq!(x_ours.0, x_ref.0, "trajectories must match draw for draw");
        }
    }

    #[test]
    fn integrator_step_is_reversible_on_the_sphere() {
        let target = figure_bvmf();
        let manifold = target.manifold().clone();
        let eps = StepSizes::Uniform(0.01);
        let mut rng = RngStream::new(3);
        for _ in 0..10 {
            let x = sphere_point(5, &mut rng);
            let v = manifold.sample_velocity(&x, &mut rng).unwrap();
            let s = PhasePoint::new(x, v);
            let fwd = integrator_step(&manifold, &target, &s, &eps).unwrap();
            let flipped = PhasePoint::new(fwd.position.clone(), Tangent(-&fwd.velocity.0));
            let back = integrator_step(&manifold, &target, &flipped, &eps).unwrap();
            assert!((back.position.0 - &s.position.0).norm() < 1e-10);
            assert!((-back.velocity.0 - &s.velocity.0).norm() < 1e-10);
        }
    }

    #[test]
    fn integrator_step_is_reversible_through_reflections() {
        let target = DirichletSimplex::new(DVector::from_vec(vec![2.0, 3.0, 4.0])).unwrap();
        let manifold = target.manifold().clone();
        // Step size large enough that trajectories regularly bounce.
        let eps = StepSizes::Uniform(0.4);
        let mut rng = RngStream::new(4);
        for _ in 0..10 {
            let g: Vec<f64> = (0..3).map(|_| -rng.uniform().ln().max(1e-12)).collect();
            let s: f64 = g.iter().sum();
            let x = Point(DVector::from_vec(g.iter().map(|v| v / s).collect()));
            let v = manifold.sample_velocity(&x, &mut rng).unwrap();
            let s0 = PhasePoint::new(x, v);
            let fwd = integrator_step(&manifold, &target, &s0, &eps).unwrap();
            let flipped = PhasePoint::new(fwd.position.clone(), Tangent(-&fwd.velocity.0));
            let back = integrator_step(&manifold, &target, &flipped, &eps).unwrap();
            assert!((back.position.0 - &s0.position.0).norm() < 1e-9);
            assert!((-back.velocity.0 - &s0.velocity.0).norm() < 1e-9);
        }
    }

    #[test]
    fn rejected_transitions_return_the_input_bit_for_bit() {
        // A simplex walk with a huge scale rejects almost every proposal.
        let target = DirichletSimplex::new(DVector::from_vec(vec![3.0, 3.0, 3.0])).unwrap();
        let x0 = Point(DVector::from_vec(vec![
            1.0 / 3.0 + 1e-17,
            1.0 / 3.0,
            1.0 / 3.0,
        ]));
        let mut rng = RngStream::new(5);
        let mut seen_reject = false;
        for _ in 0..50 {
            let t = rwmh_simplex_transition(&target, &x0, 5.0, &mut rng).unwrap();
            if !t.accepted {
                seen_reject = true;
                assert_eq!(t.state.0.as_slice(), x0.0.as_slice());
            }
        }
        assert!(seen_reject);
    }

    #[test]
    fn simplex_walk_preserves_the_plane_and_accepts_small_steps() {
        let target = DirichletSimplex::new(DVector::from_vec(vec![1.0, 1.0, 1.0])).unwrap();
        let mut rng = RngStream::new(6);
        let mut x = Point(DVector::from_vec(vec![0.3, 0.3, 0.4]));
        let mut accepts = 0;
        for _ in 0..200 {
            let t = rwmh_simplex_transition(&target, &x, 1e-4, &mut rng).unwrap();
            assert!((t.state.0.sum() - 1.0).abs() < 1e-12);
            accepts += t.accepted as usize;
            x = t.state;
        }
        // Flat target, interior start, tiny steps: essentially everything
        // is accepted.
        assert!(accepts >= 199, "accepted {accepts}/200");
    }

    #[test]
    fn great_circle_quarter_rotation() {
        let x = Point(DVector::from_vec(vec![1.0, 0.0, 0.0]));
        let delta = DVector::from_vec(vec![0.0, std::f64::consts::FRAC_PI_2, 0.0]);
        let moved = great_circle_step(&x, &delta);
        assert!((moved.0 - DVector::from_vec(vec![0.0, 1.0, 0.0])).norm() < 1e-15);
    }

    #[test]
    fn spherical_walk_stays_on_the_sphere() {
        let target = Vmf::new(DVector::zeros(3)).unwrap();
        let mut rng = RngStream::new(7);
        let mut x = sphere_point(3, &mut rng);
        for _ in 0..500 {
            let t = spherical_rw_transition(&target, &x, 0.5, &mut rng).unwrap();
            assert!((t.state.0.norm() - 1.0).abs() < 1e-12);
            x = t.state;
        }
    }

    #[test]
    fn run_chain_basics() {
        let target = figure_bvmf();
        let manifold = target.manifold().clone();
        let kernel = Kernel::GeodesicHmc(HmcConfig::new(StepSizes::Uniform(0.01), 5).unwrap());
        let mut e5 = DVector::zeros(5);
        e5[4] = 1.0;
        let start = Point(e5);

        let empty = run_chain(
            &kernel,
            &manifold,
            &target,
            &start,
            0,
            &mut RngStream::new(8),
        )
        .unwrap();
        assert!(empty.is_empty());

        let a = run_chain(
            &kernel,
            &manifold,
            &target,
            &start,
            40,
            &mut RngStream::new(8),
        )
        .unwrap();
        let b = run_chain(
            &kernel,
            &manifold,
            &target,
            &start,
            40,
            &mut RngStream::new(8),
        )
        .unwrap();
        assert_eq!(a, b, "fixed seed must give bit-identical traces");
        assert_eq!(a.len(), 40);
        assert!(a.acceptance_rate() > 0.0);

        // Mismatched kernel and manifold is a configuration error.
        let bad = Kernel::SimplexRandomWalk { epsilon: 0.1 };
        assert!(matches!(
            run_chain(&bad, &manifold, &target, &start, 1, &mut RngStream::new(9)),
            Err(Error::Config(_))
        ));
    }
}
