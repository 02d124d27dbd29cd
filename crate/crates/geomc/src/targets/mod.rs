//! Target densities with respect to the Hausdorff measure of their manifold.
//!
//! All densities are unnormalised: the sampler only ever needs log-density
//! differences and ambient gradients. A log-density may return negative
//! infinity to mark a zero-density point (such proposals are auto-rejected);
//! requesting a gradient at such a point is an error.

mod bvmf;
mod dirichlet;
mod eigenmodel;
mod volleyball;

pub use bvmf::{Bvmf, Vmf};
pub use dirichlet::{DirichletSimplex, DirichletSphere};
pub use eigenmodel::{generate_network, Eigenmodel, EigenmodelData, EigenmodelState};
pub use volleyball::{generate_matches, MatchRecord, VolleyballSimplex, VolleyballSphere};

use nalgebra::DVector;

use crate::error::Result;
use crate::manifolds::{Manifold, Point};

/// An unnormalised log-density on an embedded manifold, together with its
/// ambient gradient. Projection of the gradient onto the tangent space is
/// the sampler's job, not the target's.
pub trait Target: Sync {
    /// The manifold the density lives on.
    fn manifold(&self) -> &Manifold;

    /// Log-density (up to an additive constant) with respect to the
    /// Hausdorff measure. May be `-inf` at zero-density points.
    fn log_density(&self, x: &Point) -> f64;

    /// Ambient gradient of the log-density. Errors where the gradient is
    /// singular (e.g. on a zero-density set).
    fn gradient(&self, x: &Point) -> Result<DVector<f64>>;
}

impl<T: Target + ?Sized> Target for &T {
    fn manifold(&self) -> &Manifold {
        (**self).manifold()
    }

    fn log_density(&self, x: &Point) -> f64 {
        (**self).log_density(x)
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        (**self).gradient(x)
    }
}

#[cfg(test)]
pub(crate) fn finite_difference_gradient<T: Target>(
    target: &T,
    x: &Point,
    h: f64,
) -> DVector<f64> {
    let n = x.0.len();
    DVector::from_fn(n, |i, _| {
        let mut hi = x.clone();
        let mut lo = x.clone();
        hi.0[i] += h;
        lo.0[i] -= h;
        (target.log_density(&hi) - target.log_density(&lo)) / (2.0 * h)
    })
}

#[cfg(test)]
pub(crate) fn assert_gradient_matches_fd<T: Target>(target: &T, x: &Point, rel_tol: f64) {
    let grad = target.gradient(x).expect("gradient should exist here");
    let fd = finite_difference_gradient(target, x, 1e-6);
    let scale = grad.amax().max(1.0);
    let err = (&grad - &fd).amax() / scale;
    assert!(
        err < rel_tol,
        "gradient mismatch: rel err {err:.3e}\nanalytic {grad}\nfd {fd}"
    );
}
