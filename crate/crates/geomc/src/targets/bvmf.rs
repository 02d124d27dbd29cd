//! Directional exponential families on the sphere.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::manifolds::{Manifold, Point};

use super::Target;

/// Von Mises-Fisher distribution: density proportional to `exp(c^T x)` on
/// the unit sphere, with `c` the scaled mean direction.
#[derive(Clone, Debug)]
pub struct Vmf {
    c: DVector<f64>,
    manifold: Manifold,
}

impl Vmf {
    pub fn new(c: DVector<f64>) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("vMF parameter must be finite".into()));
        }
        let manifold = Manifold::sphere(c.len())?;
        Ok(Vmf { c, manifold })
    }

    pub fn concentration(&self) -> f64 {
        self.c.norm()
    }
}

impl Target for Vmf {
    fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    fn log_density(&self, x: &Point) -> f64 {
        self.c.dot(&x.0)
    }

    fn gradient(&self, _x: &Point) -> Result<DVector<f64>> {
        Ok(self.c.clone())
    }
}

/// Bingham-von Mises-Fisher distribution: density proportional to
/// `exp(c^T x + x^T A x)` on the unit sphere. Possibly bimodal, which makes
/// it the standard stress test for mode-hopping.
#[derive(Clone, Debug)]
pub struct Bvmf {
    c: DVector<f64>,
    a: DMatrix<f64>,
    manifold: Manifold,
}

impl Bvmf {
    /// Rejects a materially asymmetric `a`; roundoff-level asymmetry is
    /// symmetrised away.
    pub fn new(c: DVector<f64>, a: DMatrix<f64>) -> Result<Self> {
        let d = c.len();
        if a.nrows() != d || a.ncols() != d {
            return Err(Error::Dimension(format!(
                "BvMF needs a {d}x{d} matrix to match c, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) || a.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("BvMF parameters must be finite".into()));
        }
        let asym = (&a - a.transpose()).abs().max();
        if asym > 1e-10 * a.abs().max().max(1.0) {
            return Err(Error::Domain(format!(
                "BvMF matrix must be symmetric (asymmetry {asym:.3e})"
            )));
        }
        let sym = (&a + a.transpose()) * 0.5;
        let manifold = Manifold::sphere(d)?;
        Ok(Bvmf {
            c,
            a: sym,
            manifold,
        })
    }

    /// The paper-style construction `A = diag(a)`, `c = c1 * e1`.
    pub fn diagonal_with_linear_tilt(a_diag: &[f64], c1: f64) -> Result<Self> {
        let d = a_diag.len();
        let mut c = DVector::zeros(d);
        if d > 0 {
            c[0] = c1;
        }
        Bvmf::new(
            c,
            DMatrix::from_diagonal(&DVector::from_column_slice(a_diag)),
        )
    }
}

impl Target for Bvmf {
    fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    fn log_density(&self, x: &Point) -> f64 {
        self.c.dot(&x.0) + x.0.dot(&(&self.a * &x.0))
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        Ok(&self.c + (&self.a * &x.0) * 2.0)
    }
}
