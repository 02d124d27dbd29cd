//! Dirichlet densities in both parameterizations.
//!
//! On the simplex the Dirichlet has Lebesgue density proportional to
//! `prod theta_i^(alpha_i - 1)`. Pushed through the element-wise square root
//! onto the sphere, the Hausdorff density becomes
//! `prod |x_i|^(2 alpha_i - 1)`; the absolute values extend the density to
//! every orthant (reflecting about the axes), which costs only a constant
//! factor. At `alpha = 1/2` the spherical form is uniform.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::manifolds::{Manifold, Point};

use super::Target;

fn validate_alpha(alpha: &DVector<f64>) -> Result<()> {
    if alpha.len() < 2 {
        return Err(Error::Dimension(
            "Dirichlet needs at least two components".into(),
        ));
    }
    if alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
        return Err(Error::Domain(
            "Dirichlet concentrations must be positive and finite".into(),
        ));
    }
    Ok(())
}

/// Dirichlet on the unit sphere via the square-root embedding.
#[derive(Clone, Debug)]
pub struct DirichletSphere {
    /// Per-coordinate exponents `2 alpha_i - 1`.
    exponents: DVector<f64>,
    alpha: DVector<f64>,
    manifold: Manifold,
}

impl DirichletSphere {
    pub fn new(alpha: DVector<f64>) -> Result<Self> {
        validate_alpha(&alpha)?;
        let exponents = alpha.map(|a| 2.0 * a - 1.0);
        let manifold = Manifold::sphere(alpha.len())?;
        Ok(DirichletSphere {
            exponents,
            alpha,
            manifold,
        })
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }
}

impl Target for DirichletSphere {
    fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    fn log_density(&self, x: &Point) -> f64 {
        let mut sum = 0.0;
        for (c, xi) in self.exponents.iter().zip(x.0.iter()) {
            if *c == 0.0 {
                continue; // alpha = 1/2: uniform factor
            }
            if *xi == 0.0 {
                return f64::NEG_INFINITY;
            }
            sum += c * xi.abs().ln();
        }
        sum
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        let mut grad = DVector::zeros(x.0.len());
        for i in 0..x.0.len() {
            let c = self.exponents[i];
            if c == 0.0 {
                continue;
            }
            if x.0[i] == 0.0 {
                return Err(Error::Domain(
                    "Dirichlet-on-sphere gradient is singular at x_i = 0".into(),
                ));
            }
            grad[i] = c / x.0[i];
        }
        Ok(grad)
    }
}

/// Dirichlet on the simplex with respect to the Lebesgue measure of the
/// plane `sum theta = 1`.
#[derive(Clone, Debug)]
pub struct DirichletSimplex {
    alpha: DVector<f64>,
    manifold: Manifold,
}

impl DirichletSimplex {
    pub fn new(alpha: DVector<f64>) -> Result<Self> {
        validate_alpha(&alpha)?;
        let manifold = Manifold::reflective_simplex(alpha.len())?;
        Ok(DirichletSimplex { alpha, manifold })
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }
}

impl Target for DirichletSimplex {
    fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    fn log_density(&self, theta: &Point) -> f64 {
        // Support is the open simplex whatever the concentrations are.
        if theta.0.iter().any(|&t| t <= 0.0) {
            return f64::NEG_INFINITY;
        }
        let mut sum = 0.0;
        for (a, t) in self.alpha.iter().zip(theta.0.iter()) {
            if *a != 1.0 {
                sum += (a - 1.0) * t.ln();
            }
        }
        sum
    }

    fn gradient(&self, theta: &Point) -> Result<DVector<f64>> {
        if theta.0.iter().any(|&t| t <= 0.0) {
            return Err(Error::Domain(
                "Dirichlet gradient is undefined outside the open simplex".into(),
            ));
        }
        let mut grad = DVector::zeros(theta.0.len());
        for i in 0..theta.0.len() {
            let a = self.alpha[i];
            if a != 1.0 {
                grad[i] = (a - 1.0) / theta.0[i];
            }
        }
        Ok(grad)
    }
}
