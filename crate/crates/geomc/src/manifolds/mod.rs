//! Embedded manifolds with closed-form geodesic flows.
//!
//! Every manifold here lives in ambient Euclidean coordinates: points are
//! plain vectors (matrices column-stacked), tangents are ambient vectors
//! constrained to the tangent space, and the three operations the sampler
//! needs — tangent projection, geodesic flow, velocity sampling — all have
//! explicit forms. No coordinate charts are involved anywhere.

mod reflect;
mod stiefel;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Tolerance for membership and tangency checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Constraint residual above which a flow output is renormalised.
const RENORM_TRIGGER: f64 = 1e-12;

/// A point of an embedded manifold, stored in ambient coordinates.
/// Matrix-valued points (Stiefel, orthogonal group) stack their columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(pub DVector<f64>);

/// An ambient vector lying in the tangent space at some point.
#[derive(Clone, Debug, PartialEq)]
pub struct Tangent(pub DVector<f64>);

/// A (position, velocity) pair evolved by the geodesic integrator.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub position: Point,
    pub velocity: Tangent,
}

impl PhasePoint {
    pub fn new(position: Point, velocity: Tangent) -> Self {
        PhasePoint { position, velocity }
    }

    /// Kinetic energy `v^T v / 2`.
    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.velocity.0.norm_squared()
    }
}

/// The supported embedded manifolds.
#[derive(Clone, Debug, PartialEq)]
pub enum Manifold {
    /// All of R^n; the sampler reduces to plain leapfrog HMC here.
    Euclidean { dim: usize },
    /// An affine subspace of R^n, described by an orthonormal basis of its
    /// normal space (positions are unconstrained translates).
    AffineSubspace {
        dim: usize,
        normal_basis: DMatrix<f64>,
    },
    /// The unit sphere `{x in R^d : |x| = 1}`.
    Sphere { dim: usize },
    /// Matrices X in R^(d x p) with orthonormal columns, column-stacked.
    Stiefel { rows: usize, cols: usize },
    /// d x d orthogonal matrices; same constraint as Stiefel with p = d but
    /// with a cheaper geodesic flow.
    OrthogonalGroup { dim: usize },
    /// The probability simplex `{x >= 0, sum x = 1}`, treated as the affine
    /// plane `sum x = 1` with positivity enforced by reflecting the flow off
    /// the boundary facets.
    ReflectiveSimplex { dim: usize },
    /// Cartesian product; points and tangents are block-concatenated.
    Product(Vec<Manifold>),
}

impl Manifold {
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Dimension("Euclidean dimension must be >= 1".into()));
        }
        Ok(Manifold::Euclidean { dim })
    }

    /// Affine subspace of R^n with the given orthonormal normal basis
    /// (n rows, one column per constrained direction).
    pub fn affine_subspace(normal_basis: DMatrix<f64>) -> Result<Self> {
        let (n, k) = (normal_basis.nrows(), normal_basis.ncols());
        if n < 1 || k < 1 || k >= n {
            return Err(Error::Dimension(format!(
                "affine normal basis must be n x k with 1 <= k < n, got {n}x{k}"
            )));
        }
        let gram = normal_basis.transpose() * &normal_basis;
        if (&gram - DMatrix::identity(k, k)).abs().max() > 1e-10 {
            return Err(Error::Domain(
                "affine normal basis columns must be orthonormal".into(),
            ));
        }
        Ok(Manifold::AffineSubspace {
            dim: n,
            normal_basis,
        })
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Dimension(
                "sphere ambient dimension must be >= 1".into(),
            ));
        }
        Ok(Manifold::Sphere { dim })
    }

    pub fn stiefel(rows: usize, cols: usize) -> Result<Self> {
        if rows < 1 || cols < 1 || cols > rows {
            return Err(Error::Dimension(format!(
                "Stiefel manifold needs 1 <= p <= d, got d={rows}, p={cols}"
            )));
        }
        Ok(Manifold::Stiefel { rows, cols })
    }

    pub fn orthogonal_group(dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::Dimension(
                "orthogonal group dimension must be >= 1".into(),
            ));
        }
        Ok(Manifold::OrthogonalGroup { dim })
    }

    pub fn reflective_simplex(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(
                "simplex ambient dimension must be >= 2".into(),
            ));
        }
        Ok(Manifold::ReflectiveSimplex { dim })
    }

    pub fn product(components: Vec<Manifold>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Dimension(
                "product manifold needs at least one component".into(),
            ));
        }
        Ok(Manifold::Product(components))
    }

    /// Dimension of the ambient space the manifold is embedded in.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Manifold::Euclidean { dim } => *dim,
            Manifold::AffineSubspace { dim, .. } => *dim,
            Manifold::Sphere { dim } => *dim,
            Manifold::Stiefel { rows, cols } => rows * cols,
            Manifold::OrthogonalGroup { dim } => dim * dim,
            Manifold::ReflectiveSimplex { dim } => *dim,
            Manifold::Product(parts) => parts.iter().map(|m| m.ambient_dim()).sum(),
        }
    }

    /// Top-level components: the factors of a product, or the manifold
    /// itself as a single block.
    pub fn components(&self) -> &[Manifold] {
        match self {
            Manifold::Product(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// (offset, length) of each top-level block in the ambient vector.
    pub fn block_ranges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for part in self.components() {
            let len = part.ambient_dim();
            out.push((offset, len));
            offset += len;
        }
        out
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.ambient_dim() {
            return Err(Error::Dimension(format!(
                "{what} has length {len} but manifold ambient dimension is {}",
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    /// How far `x` violates the defining constraint (0 on Euclidean/affine
    /// positions, which are unconstrained).
    pub fn constraint_residual(&self, x: &Point) -> f64 {
        let v = &x.0;
        match self {
            Manifold::Euclidean { .. } | Manifold::AffineSubspace { .. } => 0.0,
            Manifold::Sphere { .. } => (v.norm() - 1.0).abs(),
            Manifold::Stiefel { rows, cols } => stiefel::orthonormality_residual(v, *rows, *cols),
            Manifold::OrthogonalGroup { dim } => stiefel::orthonormality_residual(v, *dim, *dim),
            Manifold::ReflectiveSimplex { .. } => {
                let sum_err = (v.sum() - 1.0).abs();
                let neg = v.iter().fold(0.0f64, |acc, &c| acc.max(-c));
                sum_err.max(neg)
            }
            Manifold::Product(parts) => {
                let mut worst = 0.0f64;
                let mut offset = 0;
                for part in parts {
                    let len = part.ambient_dim();
                    let block = Point(v.rows(offset, len).into_owned());
                    worst = worst.max(part.constraint_residual(&block));
                    offset += len;
                }
                worst
            }
        }
    }

    /// How far `v` leaves the tangent space at `x`, relative to `max(1, |v|)`.
    pub fn tangent_residual(&self, x: &Point, v: &Tangent) -> f64 {
        let scale = v.0.norm().max(1.0);
        let abs = match self {
            Manifold::Euclidean { .. } => 0.0,
            Manifold::AffineSubspace { normal_basis, .. } => (normal_basis.transpose() * &v.0).norm(),
            Manifold::Sphere { .. } => x.0.dot(&v.0).abs(),
            Manifold::Stiefel { rows, cols } => stiefel::tangency_residual(&x.0, &v.0, *rows, *cols),
            Manifold::OrthogonalGroup { dim } => stiefel::tangency_residual(&x.0, &v.0, *dim, *dim),
            Manifold::ReflectiveSimplex { .. } => v.0.sum().abs(),
            Manifold::Product(parts) => {
                let mut worst = 0.0f64;
                let mut offset = 0;
                for part in parts {
                    let len = part.ambient_dim();
                    let xb = Point(x.0.rows(offset, len).into_owned());
                    let vb = Tangent(v.0.rows(offset, len).into_owned());
                    worst = worst.max(part.tangent_residual(&xb, &vb) * vb.0.norm().max(1.0));
                    offset += len;
                }
                worst
            }
        };
        abs / scale
    }

    /// Membership test at tolerance [`MEMBERSHIP_TOL`].
    pub fn check_point(&self, x: &Point) -> Result<()> {
        self.check_len(x.0.len(), "point")?;
        if x.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::Membership("point has non-finite coordinates".into()));
        }
        let res = self.constraint_residual(x);
        if res > MEMBERSHIP_TOL {
            return Err(Error::Membership(format!(
                "constraint residual {res:.3e} exceeds {MEMBERSHIP_TOL:.0e}"
            )));
        }
        Ok(())
    }

    /// Tangency test at tolerance [`MEMBERSHIP_TOL`] (relative to `|v|`).
    pub fn check_tangent(&self, x: &Point, v: &Tangent) -> Result<()> {
        self.check_len(v.0.len(), "tangent")?;
        if v.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::Membership(
                "tangent has non-finite coordinates".into(),
            ));
        }
        let res = self.tangent_residual(x, v);
        if res > MEMBERSHIP_TOL {
            return Err(Error::Membership(format!(
                "tangency residual {res:.3e} exceeds {MEMBERSHIP_TOL:.0e}"
            )));
        }
        Ok(())
    }

    fn check_phase(&self, s: &PhasePoint) -> Result<()> {
        self.check_point(&s.position)?;
        self.check_tangent(&s.position, &s.velocity)
    }

    /// Orthogonal projection of an arbitrary ambient vector onto the tangent
    /// space at `x`. Vectors already in the tangent space pass through
    /// unchanged (up to roundoff).
    pub fn tangent_project(&self, x: &Point, u: &DVector<f64>) -> Result<Tangent> {
        self.check_point(x)?;
        self.check_len(u.len(), "vector")?;
        Ok(Tangent(self.project_unchecked(&x.0, u)))
    }

    fn project_unchecked(&self, x: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
        match self {
            Manifold::Euclidean { .. } => u.clone(),
            Manifold::AffineSubspace { normal_basis, .. } => {
                u - normal_basis * (normal_basis.transpose() * u)
            }
            Manifold::Sphere { .. } => u - x * x.dot(u),
            Manifold::Stiefel { rows, cols } => stiefel::project(x, u, *rows, *cols),
            Manifold::OrthogonalGroup { dim } => stiefel::project(x, u, *dim, *dim),
            // Normal direction is 1/sqrt(d) * ones: subtract the mean.
            Manifold::ReflectiveSimplex { .. } => {
                let mean = u.mean();
                u.map(|c| c - mean)
            }
            Manifold::Product(parts) => {
                let mut out = DVector::zeros(u.len());
                let mut offset = 0;
                for part in parts {
                    let len = part.ambient_dim();
                    let xb = x.rows(offset, len).into_owned();
                    let ub = u.rows(offset, len).into_owned();
                    out.rows_mut(offset, len)
                        .copy_from(&part.project_unchecked(&xb, &ub));
                    offset += len;
                }
                out
            }
        }
    }

    /// Draw a velocity from the degenerate Gaussian N(0, I - N N^T) on the
    /// tangent space at `x`: a standard normal vector pushed through the
    /// tangent projection. On Euclidean blocks this is the raw normal draw.
    pub fn sample_velocity(&self, x: &Point, rng: &mut RngStream) -> Result<Tangent> {
        self.check_point(x)?;
        let z = rng.normal_vector(self.ambient_dim());
        Ok(Tangent(self.project_unchecked(&x.0, &z)))
    }

    /// Geodesic flow for time `t` (negative `t` reverses time), with
    /// phase-invariant checks on entry and drift control on exit.
    ///
    /// On the reflective simplex this is the boundary-reflecting flow; on all
    /// other manifolds it is the exact geodesic.
    pub fn flow(&self, s: &PhasePoint, t: f64) -> Result<PhasePoint> {
        self.check_phase(s)?;
        let mut out = self.flow_raw(s, t)?;
        self.renormalize(&mut out);
        Ok(out)
    }

    /// Geodesic flow without entry checks or drift control. Long chains of
    /// raw flows accumulate constraint drift at the floating-point level.
    pub fn flow_raw(&self, s: &PhasePoint, t: f64) -> Result<PhasePoint> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("flow duration {t} is not finite")));
        }
        let x = &s.position.0;
        let v = &s.velocity.0;
        let (nx, nv) = match self {
            Manifold::Euclidean { .. } | Manifold::AffineSubspace { .. } => (x + v * t, v.clone()),
            Manifold::Sphere { .. } => sphere_flow(x, v, t),
            Manifold::Stiefel { rows, cols } => stiefel::flow(x, v, t, *rows, *cols)?,
            Manifold::OrthogonalGroup { dim } => stiefel::orthogonal_flow(x, v, t, *dim)?,
            Manifold::ReflectiveSimplex { .. } => reflect::reflective_flow(x, v, t)?,
            Manifold::Product(parts) => {
                let mut nx = DVector::zeros(x.len());
                let mut nv = DVector::zeros(v.len());
                let mut offset = 0;
                for part in parts {
                    let len = part.ambient_dim();
                    let block = PhasePoint::new(
                        Point(x.rows(offset, len).into_owned()),
                        Tangent(v.rows(offset, len).into_owned()),
                    );
                    let flowed = part.flow_raw(&block, t)?;
                    nx.rows_mut(offset, len).copy_from(&flowed.position.0);
                    nv.rows_mut(offset, len).copy_from(&flowed.velocity.0);
                    offset += len;
                }
                (nx, nv)
            }
        };
        Ok(PhasePoint::new(Point(nx), Tangent(nv)))
    }

    /// Like [`Manifold::flow`], but with one duration per top-level block
    /// (products only; a single duration is broadcast). Used to realise
    /// per-component step sizes on product manifolds.
    pub fn flow_blocks(&self, s: &PhasePoint, ts: &[f64]) -> Result<PhasePoint> {
        if ts.len() == 1 {
            return self.flow(s, ts[0]);
        }
        let parts = self.components();
        if ts.len() != parts.len() {
            return Err(Error::Dimension(format!(
                "{} durations supplied for {} manifold blocks",
                ts.len(),
                parts.len()
            )));
        }
        self.check_phase(s)?;
        let x = &s.position.0;
        let v = &s.velocity.0;
        let mut nx = DVector::zeros(x.len());
        let mut nv = DVector::zeros(v.len());
        let mut offset = 0;
        for (part, &t) in parts.iter().zip(ts) {
            let len = part.ambient_dim();
            let block = PhasePoint::new(
                Point(x.rows(offset, len).into_owned()),
                Tangent(v.rows(offset, len).into_owned()),
            );
            let mut flowed = part.flow_raw(&block, t)?;
            part.renormalize(&mut flowed);
            nx.rows_mut(offset, len).copy_from(&flowed.position.0);
            nv.rows_mut(offset, len).copy_from(&flowed.velocity.0);
            offset += len;
        }
        Ok(PhasePoint::new(Point(nx), Tangent(nv)))
    }

    /// Pull a drifted phase point back onto the manifold when its constraint
    /// residual exceeds 1e-12; below that the state is left untouched.
    pub fn renormalize(&self, s: &mut PhasePoint) {
        match self {
            Manifold::Euclidean { .. } => {}
            Manifold::AffineSubspace { normal_basis, .. } => {
                let res = (normal_basis.transpose() * &s.velocity.0).norm();
                if res > RENORM_TRIGGER * s.velocity.0.norm().max(1.0) {
                    let v = &s.velocity.0;
                    s.velocity.0 = v - normal_basis * (normal_basis.transpose() * v);
                }
            }
            Manifold::Sphere { .. } => {
                if self.constraint_residual(&s.position) > RENORM_TRIGGER {
                    s.position.0 /= s.position.0.norm();
                    s.velocity.0 = self.project_unchecked(&s.position.0, &s.velocity.0);
                }
            }
            Manifold::Stiefel { rows, cols } => {
                stiefel::renormalize(s, *rows, *cols, RENORM_TRIGGER)
            }
            Manifold::OrthogonalGroup { dim } => {
                stiefel::renormalize(s, *dim, *dim, RENORM_TRIGGER)
            }
            Manifold::ReflectiveSimplex { dim } => {
                let sum_err = s.position.0.sum() - 1.0;
                if sum_err.abs() > RENORM_TRIGGER {
                    let shift = sum_err / *dim as f64;
                    s.position.0.apply(|c| *c -= shift);
                }
                let v_sum = s.velocity.0.sum();
                if v_sum.abs() > RENORM_TRIGGER * s.velocity.0.norm().max(1.0) {
                    let shift = v_sum / *dim as f64;
                    s.velocity.0.apply(|c| *c -= shift);
                }
            }
            Manifold::Product(parts) => {
                let mut offset = 0;
                for part in parts {
                    let len = part.ambient_dim();
                    let mut block = PhasePoint::new(
                        Point(s.position.0.rows(offset, len).into_owned()),
                        Tangent(s.velocity.0.rows(offset, len).into_owned()),
                    );
                    part.renormalize(&mut block);
                    s.position.0.rows_mut(offset, len).copy_from(&block.position.0);
                    s.velocity.0.rows_mut(offset, len).copy_from(&block.velocity.0);
                    offset += len;
                }
            }
        }
    }
}

// Great-circle rotation: x(t) = x cos(at) + v sin(at)/a, a = |v|.
// The a -> 0 limit is the stationary point, returned exactly.
fn sphere_flow(x: &DVector<f64>, v: &DVector<f64>, t: f64) -> (DVector<f64>, DVector<f64>) {
    let alpha = v.norm();
    if alpha == 0.0 || t == 0.0 {
        return (x.clone(), v.clone());
    }
    let (sin, cos) = (alpha * t).sin_cos();
    let nx = x * cos + v * (sin / alpha);
    let nv = v * cos - x * (alpha * sin);
    (nx, nv)
}

/// Map a simplex point to the sphere by element-wise square root
/// (positive branch). Errors on negative components.
pub fn simplex_to_sphere(theta: &DVector<f64>) -> Result<Point> {
    if let Some(bad) = theta.iter().find(|&&c| c < 0.0) {
        return Err(Error::Domain(format!(
            "simplex coordinate {bad} is negative"
        )));
    }
    Ok(Point(theta.map(f64::sqrt)))
}

/// Inverse of [`simplex_to_sphere`]: squares each coordinate, so every
/// orthant of the sphere folds back onto the simplex.
pub fn sphere_to_simplex(x: &Point) -> DVector<f64> {
    x.0.map(|c| c * c)
}
