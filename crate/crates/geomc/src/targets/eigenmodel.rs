//! Low-rank probit eigenmodel for network data.
//!
//! An undirected graph on `m` nodes is modelled through
//! `P(edge {i,j}) = Phi(eta_ij)` with `eta = U Lambda U^T + c`, where `U` has
//! orthonormal columns (uniform prior on the Stiefel manifold), the diagonal
//! `Lambda_rr` are N(0, m) and `c` is N(0, 10^2). The posterior lives on the
//! product manifold `Stiefel(m, p) x R^p x R`, with the state stored as
//! `[vec(U), Lambda, c]`.
//!
//! Observations enter through the signed matrix `Y*`: +1 for an observed
//! edge, -1 for an observed non-edge, 0 on the diagonal and for unobserved
//! pairs (which contribute nothing).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::manifolds::{Manifold, Point};
use crate::probit::{log_probit, normal_cdf, normal_quantile, probit_ratio};
use crate::rng::RngStream;

use super::Target;

/// Observed network: node count and the signed observation matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenmodelData {
    m: usize,
    ystar: DMatrix<f64>,
}

impl EigenmodelData {
    /// Build from observed unordered pairs `(i, j, edge)` with
    /// 1-based `i < j`; pairs not listed are treated as unobserved.
    pub fn from_edges(m: usize, edges: &[(usize, usize, bool)]) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension("need at least two nodes".into()));
        }
        let mut ystar = DMatrix::zeros(m, m);
        for &(i, j, y) in edges {
            if i < 1 || j < 1 || i > m || j > m {
                return Err(Error::Dimension(format!(
                    "pair ({i}, {j}) out of range for {m} nodes"
                )));
            }
            if i >= j {
                return Err(Error::Domain(format!(
                    "pairs must satisfy i < j, got ({i}, {j})"
                )));
            }
            if ystar[(i - 1, j - 1)] != 0.0 {
                return Err(Error::Domain(format!("duplicate pair ({i}, {j})")));
            }
            let v = if y { 1.0 } else { -1.0 };
            ystar[(i - 1, j - 1)] = v;
            ystar[(j - 1, i - 1)] = v;
        }
        Ok(EigenmodelData { m, ystar })
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn ystar(&self) -> &DMatrix<f64> {
        &self.ystar
    }

    /// Observed pairs as sorted `(i, j, edge)` triples, 1-based.
    pub fn edges(&self) -> Vec<(usize, usize, bool)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let v = self.ystar[(i, j)];
                if v != 0.0 {
                    out.push((i + 1, j + 1, v > 0.0));
                }
            }
        }
        out
    }

    /// Fraction of observed pairs that are edges, if any pair is observed.
    pub fn edge_fraction(&self) -> Option<f64> {
        let mut observed = 0usize;
        let mut present = 0usize;
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let v = self.ystar[(i, j)];
                if v != 0.0 {
                    observed += 1;
                    if v > 0.0 {
                        present += 1;
                    }
                }
            }
        }
        (observed > 0).then(|| present as f64 / observed as f64)
    }
}

/// Model parameters in structured form.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenmodelState {
    pub u: DMatrix<f64>,
    pub lambda: DVector<f64>,
    pub c: f64,
}

impl EigenmodelState {
    /// Pack as `[vec(U), Lambda, c]` for the product manifold.
    pub fn to_point(&self) -> Point {
        let (m, p) = (self.u.nrows(), self.u.ncols());
        let mut coords = Vec::with_capacity(m * p + p + 1);
        coords.extend_from_slice(self.u.as_slice());
        coords.extend_from_slice(self.lambda.as_slice());
        coords.push(self.c);
        Point(DVector::from_vec(coords))
    }

    pub fn from_point(x: &Point, m: usize, p: usize) -> Result<Self> {
        if x.0.len() != m * p + p + 1 {
            return Err(Error::Dimension(format!(
                "state vector has length {}, expected {}",
                x.0.len(),
                m * p + p + 1
            )));
        }
        Ok(EigenmodelState {
            u: DMatrix::from_column_slice(m, p, &x.0.as_slice()[..m * p]),
            lambda: DVector::from_column_slice(&x.0.as_slice()[m * p..m * p + p]),
            c: x.0[m * p + p],
        })
    }

    /// The linear predictor matrix `U Lambda U^T + c`.
    pub fn eta(&self) -> DMatrix<f64> {
        let mut eta = &self.u * DMatrix::from_diagonal(&self.lambda) * self.u.transpose();
        eta.apply(|e| *e += self.c);
        eta
    }
}

/// The eigenmodel posterior, a [`Target`] on `Stiefel(m, p) x R^p x R`.
#[derive(Clone, Debug)]
pub struct Eigenmodel {
    data: EigenmodelData,
    p: usize,
    manifold: Manifold,
}

impl Eigenmodel {
    pub fn new(data: EigenmodelData, p: usize) -> Result<Self> {
        let m = data.node_count();
        let manifold = Manifold::product(vec![
            Manifold::stiefel(m, p)?,
            Manifold::euclidean(p)?,
            Manifold::euclidean(1)?,
        ])?;
        Ok(Eigenmodel { data, p, manifold })
    }

    pub fn rank(&self) -> usize {
        self.p
    }

    pub fn data(&self) -> &EigenmodelData {
        &self.data
    }

    pub fn state_from_point(&self, x: &Point) -> Result<EigenmodelState> {
        EigenmodelState::from_point(x, self.data.m, self.p)
    }

    /// Fixed starting state: `U` the first `p` coordinate columns,
    /// `Lambda = 0`, `c` matched to the observed edge fraction.
    pub fn initial_state(&self) -> EigenmodelState {
        let m = self.data.m;
        let u = DMatrix::identity(m, self.p);
        let c = match self.data.edge_fraction() {
            Some(f) => {
                let pairs = m * (m - 1) / 2;
                let clamped = f
                    .max(1.0 / (pairs + 1) as f64)
                    .min(pairs as f64 / (pairs + 1) as f64);
                normal_quantile(clamped).unwrap_or(0.0)
            }
            None => 0.0,
        };
        EigenmodelState {
            u,
            lambda: DVector::zeros(self.p),
            c,
        }
    }

    /// `Lambda_rr` column labels, then `c`, appended after the `U` entries;
    /// used for trace output.
    pub fn coordinate_names(&self) -> Vec<String> {
        let (m, p) = (self.data.m, self.p);
        let mut names = Vec::with_capacity(m * p + p + 1);
        for col in 1..=p {
            for row in 1..=m {
                names.push(format!("U{row}_{col}"));
            }
        }
        for r in 1..=p {
            names.push(format!("L{r}"));
        }
        names.push("c".into());
        names
    }
}

impl Target for Eigenmodel {
    fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    fn log_density(&self, x: &Point) -> f64 {
        let state = match self.state_from_point(x) {
            Ok(s) => s,
            Err(_) => return f64::NEG_INFINITY,
        };
        let m = self.data.m;
        let eta = state.eta();
        let mut total = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                let y = self.data.ystar[(i, j)];
                if y == 0.0 {
                    continue;
                }
                match log_probit(y * eta[(i, j)]) {
                    Ok(lp) => total += lp,
                    Err(_) => return f64::NEG_INFINITY,
                }
            }
        }
        total -= state.lambda.norm_squared() / (2.0 * m as f64);
        total -= state.c * state.c / 200.0;
        total
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        let state = self.state_from_point(x)?;
        let m = self.data.m;
        let eta = state.eta();

        // G_ij = d log posterior / d eta_ij = Y*_ij phi/Phi(Y*_ij eta_ij),
        // zero on the diagonal and for unobserved pairs.
        let mut g = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in (i + 1)..m {
                let y = self.data.ystar[(i, j)];
                if y == 0.0 {
                    continue;
                }
                let val = y * probit_ratio(y * eta[(i, j)]).map_err(|_| {
                    Error::Domain("eigenmodel gradient at non-finite linear predictor".into())
                })?;
                g[(i, j)] = val;
                g[(j, i)] = val;
            }
        }

        let grad_u = &g * &state.u * DMatrix::from_diagonal(&state.lambda);
        let utgu = state.u.transpose() * &g * &state.u;
        let grad_lambda = DVector::from_fn(self.p, |r, _| {
            0.5 * utgu[(r, r)] - state.lambda[r] / m as f64
        });
        let grad_c = 0.5 * g.sum() - state.c / 100.0;

        let mut out = Vec::with_capacity(m * self.p + self.p + 1);
        out.extend_from_slice(grad_u.as_slice());
        out.extend_from_slice(grad_lambda.as_slice());
        out.push(grad_c);
        Ok(DVector::from_vec(out))
    }
}

/// Sample a fully-observed synthetic network from planted parameters.
///
/// `U` is a seeded random Stiefel point; every pair is observed with
/// `y_ij ~ Bernoulli(Phi(eta_ij))`. Returns the data and the planted state.
pub fn generate_network(
    m: usize,
    lambda: &DVector<f64>,
    c: f64,
    rng: &mut RngStream,
) -> Result<(EigenmodelData, EigenmodelState)> {
    let p = lambda.len();
    if p < 1 || p > m {
        return Err(Error::Dimension(format!(
            "rank {p} invalid for {m} nodes"
        )));
    }
    let raw = DMatrix::from_fn(m, p, |_, _| rng.standard_normal());
    let qr = raw.qr();
    let r = qr.r();
    let mut u = qr.q();
    for jcol in 0..p {
        if r[(jcol, jcol)] < 0.0 {
            u.column_mut(jcol).neg_mut();
        }
    }
    let planted = EigenmodelState {
        u,
        lambda: lambda.clone(),
        c,
    };
    let eta = planted.eta();
    let mut edges = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            let y = rng.uniform() < normal_cdf(eta[(i, j)]);
            edges.push((i + 1, j + 1, y));
        }
    }
    let data = EigenmodelData::from_edges(m, &edges)?;
    Ok((data, planted))
}
