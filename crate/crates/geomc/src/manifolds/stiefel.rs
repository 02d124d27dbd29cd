//! Stiefel-manifold internals: projection, geodesic flow, drift control.
//!
//! Points are d x p matrices with orthonormal columns, stored column-stacked
//! in the ambient vector. The general geodesic flow multiplies the phase pair
//! [X V] by the exponential of a 2p x 2p block matrix built from A = X^T V
//! (skew-symmetric, constant along the geodesic) and S = V^T V, then undoes
//! the A-rotation with exp(-tA). For the orthogonal group (p = d) the flow
//! collapses to a right-multiplication by exp(tA).

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg::matrix_exp;

use super::{PhasePoint, Point, Tangent};

fn as_matrix(v: &DVector<f64>, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

fn stack(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

pub(super) fn orthonormality_residual(x: &DVector<f64>, rows: usize, cols: usize) -> f64 {
    let xm = as_matrix(x, rows, cols);
    let gram = xm.transpose() * &xm;
    (gram - DMatrix::identity(cols, cols)).norm()
}

pub(super) fn tangency_residual(
    x: &DVector<f64>,
    v: &DVector<f64>,
    rows: usize,
    cols: usize,
) -> f64 {
    let xm = as_matrix(x, rows, cols);
    let vm = as_matrix(v, rows, cols);
    let sym = vm.transpose() * &xm + xm.transpose() * &vm;
    sym.norm()
}

// Closed-form tangent projection U - X (X^T U + U^T X) / 2. Costs O(d p^2),
// unlike the O(d^2 p^2) explicit normal-basis route.
pub(super) fn project(x: &DVector<f64>, u: &DVector<f64>, rows: usize, cols: usize) -> DVector<f64> {
    let xm = as_matrix(x, rows, cols);
    let um = as_matrix(u, rows, cols);
    let sym = xm.transpose() * &um + um.transpose() * &xm;
    let proj = &um - &xm * (sym * 0.5);
    stack(&proj)
}

pub(super) fn flow(
    x: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
    rows: usize,
    cols: usize,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if t == 0.0 || v.iter().all(|&c| c == 0.0) {
        return Ok((x.clone(), v.clone()));
    }
    let p = cols;
    let xm = as_matrix(x, rows, cols);
    let vm = as_matrix(v, rows, cols);
    let a = xm.transpose() * &vm;
    let s = vm.transpose() * &vm;

    // Block generator [[A, -S], [I, A]].
    let mut block = DMatrix::zeros(2 * p, 2 * p);
    block.view_mut((0, 0), (p, p)).copy_from(&a);
    block.view_mut((0, p), (p, p)).copy_from(&(-&s));
    block
        .view_mut((p, 0), (p, p))
        .copy_from(&DMatrix::identity(p, p));
    block.view_mut((p, p), (p, p)).copy_from(&a);

    let big = matrix_exp(&(block * t))?;
    let unrot = matrix_exp(&(a * -t))?;

    let mut pair = DMatrix::zeros(rows, 2 * p);
    pair.view_mut((0, 0), (rows, p)).copy_from(&xm);
    pair.view_mut((0, p), (rows, p)).copy_from(&vm);
    let moved = pair * big;

    let nx = moved.view((0, 0), (rows, p)) * &unrot;
    let nv = moved.view((0, p), (rows, p)) * &unrot;
    Ok((stack(&nx), stack(&nv)))
}

// Orthogonal-group special case: X(t) = X exp(tA), V(t) = V exp(tA).
pub(super) fn orthogonal_flow(
    x: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
    dim: usize,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if t == 0.0 || v.iter().all(|&c| c == 0.0) {
        return Ok((x.clone(), v.clone()));
    }
    let xm = as_matrix(x, dim, dim);
    let vm = as_matrix(v, dim, dim);
    let a = xm.transpose() * &vm;
    let rot = matrix_exp(&(a * t))?;
    Ok((stack(&(&xm * &rot)), stack(&(&vm * &rot))))
}

// Thin QR with the diagonal of R forced positive, so the repaired point is
// the one nearest the drifted X; the velocity is re-projected afterwards.
pub(super) fn renormalize(s: &mut PhasePoint, rows: usize, cols: usize, trigger: f64) {
    if orthonormality_residual(&s.position.0, rows, cols) <= trigger {
        return;
    }
    let xm = as_matrix(&s.position.0, rows, cols);
    let qr = xm.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    s.position = Point(stack(&q));
    s.velocity = Tangent(project(&s.position.0, &s.velocity.0, rows, cols));
}
