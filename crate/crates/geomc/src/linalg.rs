//! Dense linear-algebra kernels: matrix exponential and basis projection.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

// Pade coefficients b_0..b_m for the [m/m] approximant of exp.
const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm thresholds below which the [m/m] approximant meets unit roundoff.
const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539398330063230e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068;
const THETA13: f64 = 5.371920351148152;

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by Pade approximation with scaling and squaring.
///
/// The approximant degree (3, 5, 7, 9 or 13) is picked from the 1-norm of the
/// input; larger matrices are scaled by a power of two, exponentiated at
/// degree 13 and repeatedly squared.
///
/// Errors with [`Error::Dimension`] on non-square input and
/// [`Error::Domain`] on non-finite entries.
pub fn matrix_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(
            "matrix exponential of a matrix with non-finite entries".into(),
        ));
    }

    let n = m.nrows();
    let norm = one_norm(m);

    let (u, v, squarings) = if norm <= THETA9 {
        let coeffs: &[f64] = if norm <= THETA3 {
            &B3
        } else if norm <= THETA5 {
            &B5
        } else if norm <= THETA7 {
            &B7
        } else {
            &B9
        };
        let (u, v) = pade_low(m, coeffs);
        (u, v, 0u32)
    } else {
        let squarings = ((norm / THETA13).log2().ceil()).max(0.0) as u32;
        let scaled = m / 2f64.powi(squarings as i32);
        let (u, v) = pade13(&scaled);
        (u, v, squarings)
    };

    // exp(A) ~ (V - U)^-1 (V + U)
    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Domain("singular Pade denominator".into()))?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    debug_assert_eq!(result.nrows(), n);
    Ok(result)
}

// U = A * sum(b_{2k+1} A^{2k}), V = sum(b_{2k} A^{2k}) for degree <= 9.
fn pade_low(a: &DMatrix<f64>, coeffs: &[f64]) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut even_powers = vec![DMatrix::identity(n, n)];
    let a2 = a * a;
    let n_even = coeffs.len() / 2;
    for _ in 1..n_even {
        let next = even_powers.last().unwrap() * &a2;
        even_powers.push(next);
    }
    let mut u_sum = DMatrix::zeros(n, n);
    let mut v = DMatrix::zeros(n, n);
    for (k, pow) in even_powers.iter().enumerate() {
        u_sum += pow * coeffs[2 * k + 1];
        v += pow * coeffs[2 * k];
    }
    (a * u_sum, v)
}

fn pade13(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let id = DMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let b = &B13;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &id * b[1];
    let u = a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &id * b[0];
    (u, v)
}

/// Remove from `u` its component in the span of the orthonormal columns of
/// `basis`: returns `(I - N N^T) u`.
///
/// The caller guarantees `N^T N = I` (within 1e-10); only dimensions are
/// checked here.
pub fn project_out_basis(basis: &DMatrix<f64>, u: &DVector<f64>) -> Result<DVector<f64>> {
    if basis.nrows() != u.len() {
        return Err(Error::Dimension(format!(
            "basis has {} rows but vector has length {}",
            basis.nrows(),
            u.len()
        )));
    }
    let coeffs = basis.transpose() * u;
    Ok(u - basis * coeffs)
}
