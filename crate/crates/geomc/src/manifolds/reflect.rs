//! Boundary-reflecting flow on the probability simplex.
//!
//! Inside the simplex the geodesics of the plane `sum x = 1` are straight
//! lines. Whenever a coordinate would go negative, the velocity is reflected
//! about the in-plane normal of that facet,
//! `n_j = (d e_j - 1) / sqrt(d(d-1))`, and the walk continues until the time
//! budget is spent. Reflections preserve the kinetic energy and the in-plane
//! constraint, so the map stays reversible and measure-preserving.

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Hard cap on reflections per call; pathological near-corner trajectories
/// error out instead of spinning.
pub const MAX_REFLECTIONS: usize = 1_000_000;

pub(super) fn reflective_flow(
    x: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    if t < 0.0 {
        // Time reversal: flip velocity, flow forward, flip back.
        let (nx, nv) = reflective_flow(x, &(-v), -t)?;
        return Ok((nx, -nv));
    }
    if x.iter().any(|&c| c <= 0.0) {
        return Err(Error::Boundary);
    }
    if t == 0.0 || v.iter().all(|&c| c == 0.0) {
        return Ok((x.clone(), v.clone()));
    }

    let d = x.len();
    let mut x = x.clone();
    let mut v = v.clone();
    let mut budget = t;
    let mut reflections = 0usize;

    while budget > 0.0 {
        // Earliest boundary hit: only coordinates moving toward zero count.
        let mut hit_time = f64::INFINITY;
        let mut hit_idx = usize::MAX;
        for i in 0..d {
            if v[i] < 0.0 {
                let ti = -x[i] / v[i];
                if ti < hit_time {
                    hit_time = ti;
                    hit_idx = i;
                }
            }
        }

        if hit_time >= budget {
            x.axpy(budget, &v, 1.0);
            break;
        }

        x.axpy(hit_time, &v, 1.0);
        x[hit_idx] = 0.0;
        budget -= hit_time;

        // Budget remains, so reflect v about the facet normal:
        // v <- v - 2 n_j (n_j^T v) with n_j = (d e_j - 1)/sqrt(d(d-1)).
        reflections += 1;
        if reflections > MAX_REFLECTIONS {
            return Err(Error::ReflectionLimit(reflections));
        }
        let df = d as f64;
        let coef = 2.0 * (df * v[hit_idx] - v.sum()) / (df * (df - 1.0));
        for i in 0..d {
            v[i] += coef;
        }
        v[hit_idx] -= coef * df;
    }

    Ok((x, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_stepped_two_dimensional_bounce() {
        // Start mid-edge, run into the x2 = 0 facet at t = 0.625, bounce,
        // finish at (0.7, 0.3) with the velocity mirrored.
        let x = DVector::from_vec(vec![0.5, 0.5]);
        let v = DVector::from_vec(vec![0.8, -0.8]);
        let (nx, nv) = reflective_flow(&x, &v, 1.0).unwrap();
        assert!((nx[0] - 0.7).abs() < 1e-12 && (nx[1] - 0.3).abs() < 1e-12, "{nx}");
        assert!((nv[0] + 0.8).abs() < 1e-12 && (nv[1] - 0.8).abs() < 1e-12, "{nv}");
    }

    #[test]
    fn interior_segment_is_a_straight_line() {
        let x = DVector::from_vec(vec![1.0 / 3.0; 3]);
        let v = DVector::from_vec(vec![0.1, -0.05, -0.05]);
        let eps = 0.2;
        let (nx, nv) = reflective_flow(&x, &v, eps).unwrap();
        let expected = &x + &v * eps;
        assert!((nx - expected).norm() < 1e-15);
        assert_eq!(nv, v);
    }

    #[test]
    fn zero_velocity_never_reaches_a_boundary() {
        let x = DVector::from_vec(vec![0.25, 0.25, 0.5]);
        let v = DVector::zeros(3);
        let (nx, nv) = reflective_flow(&x, &v, 5.0).unwrap();
        assert_eq!(nx, x);
        assert_eq!(nv, v);
    }

    #[test]
    fn boundary_start_is_rejected() {
        let x = DVector::from_vec(vec![0.0, 1.0]);
        let v = DVector::from_vec(vec![1.0, -1.0]);
        assert!(matches!(
            reflective_flow(&x, &v, 0.1),
            Err(Error::Boundary)
        ));
    }

    #[test]
    fn time_reversal_retraces_the_path() {
        let x = DVector::from_vec(vec![0.2, 0.3, 0.5]);
        let v = DVector::from_vec(vec![0.9, -0.5, -0.4]);
        let (mx, mv) = reflective_flow(&x, &v, 1.7).unwrap();
        let (bx, bv) = reflective_flow(&mx, &(-&mv), 1.7).unwrap();
        assert!((bx - &x).norm() < 1e-12);
        assert!((-bv - &v).norm() < 1e-12);
    }

    #[test]
    fn kinetic_energy_survives_many_reflections() {
        let x = DVector::from_vec(vec![0.1, 0.2, 0.3, 0.4]);
        let v = DVector::from_vec(vec![2.0, -1.0, 0.5, -1.5]);
        let (nx, nv) = reflective_flow(&x, &v, 25.0).unwrap();
        assert!((nv.norm() - v.norm()).abs() < 1e-10);
        assert!((nx.sum() - 1.0).abs() < 1e-9);
        assert!(nx.iter().all(|&c| c >= 0.0));
    }
}
