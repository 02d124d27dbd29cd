//! Shared helpers for the integration suites.

use geomc::manifolds::{Manifold, PhasePoint, Point};
use geomc::rng::RngStream;
use nalgebra::{DMatrix, DVector};

pub fn random_stiefel_point(rows: usize, cols: usize, rng: &mut RngStream) -> Point {
    let raw = DMatrix::from_fn(rows, cols, |_, _| rng.standard_normal());
    let qr = raw.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Point(DVector::from_column_slice(q.as_slice()))
}

pub fn random_point(m: &Manifold, rng: &mut RngStream) -> Point {
    match m {
        Manifold::Euclidean { dim } | Manifold::AffineSubspace { dim, .. } => {
            Point(rng.normal_vector(*dim))
        }
        Manifold::Sphere { dim } => {
            let z = rng.normal_vector(*dim);
            Point(&z / z.norm())
        }
        Manifold::Stiefel { rows, cols } => random_stiefel_point(*rows, *cols, rng),
        Manifold::OrthogonalGroup { dim } => random_stiefel_point(*dim, *dim, rng),
        Manifold::ReflectiveSimplex { dim } => {
            let g: Vec<f64> = (0..*dim)
                .map(|_| -rng.uniform().ln().max(1e-12))
                .collect();
            let s: f64 = g.iter().sum();
            Point(DVector::from_vec(g.iter().map(|x| x / s).collect()))
        }
        Manifold::Product(parts) => {
            let mut coords = Vec::new();
            for part in parts {
                coords.extend_from_slice(random_point(part, rng).0.as_slice());
            }
            Point(DVector::from_vec(coords))
        }
    }
}

pub fn random_phase(m: &Manifold, rng: &mut RngStream) -> PhasePoint {
    let x = random_point(m, rng);
    let v = m.sample_velocity(&x, rng).unwrap();
    PhasePoint::new(x, v)
}

pub fn sphere_barycentre(d: usize) -> Point {
    Point(DVector::from_element(d, (d as f64).sqrt().recip()))
}

pub fn simplex_barycentre(d: usize) -> Point {
    Point(DVector::from_element(d, (d as f64).recip()))
}

/// Sample mean and standard deviation of a series.
pub fn mean_sd(series: &[f64]) -> (f64, f64) {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Count sign changes between consecutive entries.
pub fn sign_changes(series: &[f64]) -> usize {
    series
        .windows(2)
        .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
        .count()
}
