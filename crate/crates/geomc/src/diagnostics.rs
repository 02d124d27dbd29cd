//! Effective sample size and trace summaries.
//!
//! ESS uses the initial monotone sequence estimator on the sample
//! autocovariances: successive lag pairs `Gamma_m = gamma_{2m} + gamma_{2m+1}`
//! are accumulated while positive, forced non-increasing, and the asymptotic
//! variance is `2 sum Gamma - gamma_0`. The estimate can exceed the sample
//! count when autocorrelations are negative, and is undefined (an error) for
//! constant or purely antithetic series.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler::ChainTrace;

// Above this length the lag table is built with an FFT; below, directly.
const FFT_THRESHOLD: usize = 512;

fn autocovariance_direct(z: &[f64], max_lag: usize) -> Vec<f64> {
    let n = z.len();
    let mut out = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag {
        let mut acc = 0.0;
        for t in 0..(n - k) {
            acc += z[t] * z[t + k];
        }
        out.push(acc / n as f64);
    }
    out
}

fn autocovariance_fft(z: &[f64], max_lag: usize) -> Vec<f64> {
    let n = z.len();
    let len = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = z
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(len)
        .collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);

    let scale = 1.0 / (len as f64 * n as f64);
    (0..=max_lag).map(|k| buf[k].re * scale).collect()
}

// Biased sample autocovariances gamma_0..gamma_max_lag of the centred series.
fn autocovariance(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let z: Vec<f64> = series.iter().map(|x| x - mean).collect();
    if n >= FFT_THRESHOLD {
        autocovariance_fft(&z, max_lag)
    } else {
        autocovariance_direct(&z, max_lag)
    }
}

/// Effective sample size `N gamma_0 / (2 sum Gamma - gamma_0)` with the
/// initial-monotone-sequence truncation; lags are capped at N/2.
///
/// Errors on series shorter than 10, non-finite values, zero variance, and
/// when the variance estimate is non-positive (strictly antithetic series).
pub fn ess(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < 10 {
        return Err(Error::Domain(format!(
            "ESS needs at least 10 samples, got {n}"
        )));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("ESS of a series with non-finite values".into()));
    }

    let max_lag = n / 2;
    let gamma = autocovariance(series, max_lag);
    let gamma0 = gamma[0];
    if gamma0 <= 0.0 {
        return Err(Error::UndefinedEss("series is constant".into()));
    }

    let mut sum = 0.0;
    let mut floor = f64::INFINITY;
    let mut m = 0usize;
    while 2 * m + 1 <= max_lag {
        let pair = gamma[2 * m] + gamma[2 * m + 1];
        if pair <= 0.0 {
            break;
        }
        floor = floor.min(pair);
        sum += floor;
        m += 1;
    }

    let sigma2 = 2.0 * sum - gamma0;
    if sigma2 <= 0.0 {
        return Err(Error::UndefinedEss(
            "non-positive variance estimate (antithetic series)".into(),
        ));
    }
    Ok(n as f64 * gamma0 / sigma2)
}

/// Per-coordinate ESS plus acceptance statistics for a trace.
#[derive(Clone, Debug, Serialize)]
pub struct EssReport {
    /// ESS of each ambient coordinate.
    pub per_coordinate: Vec<f64>,
    /// Arithmetic mean of the per-coordinate values.
    pub mean_ess: f64,
    /// `100 * mean_ess / n_samples`.
    pub ess_percent: f64,
    /// `mean_ess / wall_seconds`; absent when no positive wall time given.
    pub ess_per_second: Option<f64>,
    pub acceptance_rate: f64,
    pub n_samples: usize,
}

/// Summarise a trace: coordinate-wise ESS, their mean, ESS percent, ESS per
/// second (absent when `wall_seconds` is not positive) and acceptance rate.
pub fn summarize(trace: &ChainTrace, wall_seconds: f64) -> Result<EssReport> {
    if trace.is_empty() {
        return Err(Error::Domain("cannot summarise an empty trace".into()));
    }
    let dim = trace.samples()[0].len();
    let per_coordinate: Vec<f64> = (0..dim)
        .map(|i| ess(&trace.coordinate(i)))
        .collect::<Result<_>>()?;
    let mean_ess = per_coordinate.iter().sum::<f64>() / per_coordinate.len() as f64;
    let n = trace.len();
    Ok(EssReport {
        mean_ess,
        ess_percent: 100.0 * mean_ess / n as f64,
        ess_per_second: (wall_seconds > 0.0).then(|| mean_ess / wall_seconds),
        acceptance_rate: trace.acceptance_rate(),
        n_samples: n,
        per_coordinate,
    })
}
