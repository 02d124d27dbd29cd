//! Stable probit quantities: log Phi, the ratio phi/Phi, and friends.
//!
//! Direct evaluation of Phi(x) underflows near x = -40 long before the
//! quantities the models need (log Phi and phi/Phi) lose meaning. Both are
//! rewritten through the scaled complementary error function
//! `erfcx(t) = exp(t^2) erfc(t)`, which stays well-scaled arbitrarily far
//! into the tail.

use crate::error::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;
const SQRT_2_OVER_PI: f64 = 0.7978845608028654; // sqrt(2/pi)
const INV_SQRT_2PI: f64 = 0.3989422804014327; // 1/sqrt(2 pi)
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

// Below this x the direct log Phi route starts losing accuracy; switch to
// the erfcx form.
const DIRECT_CUTOFF: f64 = -1.0;
// Below this t, exp(t^2) erfc(t) is exact enough; above it the Laplace
// continued fraction converges quickly.
const ERFCX_CF_CUTOFF: f64 = 4.0;

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Accurate over the whole real line; for large negative `x` the result
/// overflows to infinity, as the true value does.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // erfcx(-x) = 2 exp(x^2) - erfcx(x)
        let e = (x * x).exp();
        if e.is_infinite() {
            return f64::INFINITY;
        }
        return 2.0 * e - erfcx(-x);
    }
    if x < ERFCX_CF_CUTOFF {
        (x * x).exp() * libm::erfc(x)
    } else {
        // Laplace continued fraction, evaluated by the modified Lentz scheme:
        // sqrt(pi) erfcx(x) = 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
        let tiny = 1e-300;
        let mut f = x;
        let mut c = x;
        let mut d = 0.0;
        for n in 1..200 {
            let a = 0.5 * n as f64;
            d = x + a * d;
            if d == 0.0 {
                d = tiny;
            }
            c = x + a / c;
            if c == 0.0 {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 / (std::f64::consts::PI.sqrt() * f)
    }
}

/// Standard normal density phi(x).
pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF Phi(x). Underflows to zero in the far left tail;
/// use [`log_probit`] when the tail matters.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// log Phi(x), finite for any finite `x` (no underflow down to x = -40 and
/// far beyond).
pub fn log_probit(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("log_probit of non-finite {x}")));
    }
    if x >= DIRECT_CUTOFF {
        Ok(normal_cdf(x).ln())
    } else {
        let t = -x * FRAC_1_SQRT_2;
        Ok(-LN_2 - 0.5 * x * x + erfcx(t).ln())
    }
}

/// The inverse Mills ratio phi(x)/Phi(x): finite and positive for every
/// finite `x`, approaching -x as x goes to minus infinity.
pub fn probit_ratio(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("probit_ratio of non-finite {x}")));
    }
    if x >= DIRECT_CUTOFF {
        Ok(normal_pdf(x) / normal_cdf(x))
    } else {
        Ok(SQRT_2_OVER_PI / erfcx(-x * FRAC_1_SQRT_2))
    }
}

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
///
/// Acklam's rational approximation polished with one Halley step.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "normal quantile requires p in (0,1), got {p}"
        )));
    }

    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Halley refinement.
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}
