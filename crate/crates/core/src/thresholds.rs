//! Load thresholds for k-ary cuckoo allocation.
//!
//! For `k >= 3` the threshold density is `c* = xi / (k (1 - e^-xi)^(k-1))`
//! where `xi` is the unique positive root of
//! `xi (1 - e^-xi) / (1 - e^-xi - xi e^-xi) = k`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThresholdError {
    #[error("thresholds need k >= 3, got {0}")]
    TooFewChoices(usize),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub k: usize,
    pub xi_star: f64,
    pub c_star: f64,
}

/// Left-hand side of the root equation as a function of `xi > 0`.
///
/// Tends to 2 as `xi -> 0` and grows without bound, strictly increasing.
pub fn choice_ratio(xi: f64) -> f64 {
    if xi < 1e-3 {
        // e^xi - 1 - xi = xi^2/2 (1 + xi/3 + xi^2/12 + xi^3/60 + ...)
        let tail = 1.0 + xi / 3.0 + xi * xi / 12.0 + xi * xi * xi / 60.0;
        let em1_over_xi = xi.exp_m1() / xi;
        2.0 * em1_over_xi / tail
    } else {
        let q = (-xi).exp();
        let one_minus_q = -(-xi).exp_m1();
        xi * one_minus_q / (one_minus_q - xi * q)
    }
}

/// Threshold density for a given root `xi`.
pub fn load_threshold(k: usize, xi: f64) -> f64 {
    let one_minus_q = -(-xi).exp_m1();
    xi / (k as f64 * one_minus_q.powi(k as i32 - 1))
}

/// Solves for the root by bisection on `(0, k]` down to `tol`, then polishes
/// with Newton steps that stay inside the final bracket.
pub fn solve_threshold(k: usize, tol: f64) -> Result<ThresholdResult, ThresholdError> {
    if k < 3 {
        return Err(ThresholdError::TooFewChoices(k));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ThresholdError::BadTolerance(tol));
    }
    let target = k as f64;
    let g = |xi: f64| choice_ratio(xi) - target;

    // g(0+) = 2 - k < 0, and choice_ratio(k) > k since the denominator is
    // below 1 - e^-k.
    let (mut lo, mut hi) = (0.0_f64, target);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut xi = 0.5 * (lo + hi);
    for _ in 0..4 {
        let h = 1e-6 * xi.max(1e-3);
        let slope = (g(xi + h) - g(xi - h)) / (2.0 * h);
        // NaN slopes stop the polish as well.
        if slope.is_nan() || slope <= 0.0 {
            break;
        }
        let next = xi - g(xi) / slope;
        if !(next > lo && next < hi) || g(next).abs() >= g(xi).abs() {
            break;
        }
        xi = next;
    }

    Ok(ThresholdResult {
        k,
        xi_star: xi,
        c_star: load_threshold(k, xi),
    })
}
