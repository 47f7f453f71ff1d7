//! Box-dimension solver, empirical dimension estimates from count growth,
//! and the inclusion-monotonicity check.
//!
//! The box equation sum_i N_i^(-s/n_i) = 1 has a unique root s >= 0 whenever
//! every effective base N_i^(1/n_i) exceeds 1 and there are >= 2 terms (the
//! left side is strictly decreasing from the term count down to 0); a single
//! term with N > 1 forces s = 0 exactly. Bisection is used throughout:
//! unconditionally convergent, and exactness is irrelevant at the default
//! tolerance of 1e-12.

use crate::ifs::{generate, member, CountSeries, FractalSpec, IfsError, Membership};
use crate::rings::RingElement;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DimError {
    #[error("no weights given")]
    NoWeights,
    #[error("weight N={0} is degenerate (effective base <= 1): the box equation has no root")]
    DegenerateWeight(u64),
    #[error("single weight N=1: every s solves the box equation")]
    AllSolutions,
    #[error("weight must satisfy N >= 1 and n >= 1")]
    InvalidWeight,
    #[error("leading-coefficient norm does not fit in u64")]
    WeightTooLarge,
    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error(transparent)]
    Ifs(#[from] IfsError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionResult {
    pub s: f64,
    /// |sum_i N_i^(-s/n_i) - 1| at the returned s.
    pub residual: f64,
    pub iterations: u32,
}

fn box_lhs(weights: &[(u64, u32)], s: f64) -> f64 {
    weights
        .iter()
        .map(|&(n, deg)| (n as f64).powf(-s / deg as f64))
        .sum()
}

/// Unique s >= 0 with sum_i N_i^(-s/n_i) = 1, by bracketing + bisection.
pub fn solve_box_equation(weights: &[(u64, u32)], tol: f64) -> Result<DimensionResult, DimError> {
    if weights.is_empty() {
        return Err(DimError::NoWeights);
    }
    if weights.iter().any(|&(n, deg)| n == 0 || deg == 0) {
        return Err(DimError::InvalidWeight);
    }
    if let Some(&(n, _)) = weights.iter().find(|&&(n, _)| n == 1) {
        if weights.len() == 1 {
            return Err(DimError::AllSolutions);
        }
        return Err(DimError::DegenerateWeight(n));
    }
    if weights.len() == 1 {
        // single term equals 1 exactly at s = 0
        return Ok(DimensionResult {
            s: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut hi = 1.0f64;
    let mut iterations = 0u32;
    while box_lhs(weights, hi) > 1.0 {
        hi *= 2.0;
        iterations += 1;
        if hi > 1e9 {
            // cannot happen for valid weights; guard against NaN inputs
            return Err(DimError::InvalidWeight);
        }
    }
    let mut lo = 0.0f64;
    let s = loop {
        let mid = 0.5 * (lo + hi);
        let val = box_lhs(weights, mid);
        iterations += 1;
        if (val - 1.0).abs() <= tol
            || (hi - lo) < f64::EPSILON * mid.max(1.0)
            || iterations > 20_000
        {
            break mid;
        }
        if val > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    };
    // Polish with Newton: once bisection is inside the tolerance the
    // quadratic convergence reaches machine precision in a step or two,
    // so the reported digits are exact regardless of how the tolerance
    // interacts with the local slope.
    let mut s = s;
    for _ in 0..4 {
        let val = box_lhs(weights, s) - 1.0;
        let deriv: f64 = weights
            .iter()
            .map(|&(n, deg)| {
                let e = (n as f64).ln() / deg as f64;
                -e * (n as f64).powf(-s / deg as f64)
            })
            .sum();
        if deriv == 0.0 {
            break;
        }
        let next = s - val / deriv;
        iterations += 1;
        if (next - s).abs() <= f64::EPSILON * s.abs().max(1.0) {
            s = next;
            break;
        }
        s = next;
    }
    Ok(DimensionResult {
        s,
        residual: (box_lhs(weights, s) - 1.0).abs(),
        iterations,
    })
}

/// Box-equation weights (Norm(a_i), n_i) of a spec's maps.
pub fn box_weights(spec: &FractalSpec) -> Result<Vec<(u64, u32)>, DimError> {
    spec.maps()
        .iter()
        .map(|m| {
            let n = m.leading().norm().to_u64().ok_or(DimError::WeightTooLarge)?;
            Ok((n, m.degree() as u32))
        })
        .collect()
}

/// Dimension of a spec via the box equation on its map weights.
pub fn spec_dimension(spec: &FractalSpec, tol: f64) -> Result<DimensionResult, DimError> {
    solve_box_equation(&box_weights(spec)?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points_used: usize,
    /// Set when the usable thresholds span fewer than two orders of
    /// magnitude; slopes fitted on short spans are staircase-biased.
    pub span_warning: bool,
}

/// Plain least squares of y against x. Returns (slope, intercept, r2).
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let fit = slope * x + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r2)
}

/// Least-squares fit of log N_k against log x_k. Thresholds below 1 or with
/// zero count are skipped.
pub fn estimate_dimension(series: &CountSeries) -> Result<GrowthFit, DimError> {
    if series.thresholds.len() < 3 {
        return Err(DimError::TooFewPoints {
            needed: 3,
            got: series.thresholds.len(),
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (t, &c) in series.thresholds.iter().zip(&series.counts) {
        if c >= 1 {
            if let Some(tf) = t.to_f64() {
                if tf >= 1.0 {
                    xs.push(tf.ln());
                    ys.push((c as f64).ln());
                }
            }
        }
    }
    if xs.len() < 2 {
        return Err(DimError::TooFewPoints {
            needed: 2,
            got: xs.len(),
        });
    }
    let (slope, intercept, r2) = least_squares(&xs, &ys);
    let span = xs.last().unwrap() - xs.first().unwrap();
    Ok(GrowthFit {
        slope,
        intercept,
        r2,
        points_used: xs.len(),
        span_warning: span < 2.0 * std::f64::consts::LN_10,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneReport {
    pub subset_confirmed: bool,
    pub counterexample: Option<RingElement>,
    pub dim_a: f64,
    pub dim_b: f64,
    /// dim_a <= dim_b + tol.
    pub consistent: bool,
}

/// Checks generate(A, X) subset-of generate(B, X) (falling back to a
/// membership query for elements missing from B's window) and compares the
/// two box dimensions. A failing subset check reports the first
/// counterexample; it signals the inclusion hypothesis is violated.
pub fn check_monotone(
    spec_a: &FractalSpec,
    spec_b: &FractalSpec,
    window: &num_bigint::BigInt,
    tol: f64,
) -> Result<MonotoneReport, DimError> {
    let sample_a = generate(spec_a, window)?;
    let sample_b = generate(spec_b, window)?;
    let set_b: BTreeSet<&RingElement> = sample_b.elements.iter().collect();
    let mut counterexample = None;
    for e in &sample_a.elements {
        if set_b.contains(e) {
            continue;
        }
        if member(spec_b, e, 10_000)? != Membership::Yes {
            counterexample = Some(e.clone());
            break;
        }
    }
    let dim_a = spec_dimension(spec_a, DEFAULT_TOL)?.s;
    let dim_b = spec_dimension(spec_b, DEFAULT_TOL)?.s;
    Ok(MonotoneReport {
        subset_confirmed: counterexample.is_none(),
        counterexample,
        dim_a,
        dim_b,
        consistent: dim_a <= dim_b + tol,
    })
}
