//! Cosine reasonableness of `Bern(p) + N(0, σ²)`.
//!
//! `|φ(d)|² = (p² + (1-p)² + 2p(1-p) cos d) e^{-σ²d²}`, and its derivative is
//! nonpositive exactly when
//!
//! ```text
//! E(d) = σ² d (p² + (1-p)² + 2(1-p)p cos d) + (1-p)p sin d >= 0.
//! ```
//!
//! Since the bracket is at least `(1-2p)²`, `E(d) > 0` for every
//! `d > (1-p)p / (σ²(1-2p)²)`, so a scan up to that point is conclusive.

use core::f64::consts::PI;

use libm::{ceil, cos, sin, sqrt};

use crate::error::AnalysisError;
use crate::math::golden_max;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernNormalParams {
    pub p: f64,
    pub sigma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionReport {
    pub reasonable_cos: bool,
    pub min_value: f64,
    pub argmin_d: f64,
    /// Largest distance examined.
    pub d_scanned: f64,
    /// True when the scan covered the range where the expression can be negative,
    /// or exhibited a violation.
    pub conclusive: bool,
}

/// Longest scan the criterion will run before giving up on conclusiveness.
pub const SCAN_CAP: f64 = 1e5;
const MAX_STEP: f64 = 0.01;

impl BernNormalParams {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(AnalysisError::InvalidParameter("p must lie in (0, 1)"));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(AnalysisError::InvalidParameter("sigma must be positive"));
        }
        Ok(())
    }

    pub fn expression(&self, d: f64) -> f64 {
        let (p, q) = (self.p, 1.0 - self.p);
        self.sigma * self.sigma * d * (p * p + q * q + 2.0 * p * q * cos(d)) + p * q * sin(d)
    }

    /// Beyond this distance the expression is positive; infinite for `p = 1/2`.
    pub fn safe_distance(&self) -> f64 {
        let gap = 1.0 - 2.0 * self.p;
        let s2 = self.sigma * self.sigma;
        if gap == 0.0 {
            f64::INFINITY
        } else {
            self.p * (1.0 - self.p) / (s2 * gap * gap)
        }
    }
}

/// `(1-p)p / (π(1-2p)²)`: a value of `σ²` above which the criterion holds.
pub fn sufficient_sigma_sq(p: f64) -> f64 {
    let gap = 1.0 - 2.0 * p;
    p * (1.0 - p) / (PI * gap * gap)
}

/// Scans the expression on `(0, max(d_max, safe distance)]` with at least
/// `steps` points and a spacing of at most 0.01, then refines every grid-local
/// minimum by golden section.
pub fn bern_normal_criterion(params: BernNormalParams, d_max: f64, steps: usize) -> Result<CriterionReport, AnalysisError> {
    scan(params, d_max, steps, false)
}

fn scan(params: BernNormalParams, d_max: f64, steps: usize, stop_at_violation: bool) -> Result<CriterionReport, AnalysisError> {
    params.validate()?;
    if !(d_max >= 4.0 * PI) {
        return Err(AnalysisError::InvalidParameter("d_max must be at least 4π"));
    }
    let safe = params.safe_distance();
    let end = d_max.max(safe.min(SCAN_CAP));
    let n = (steps.max(2) as f64).max(ceil(end / MAX_STEP)) as usize;
    let h = end / n as f64;
    let e = |d: f64| params.expression(d);
    let pq = params.p * (1.0 - params.p);
    let s2 = params.sigma * params.sigma;

    let mut best = (f64::INFINITY, 0.0);
    let mut prev2 = e(h);
    let mut prev1 = e(2.0 * h);
    if prev2 < best.0 {
        best = (prev2, h);
    }
    if prev1 < best.0 {
        best = (prev1, 2.0 * h);
    }
    for i in 3..=n {
        let d = i as f64 * h;
        let cur = e(d);
        if cur < best.0 {
            best = (cur, d);
        }
        // |E''| <= pq(4σ² + 2σ²d + 1) bounds how far below the grid a minimum can dip.
        let dip = 0.5 * h * h * pq * (s2 * (4.0 + 2.0 * d) + 1.0);
        if prev1 <= prev2 && prev1 <= cur && prev1 - dip < best.0.min(0.0) {
            let mid = (i - 1) as f64 * h;
            let (x, negv) = golden_max(|t| -e(t), mid - h, mid + h, 1e-12);
            if -negv < best.0 {
                best = (-negv, x);
            }
        }
        prev2 = prev1;
        prev1 = cur;
        if stop_at_violation && best.0 < 0.0 {
            break;
        }
    }
    let (min_value, argmin_d) = best;
    let reasonable_cos = min_value >= 0.0;
    Ok(CriterionReport {
        reasonable_cos,
        min_value,
        argmin_d,
        d_scanned: end,
        conclusive: !reasonable_cos || end >= safe,
    })
}

/// Smallest `σ` for which the criterion holds, by bisection to within `tol`.
pub fn phase_boundary_sigma(p: f64, tol: f64) -> Result<f64, AnalysisError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(AnalysisError::InvalidParameter("p must lie in (0, 1)"));
    }
    if (p - 0.5).abs() < 1e-12 {
        return Err(AnalysisError::InvalidParameter("no phase boundary at p = 1/2"));
    }
    if !(tol > 0.0) {
        return Err(AnalysisError::InvalidParameter("tolerance must be positive"));
    }
    let holds = |sigma: f64| -> Result<bool, AnalysisError> {
        Ok(scan(BernNormalParams { p, sigma }, 4.0 * PI, 4000, true)?.reasonable_cos)
    };
    let mut hi = sqrt(sufficient_sigma_sq(p));
    let mut tries = 0;
    while !holds(hi)? {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(AnalysisError::NoZero(hi));
        }
    }
    let mut lo = hi * 1e-6;
    if holds(lo)? {
        return Ok(lo);
    }
    while hi - lo > 0.5 * tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
