use alloc::vec::Vec;

use super::cf_diag;
use crate::dart::Dart;
use crate::error::AnalysisError;

/// Rises smaller than this between neighbouring grid points are ignored.
pub const MONOTONE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub t_grid: Vec<f64>,
    pub abs_phi: Vec<f64>,
    pub monotone: bool,
    pub first_violation: Option<(f64, f64)>,
}

/// `|φ(t·1)|` on `steps + 1` equally spaced points of `[0, t_max]`.
pub fn cf_scan(dart: &Dart, t_max: f64, steps: usize) -> Result<ScanReport, AnalysisError> {
    if steps < 2 {
        return Err(AnalysisError::InvalidParameter("scan needs at least two steps"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(AnalysisError::InvalidParameter("t_max must be positive"));
    }
    dart.validate()?;
    let t_grid: Vec<f64> = (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect();
    let abs_phi: Vec<f64> = t_grid.iter().map(|&t| cf_diag(dart, t).norm()).collect();
    let first_violation = abs_phi
        .windows(2)
        .position(|w| w[1] > w[0] + MONOTONE_TOL)
        .map(|i| (t_grid[i], t_grid[i + 1]));
    Ok(ScanReport { monotone: first_violation.is_none(), t_grid, abs_phi, first_violation })
}
