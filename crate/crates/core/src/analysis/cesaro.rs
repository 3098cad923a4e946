use libm::ceil;

use super::cf_diag;
use crate::dart::Dart;
use crate::error::AnalysisError;
use crate::quad::integrate_uniform;

/// `(1/T) ∫_0^T |φ(t·1)|² dt`.
pub fn cesaro_energy(dart: &Dart, t: f64) -> Result<f64, AnalysisError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(AnalysisError::InvalidParameter("T must be positive"));
    }
    dart.validate()?;
    let pieces = (ceil(t) as usize).clamp(8, 1 << 16);
    let r = integrate_uniform(|s| cf_diag(dart, s).norm_sqr(), 0.0, t, pieces, 1e-10 * t, 4_000_000);
    Ok(r.value / t)
}
