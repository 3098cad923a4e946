//! Characteristic-function analytics.
//!
//! By the cosine closed form, the g-curve of a dart against `cos(Σ x_j)` is
//! `|φ(d·1)|`, so most questions about that payoff reduce to questions about
//! the modulus of the characteristic function.

pub mod bessel;
pub mod cesaro;
pub mod criterion;
pub mod divisibility;
pub mod scan;
pub mod zeros;

pub use bessel::{bessel_j, first_positive_zero, j0, j1, jinc};
pub use cesaro::cesaro_energy;
pub use criterion::{bern_normal_criterion, phase_boundary_sigma, sufficient_sigma_sq, BernNormalParams, CriterionReport};
pub use divisibility::{divisibility_check, DivisibilityReport};
pub use scan::{cf_scan, ScanReport};
pub use zeros::complex_zero;

use crate::dart::Dart;
use crate::geom::Point;
use num_complex::Complex64;

/// `φ(t·1)`: the characteristic function along the all-ones direction.
pub(crate) fn cf_diag(dart: &Dart, t: f64) -> Complex64 {
    if dart.dim() == 2 {
        dart.cf(Point::new(t, t))
    } else {
        dart.cf(Point::scalar(t))
    }
}
