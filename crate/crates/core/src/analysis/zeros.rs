//! Complex zeros of the characteristic function of a finite atomic dart.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{fabs, log};
use num_complex::Complex64;

use crate::dart::Dart;
use crate::error::{AnalysisError, DartError};

/// A zero `z = ω - ic` of `z ↦ Σ m_j e^{i z x_j}` with `ω > 0`.
///
/// Two atoms are solved in closed form; otherwise Newton's method runs from a
/// grid of starting points and the zero of smallest modulus wins.
pub fn complex_zero(dart: &Dart) -> Result<Complex64, AnalysisError> {
    if dart.dim() != 1 {
        return Err(DartError::WrongDimension { expected: 1 }.into());
    }
    let atoms = dart.atoms()?;
    if atoms.len() < 2 {
        return Err(DartError::NoComplexZero.into());
    }
    let xs: Vec<f64> = atoms.iter().map(|a| a.at.x).collect();
    let ms: Vec<f64> = atoms.iter().map(|a| a.mass).collect();
    if atoms.len() == 2 {
        // m1 e^{izx1} + m2 e^{izx2} = 0  ⇔  e^{izΔ} = -m1/m2.
        let delta = xs[1] - xs[0];
        let z = Complex64::new(PI / delta, -log(ms[0] / ms[1]) / delta);
        return Ok(z);
    }
    let phi = |z: Complex64| -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for (&x, &m) in xs.iter().zip(&ms) {
            let e = (i * z * x).exp() * m;
            v += e;
            dv += e * i * x;
        }
        (v, dv)
    };
    let spread = xs[xs.len() - 1] - xs[0];
    let min_gap = xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let min_mass = ms.iter().copied().fold(1.0, f64::min);
    let c_scale = log(1.0 / min_mass) / min_gap + 1.0;
    let mut best: Option<Complex64> = None;
    for k in 0..(4 * atoms.len()) {
        let re = PI * (k as f64 + 0.5) / spread;
        for l in -4..=4 {
            let mut z = Complex64::new(re, c_scale * l as f64 / 4.0);
            for _ in 0..100 {
                let (v, dv) = phi(z);
                if dv.norm() == 0.0 || !v.is_finite() {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            if !z.is_finite() || fabs(z.re) < 1e-9 {
                continue;
            }
            let (v, _) = phi(z);
            let scale: f64 = xs.iter().zip(&ms).map(|(&x, &m)| m * libm::exp(-z.im * x)).sum();
            if v.norm() > 1e-12 * scale.max(1.0) {
                continue;
            }
            let z = if z.re < 0.0 { -z.conj() } else { z };
            if best.is_none_or(|b| z.norm() < b.norm()) {
                best = Some(z);
            }
        }
    }
    best.ok_or(DartError::NoComplexZero.into())
}
