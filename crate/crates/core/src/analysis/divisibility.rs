//! Numerical divisibility test.
//!
//! `X` divides `dX` when `ψ(t) = φ(dt)/φ(t)` is itself a characteristic
//! function. On a symmetric grid we check `|ψ| <= 1`, multiply by a Fejér
//! (triangular) window, which keeps positive-definite functions positive
//! definite, and invert with an FFT. A reconstructed density that dips below
//! `-1e-6` of its peak refutes divisibility.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, fabs, sin};
use num_complex::Complex64;

use crate::dart::Dart;
use crate::error::AnalysisError;
use crate::geom::Point;

pub const DEFAULT_T_MAX: f64 = 64.0;
pub const DEFAULT_GRID: usize = 1 << 14;
/// Relative negativity tolerance on the reconstructed density.
pub const NEGATIVITY_TOL: f64 = 1e-6;
/// `|ψ|` above `1 + RATIO_TOL` certifies that `ψ` is not a characteristic function.
pub const RATIO_TOL: f64 = 1e-9;
/// Grid points where `|φ|` falls below this are cut off.
const UNDERFLOW: f64 = 1e-150;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivisibilityReport {
    pub valid: bool,
    pub min_density: f64,
    pub peak_density: f64,
    /// `max |ψ|` over the grid.
    pub max_ratio: f64,
    /// Half-width of the grid actually used.
    pub t_used: f64,
}

pub fn divisibility_check(dart: &Dart, d: f64, t_max: f64, grid_n: usize) -> Result<DivisibilityReport, AnalysisError> {
    if !(d > 1.0) || !d.is_finite() {
        return Err(AnalysisError::InvalidParameter("d must exceed 1"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(AnalysisError::InvalidParameter("t_max must be positive"));
    }
    if !grid_n.is_power_of_two() || grid_n < 16 {
        return Err(AnalysisError::InvalidParameter("grid size must be a power of two, at least 16"));
    }
    if dart.dim() != 1 {
        return Err(AnalysisError::Dart(crate::error::DartError::WrongDimension { expected: 1 }));
    }
    dart.validate()?;
    let phi = |t: f64| dart.cf(Point::scalar(t));

    // Shrink the grid to where φ is representable.
    let n = grid_n;
    let half = n / 2;
    let mut t_used = t_max;
    let step = t_max / half as f64;
    for k in 0..=half {
        let t = k as f64 * step;
        let a = phi(t).norm().min(phi(-t).norm());
        if a < UNDERFLOW {
            if phi(d * t).norm() == 0.0 && a == 0.0 && k < half / 8 {
                return Err(AnalysisError::Inconclusive("characteristic function vanishes on the grid"));
            }
            t_used = (k.max(1) - 1) as f64 * step;
            break;
        }
    }
    if t_used < t_max / 8.0 {
        return Err(AnalysisError::Inconclusive("characteristic function underflows near the origin"));
    }

    let dt = 2.0 * t_used / n as f64;
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    let mut max_ratio: f64 = 0.0;
    for k in 0..n {
        let t = (k as f64 - half as f64) * dt;
        let den = phi(t);
        let num = phi(d * t);
        if den.norm() == 0.0 {
            if num.norm() == 0.0 {
                return Err(AnalysisError::Inconclusive("0/0 in the characteristic-function ratio"));
            }
            max_ratio = f64::INFINITY;
            buf.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let psi = num / den;
        max_ratio = max_ratio.max(psi.norm());
        let w = 1.0 - fabs(t) / t_used;
        buf.push(psi * w);
    }
    if !(max_ratio <= 1.0 + RATIO_TOL) {
        return Ok(DivisibilityReport {
            valid: false,
            min_density: f64::NEG_INFINITY,
            peak_density: f64::NAN,
            max_ratio,
            t_used,
        });
    }

    // density(x_j) = dt/(2π) Σ_k ψ_k w_k e^{-i t_k x_j}, x_j = 2πj/(n dt);
    // the offset t_k = (k - n/2) dt contributes (-1)^j.
    fft(&mut buf, false);
    let scale = dt / (2.0 * PI);
    let mut min_density = f64::INFINITY;
    let mut peak: f64 = 0.0;
    for (j, v) in buf.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let f = sign * v.re * scale;
        min_density = min_density.min(f);
        peak = peak.max(f);
    }
    let valid = min_density >= -NEGATIVITY_TOL * peak;
    Ok(DivisibilityReport { valid, min_density, peak_density: peak, max_ratio, t_used })
}

/// In-place iterative radix-2 FFT. Forward uses `e^{-2πi jk/n}`; `inverse`
/// flips the sign without normalizing.
pub fn fft(a: &mut [Complex64], inverse: bool) {
    let n = a.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * 2.0 * PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = Complex64::new(cos(ang * k as f64), sin(ang * k as f64));
                let u = a[start + k];
                let v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(d: &Dart, s: f64) -> DivisibilityReport {
        divisibility_check(d, s, DEFAULT_T_MAX, DEFAULT_GRID).unwrap()
    }

    #[test]
    fn fft_matches_naive_dft() {
        let n = 16;
        let x: Vec<Complex64> = (0..n).map(|k| Complex64::new(libm::sin(k as f64), (k * k) as f64 * 0.01)).collect();
        let mut y = x.clone();
        fft(&mut y, false);
        for (j, yj) in y.iter().enumerate() {
            let want: Complex64 = (0..n)
                .map(|k| x[k] * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                .sum();
            assert!((yj - want).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_divides_its_dilations() {
        let n = Dart::normal(0.0, 1.0).unwrap();
        for s in [1.1, 1.5, 2.0, 3.0] {
            assert!(check(&n, s).valid, "d={s}");
        }
    }

    #[test]
    fn cauchy_divides_its_dilations() {
        let c = Dart::cauchy(0.0, 1.0).unwrap();
        for s in [1.1, 1.5, 2.0, 3.0] {
            assert!(check(&c, s).valid, "d={s}");
        }
    }

    #[test]
    fn uniform_halving_and_failure() {
        let u = Dart::uniform(0.0, 1.0).unwrap();
        assert!(check(&u, 2.0).valid);
        let bad = check(&u, 1.5);
        assert!(!bad.valid);
    }

    #[test]
    fn gaussian_ratio_density_peak() {
        // ψ is the cf of N(0, 3), whose peak is 1/sqrt(6π); the window removes
        // (1/(2πT)) ∫|t| e^{-3t²/2} dt = (2/3)/(2πT).
        let r = check(&Dart::normal(0.0, 1.0).unwrap(), 2.0);
        let want = 1.0 / libm::sqrt(6.0 * PI) - (2.0 / 3.0) / (2.0 * PI * r.t_used);
        assert!((r.peak_density - want).abs() < 1e-4, "{} vs {want}", r.peak_density);
    }

    #[test]
    fn argument_checks() {
        let u = Dart::uniform(0.0, 1.0).unwrap();
        assert!(divisibility_check(&u, 1.0, 64.0, 1024).is_err());
        assert!(divisibility_check(&u, 2.0, 64.0, 1000).is_err());
        assert!(divisibility_check(&Dart::UniformDisc, 2.0, 64.0, 1024).is_err());
    }
}
