//! Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below `|x| = 12`, Hankel asymptotic expansion above. Both
//! branches are accurate to better than `1e-10` absolute on `|x| <= 50`.

use core::f64::consts::PI;

use libm::{cos, fabs, sin, sqrt};

use crate::error::AnalysisError;

const SERIES_LIMIT: f64 = 12.0;

/// `J_order(x)` for `order ∈ {0, 1}` and `|x| <= 50`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, AnalysisError> {
    if !(fabs(x) <= 50.0) {
        return Err(AnalysisError::OutOfRange(x));
    }
    match order {
        0 => Ok(j0(x)),
        1 => Ok(j1(x)),
        other => Err(AnalysisError::BadOrder(other)),
    }
}

/// `J_0` without the range check.
pub fn j0(x: f64) -> f64 {
    let ax = fabs(x);
    if ax < SERIES_LIMIT {
        series(0, ax)
    } else {
        hankel(0, ax)
    }
}

/// `J_1` without the range check.
pub fn j1(x: f64) -> f64 {
    let ax = fabs(x);
    let v = if ax < SERIES_LIMIT {
        series(1, ax)
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `2 J_1(x) / x`, the characteristic function of the semicircle law.
pub fn jinc(x: f64) -> f64 {
    if fabs(x) < 1e-6 {
        1.0 - x * x / 8.0
    } else {
        2.0 * j1(x) / x
    }
}

fn series(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut term = if n == 0 { 1.0 } else { h };
    let mut sum = term;
    let nf = n as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= -h2 / (kf * (kf + nf));
        sum += term;
        if fabs(term) < 1e-18 {
            break;
        }
    }
    sum
}

fn hankel(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let inv8x = 1.0 / (8.0 * x);
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) * inv8x / k as f64;
        }
        let mag = fabs(a);
        if mag > prev {
            break;
        }
        prev = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * n as f64 + 0.25) * PI;
    sqrt(2.0 / (PI * x)) * (p * cos(chi) - q * sin(chi))
}

/// First positive zero of `f`, located by scanning brackets of width `step`
/// and bisecting the first sign change down to `1e-13`.
pub fn first_positive_zero<F: Fn(f64) -> f64>(f: F, step: f64, limit: f64) -> Result<f64, AnalysisError> {
    let mut lo = step;
    let mut flo = f(lo);
    while lo < limit {
        let hi = lo + step;
        let fhi = f(hi);
        if flo == 0.0 {
            return Ok(lo);
        }
        if flo * fhi <= 0.0 {
            let (mut a, mut b, mut fa) = (lo, hi, flo);
            while b - a > 1e-13 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            return Ok(0.5 * (a + b));
        }
        lo = hi;
        flo = fhi;
    }
    Err(AnalysisError::NoZero(limit))
}
