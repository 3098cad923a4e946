//! Small numeric helpers shared across the crate.

use core::f64::consts::{FRAC_PI_2, SQRT_2};

use libm::{cos, erfc, fabs, sin};
use num_complex::Complex64;

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// slice length, so results are reproducible bit for bit.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal upper tail `P(Z > x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

/// `sin(u)/u` with the removable singularity filled in.
pub fn sinc(u: f64) -> f64 {
    if fabs(u) < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        sin(u) / u
    }
}

/// `(1 - cos x) / x^2`, stable near zero.
pub fn one_minus_cos_over_sq(x: f64) -> f64 {
    let h = 0.5 * x;
    if fabs(h) < 1e-4 {
        0.5 * (1.0 - h * h / 3.0)
    } else {
        let s = sin(h) / h;
        0.5 * s * s
    }
}

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt`.
///
/// Power series below 2, complex continued fraction for `E1(ix)` above.
pub fn sine_integral(x: f64) -> f64 {
    let ax = fabs(x);
    if ax == 0.0 {
        return 0.0;
    }
    let si = if ax < 2.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut k = 1u32;
        loop {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let add = term / (2.0 * kf + 1.0);
            sum += add;
            if fabs(add) < 1e-17 * fabs(sum) || k > 60 {
                break;
            }
            k += 1;
        }
        sum
    } else {
        // Modified Lentz on the continued fraction of E1(ix).
        const TINY: f64 = 1e-300;
        let mut b = Complex64::new(1.0, ax);
        let mut c = Complex64::new(1.0 / TINY, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 2..200 {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += Complex64::new(2.0, 0.0);
            d = Complex64::new(1.0, 0.0) / (d * a + b);
            c = b + Complex64::new(a, 0.0) / c;
            let del = c * d;
            h *= del;
            if fabs(del.re - 1.0) + fabs(del.im) < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(cos(ax), -sin(ax));
        FRAC_PI_2 + h.im
    };
    if x < 0.0 {
        -si
    } else {
        si
    }
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`, stopping
/// at width `tol` or after 200 steps.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        iters += 1;
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
