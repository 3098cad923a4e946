//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use libm::{fabs, pow};

use crate::math::pairwise_sum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Evaluations per panel.
pub const PANEL_EVALS: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
    pub n_evals: usize,
}

/// One GK15 panel on `[a, b]`, returning the Kronrod estimate and the QUADPACK error.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        rk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            rg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * rk;
    let mut asc = WGK[7] * fabs(fc - mean);
    for j in 0..7 {
        asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }
    let value = rk * h;
    let asc = asc * fabs(h);
    let mut err = fabs((rk - rg) * h);
    if asc != 0.0 && err != 0.0 {
        err = asc * pow(200.0 * err / asc, 1.5).min(1.0);
    }
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err).then(o.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over `[points[0], points[last]]`, never straddling an
/// interior point. Panels with the largest error are bisected until the total
/// error is at most `tol` or another bisection would exceed `max_evals`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], tol: f64, max_evals: usize) -> QuadResult {
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Panel> = Vec::new();
    let mut n = 0usize;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (value, err) = gk15(&mut f, a, b);
        n += PANEL_EVALS;
        heap.push(Panel { a, b, value, err });
    }
    let total = |heap: &BinaryHeap<Panel>, done: &[Panel]| -> f64 {
        heap.iter().map(|p| p.err).sum::<f64>() + done.iter().map(|p| p.err).sum::<f64>()
    };
    let mut err_total = total(&heap, &done);
    let mut since_resum = 0;
    while err_total > tol && n + 2 * PANEL_EVALS <= max_evals {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) || (p.b - p.a) <= 1e-13 * (fabs(p.a) + fabs(p.b)) {
            done.push(p);
            continue;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        n += 2 * PANEL_EVALS;
        err_total += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2 });
        since_resum += 1;
        if since_resum == 64 {
            err_total = total(&heap, &done);
            since_resum = 0;
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(done);
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    let errs: Vec<f64> = panels.iter().map(|p| p.err).collect();
    QuadResult { value: pairwise_sum(&values), err: pairwise_sum(&errs), n_evals: n }
}

/// Convenience wrapper splitting `[a, b]` into `pieces` equal panels first.
pub fn integrate_uniform<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize, tol: f64, max_evals: usize) -> QuadResult {
    let pieces = pieces.max(1);
    let pts: Vec<f64> = (0..=pieces).map(|i| a + (b - a) * i as f64 / pieces as f64).collect();
    integrate(f, &pts, tol, max_evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{exp, sin, sqrt};

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x * x - 2.0 * x, &[0.0, 2.0], 1e-12, 10_000);
        assert!((r.value - 0.0).abs() < 1e-13);
        assert_eq!(r.n_evals, 15);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate_uniform(|x| exp(-x * x), -10.0, 10.0, 4, 1e-12, 100_000);
        assert!((r.value - sqrt(core::f64::consts::PI)).abs() < 1e-11);
        assert!(r.err <= 1e-12);
    }

    #[test]
    fn breakpoints_handle_jumps() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let r = integrate(step, &[0.0, 0.3, 1.0], 1e-12, 1000);
        assert!((r.value - 0.3).abs() < 1e-15);
        let r = integrate(step, &[0.0, 1.0], 1e-9, 100_000);
        assert!((r.value - 0.3).abs() < 1e-8);
    }

    #[test]
    fn oscillatory() {
        let r = integrate_uniform(sin, 0.0, 100.0, 32, 1e-10, 100_000);
        assert!((r.value - (1.0 - libm::cos(100.0))).abs() < 1e-10);
    }

    #[test]
    fn budget_respected() {
        let r = integrate(|x| if x < 0.123_456 { 1.0 } else { 0.0 }, &[0.0, 1.0], 1e-15, 200);
        assert!(r.n_evals <= 200);
        assert!(r.err > 0.0);
    }
}
