//! Best aim and g-curves.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use libm::fabs;
use rand::Rng;

use crate::dart::Dart;
use crate::error::OptError;
use crate::expectation::{expect, expect_cos_weighted, feature_points, Engine, EvalResult, EvalSpec};
use crate::geom::Point;
use crate::payoff::{Focus, Payoff};
use crate::rng::stream;

/// Coarse grid points per axis.
pub const GRID_PER_AXIS: usize = 64;
/// Pattern search stops once its step falls below this fraction of the box width.
pub const REFINE_STOP: f64 = 1e-3;
/// Fixed part of the increase-detection margin.
pub const DETECT_MARGIN: f64 = 1e-9;
/// Random probes used for plateau detection.
pub const FLAT_PROBES: usize = 5;
/// Aim moves longer than this (in mm) count as jumps in a dartboard sweep.
pub const AIM_JUMP_MM: f64 = 20.0;

const SCREEN_BUDGET: usize = 4096;
const REFINE_BUDGET_2D: usize = 1 << 14;
const MAX_KNOT_CANDIDATES: usize = 2000;
const MAX_PATTERN_STEPS: usize = 400;
const STARTS_1D: usize = 6;
const STARTS_2D: usize = 12;
const UNIT_STANDARD_BOX: f64 = 1e12;

/// Axis-aligned search region. One-dimensional searches use `x` only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBox {
    pub lo: Point,
    pub hi: Point,
}

impl SearchBox {
    pub fn interval(lo: f64, hi: f64) -> Self {
        SearchBox { lo: Point::scalar(lo), hi: Point::scalar(hi) }
    }

    pub fn square(center: Point, half: f64) -> Self {
        SearchBox { lo: center - Point::new(half, half), hi: center + Point::new(half, half) }
    }

    fn validate(&self, dim: usize) -> Result<(), OptError> {
        let (lo, hi) = if dim == 1 { (Point::scalar(self.lo.x), Point::scalar(self.hi.x)) } else { (self.lo, self.hi) };
        if !lo.is_finite() || !hi.is_finite() || fabs(lo.x) > UNIT_STANDARD_BOX || fabs(hi.x) > UNIT_STANDARD_BOX {
            return Err(OptError::UnboundedBox);
        }
        if lo.x > hi.x || lo.y > hi.y {
            return Err(OptError::EmptyBox);
        }
        Ok(())
    }

    fn width(&self, dim: usize) -> f64 {
        if dim == 1 {
            self.hi.x - self.lo.x
        } else {
            (self.hi.x - self.lo.x).max(self.hi.y - self.lo.y)
        }
    }

    fn clamp(&self, p: Point, dim: usize) -> Point {
        let x = p.x.clamp(self.lo.x, self.hi.x);
        if dim == 1 {
            Point::scalar(x)
        } else {
            Point::new(x, p.y.clamp(self.lo.y, self.hi.y))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AimStatus {
    Converged,
    /// The expectation engine ran out of budget before reaching its tolerance.
    Budget,
    /// Random aims do as well as the best one.
    Flat,
}

impl AimStatus {
    pub fn name(self) -> &'static str {
        match self {
            AimStatus::Converged => "converged",
            AimStatus::Budget => "budget",
            AimStatus::Flat => "flat",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AimResult {
    pub aim: Point,
    pub g: f64,
    pub err_est: f64,
    pub status: AimStatus,
    pub n_evals: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Increase {
    pub d_from: f64,
    pub d_to: f64,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GCurve {
    pub d_grid: Vec<f64>,
    pub points: Vec<AimResult>,
    pub increases: Vec<Increase>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DartboardSweep {
    pub curve: GCurve,
    /// Sector label under each best aim.
    pub sectors: Vec<u8>,
    /// Consecutive radii between which the best aim moved more than [`AIM_JUMP_MM`].
    pub aim_jumps: Vec<(f64, f64)>,
}

/// A box that contains every useful aim for this dart, payoff and distance.
pub fn default_box(dart: &Dart, payoff: &Payoff, d: f64) -> SearchBox {
    let (c, r) = dart.spread();
    let reach = d * r;
    if dart.dim() == 2 {
        return match payoff.focus_2d() {
            Some((fc, fr)) => SearchBox::square(fc - c * d, fr + reach),
            None => SearchBox::square(-(c * d), reach + 1.0),
        };
    }
    let shift = c.x * d;
    match payoff.focus() {
        Focus::Bounded { lo, hi, .. } => SearchBox::interval(lo - reach - shift, hi + reach - shift),
        Focus::Periodic { period } => SearchBox::interval(-period - shift, period - shift),
        Focus::Anywhere => SearchBox::interval(-reach - 1.0 - shift, reach + 1.0 - shift),
    }
}

/// `sup_a E f(a + dX)` over `search_box`.
pub fn best_aim(dart: &Dart, payoff: &Payoff, d: f64, spec: &EvalSpec, search_box: &SearchBox) -> Result<AimResult, OptError> {
    let dim = dart.dim();
    search_box.validate(dim)?;
    spec.validate()?;
    dart.validate().map_err(crate::error::ExpectError::from)?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(crate::error::ExpectError::BadDistance.into());
    }
    if let Payoff::Cosine { weights } = payoff {
        if spec.engine == Engine::Auto {
            return cosine_closed(dart, weights, d);
        }
    }

    let mut n_evals = 0usize;
    let mut eval = |a: Point, s: &EvalSpec| -> Result<EvalResult, OptError> {
        let r = expect(dart, payoff, a, d, s)?;
        n_evals += r.n_evals;
        Ok(r)
    };

    // Screening.
    let screen = EvalSpec { max_evals: spec.max_evals.clamp(1000, SCREEN_BUDGET), ..*spec };
    let mut cands = grid_candidates(search_box, dim);
    if dim == 1 {
        knot_candidates(dart, payoff, d, search_box, &mut cands);
    } else if let Some((fc, _)) = payoff.focus_2d() {
        // Concentric aim: dart and payoff share a center.
        cands.push(search_box.clamp(fc - dart.spread().0 * d, dim));
    }
    let mut scored = Vec::with_capacity(cands.len());
    for a in cands {
        let r = eval(a, &screen)?;
        scored.push((r.value, a));
    }
    scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.x.total_cmp(&y.1.x)).then(x.1.y.total_cmp(&y.1.y)));

    // Refinement of a few well-separated leaders.
    let width = search_box.width(dim);
    let spacing = width / (GRID_PER_AXIS - 1) as f64;
    let k = if dim == 2 { STARTS_2D } else { STARTS_1D };
    let mut starts: Vec<Point> = Vec::with_capacity(k);
    for &(_, a) in &scored {
        if starts.len() == k {
            break;
        }
        if starts.iter().all(|s| s.dist(a) > 1.5 * spacing) {
            starts.push(a);
        }
    }
    let refine = if dim == 2 { EvalSpec { max_evals: spec.max_evals.clamp(1000, REFINE_BUDGET_2D), ..*spec } } else { *spec };
    let mut best: Option<(f64, Point)> = None;
    for s in starts {
        let (v, a) = pattern_search(&mut eval, s, spacing, width * REFINE_STOP, search_box, dim, &refine)?;
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, a));
        }
    }
    let (_, aim) = best.ok_or(OptError::EmptyBox)?;
    let fin = eval(aim, spec)?;

    // Plateau check.
    let mut rng = stream(spec.seed, 0x5EED);
    let mut flat = true;
    for _ in 0..FLAT_PROBES {
        let p = Point::new(
            rng.random_range(search_box.lo.x..=search_box.hi.x),
            if dim == 2 { rng.random_range(search_box.lo.y..=search_box.hi.y) } else { 0.0 },
        );
        let r = eval(p, spec)?;
        if fabs(r.value - fin.value) > fin.err_est + r.err_est + 1e-12 {
            flat = false;
            break;
        }
    }
    let status = if !fin.within_budget {
        AimStatus::Budget
    } else if flat {
        AimStatus::Flat
    } else {
        AimStatus::Converged
    };
    Ok(AimResult { aim, g: fin.value, err_est: fin.err_est, status, n_evals })
}

fn cosine_closed(dart: &Dart, weights: &[f64], d: f64) -> Result<AimResult, OptError> {
    let dim = dart.dim();
    let w = match (weights, dim) {
        ([], 1) => Point::scalar(1.0),
        ([], _) => Point::new(1.0, 1.0),
        ([a], 1) => Point::scalar(*a),
        ([a, b], 2) => Point::new(*a, *b),
        _ => return Err(crate::error::ExpectError::DimensionMismatch { dart: dim, payoff: weights.len() }.into()),
    };
    let phi = dart.cf(w * d);
    let m = phi.norm();
    let ww = w.dot(w);
    let aim = if m == 0.0 || ww == 0.0 { Point::ZERO } else { w * (-phi.arg() / ww) };
    let g = expect_cos_weighted(dart, w, aim, d)?;
    let status = if m <= 1e-12 { AimStatus::Flat } else { AimStatus::Converged };
    Ok(AimResult { aim, g: g.max(m - 1e-15).min(m), err_est: 1e-15, status, n_evals: 1 })
}

fn grid_candidates(b: &SearchBox, dim: usize) -> Vec<Point> {
    let n = GRID_PER_AXIS;
    let at = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(if dim == 1 { n } else { n * n });
    if dim == 1 {
        for i in 0..n {
            out.push(Point::scalar(at(b.lo.x, b.hi.x, i)));
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                out.push(Point::new(at(b.lo.x, b.hi.x, i), at(b.lo.y, b.hi.y, j)));
            }
        }
    }
    out
}

/// Aims that put a feature of the scaled dart (an atom or an endpoint) on a
/// knot of the payoff.
fn knot_candidates(dart: &Dart, payoff: &Payoff, d: f64, b: &SearchBox, out: &mut Vec<Point>) {
    let mut feats: Vec<f64> = feature_points(dart).iter().map(|p| p.x * d).collect();
    feats.sort_by(|a, b| a.total_cmp(b));
    feats.dedup_by(|a, b| fabs(*a - *b) < 1e-12);
    if feats.is_empty() {
        return;
    }
    let (fmin, fmax) = (feats[0], feats[feats.len() - 1]);
    let mut knots = Vec::new();
    if payoff.knots(b.lo.x + fmin, b.hi.x + fmax, 4 * MAX_KNOT_CANDIDATES, &mut knots).is_err() {
        return;
    }
    let mut cands: Vec<f64> = Vec::new();
    for k in &knots {
        for f in &feats {
            let a = k - f;
            if a >= b.lo.x && a <= b.hi.x {
                cands.push(a);
            }
        }
    }
    cands.sort_by(|a, b| a.total_cmp(b));
    cands.dedup_by(|a, b| fabs(*a - *b) < 1e-12);
    let stride = cands.len().div_ceil(MAX_KNOT_CANDIDATES).max(1);
    out.extend(cands.into_iter().step_by(stride).map(Point::scalar));
}

/// Compass search: probe `±step` along each axis, move to the best strict
/// improvement, halve the step when none exists.
fn pattern_search<E>(eval: &mut E, start: Point, step0: f64, min_step: f64, b: &SearchBox, dim: usize, spec: &EvalSpec) -> Result<(f64, Point), OptError>
where
    E: FnMut(Point, &EvalSpec) -> Result<EvalResult, OptError>,
{
    let mut x = start;
    let mut fx = eval(x, spec)?.value;
    let mut step = step0;
    let dirs: &[Point] = if dim == 1 {
        &[Point::new(1.0, 0.0), Point::new(-1.0, 0.0)]
    } else {
        &[
            Point::new(1.0, 0.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, -1.0),
            Point::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Point::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Point::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
            Point::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        ]
    };
    let mut iters = 0;
    while step >= min_step && iters < MAX_PATTERN_STEPS {
        iters += 1;
        let mut best = (fx, x);
        for &dir in dirs {
            let y = b.clamp(x + dir * step, dim);
            if y == x {
                continue;
            }
            let fy = eval(y, spec)?.value;
            if fy > best.0 {
                best = (fy, y);
            }
        }
        if best.1 == x {
            step *= 0.5;
        } else {
            (fx, x) = best;
        }
    }
    Ok((fx, x))
}

/// Consecutive grid points where the curve rises by more than the combined
/// error plus `margin`.
pub fn detect_increases(d_grid: &[f64], points: &[AimResult], margin: f64) -> Vec<Increase> {
    let mut out = Vec::new();
    for i in 1..points.len().min(d_grid.len()) {
        let (a, b) = (&points[i - 1], &points[i]);
        let eps = a.err_est + b.err_est + margin;
        if b.g > a.g + eps {
            out.push(Increase { d_from: d_grid[i - 1], d_to: d_grid[i], magnitude: b.g - a.g });
        }
    }
    out
}

fn check_grid(d_grid: &[f64]) -> Result<(), OptError> {
    if d_grid.is_empty() || d_grid.iter().any(|d| !(*d > 0.0) || !d.is_finite()) || d_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OptError::BadGrid);
    }
    Ok(())
}

/// Best aims over a grid of distances, searching [`default_box`] at each.
pub fn g_curve(dart: &Dart, payoff: &Payoff, d_grid: &[f64], spec: &EvalSpec) -> Result<GCurve, OptError> {
    g_curve_with(dart, payoff, d_grid, spec, |d| default_box(dart, payoff, d))
}

/// [`g_curve`] with a caller-chosen box per distance.
pub fn g_curve_with<B>(dart: &Dart, payoff: &Payoff, d_grid: &[f64], spec: &EvalSpec, mut search_box: B) -> Result<GCurve, OptError>
where
    B: FnMut(f64) -> SearchBox,
{
    check_grid(d_grid)?;
    let mut points = Vec::with_capacity(d_grid.len());
    for &d in d_grid {
        points.push(best_aim(dart, payoff, d, spec, &search_box(d))?);
    }
    let increases = detect_increases(d_grid, &points, DETECT_MARGIN + spec.abs_tol);
    Ok(GCurve { d_grid: d_grid.to_vec(), points, increases })
}

/// Uniform disc of radius `r` (mm) thrown at the standard board, for each `r`.
pub fn dartboard_sweep(r_grid: &[f64], spec: &EvalSpec) -> Result<DartboardSweep, OptError> {
    if r_grid.iter().any(|r| !(*r > 0.0 && *r <= 400.0)) {
        return Err(OptError::BadGrid);
    }
    let board = Payoff::dartboard();
    let geom = match &board {
        Payoff::Dartboard(g) => g.clone(),
        _ => unreachable!(),
    };
    let curve = g_curve_with(&Dart::UniformDisc, &board, r_grid, spec, |r| SearchBox::square(Point::ZERO, geom.double_out + r))?;
    let sectors = curve.points.iter().map(|p| geom.sector_label(p.aim)).collect();
    let aim_jumps = curve
        .points
        .windows(2)
        .zip(curve.d_grid.windows(2))
        .filter(|(p, _)| p[0].aim.dist(p[1].aim) > AIM_JUMP_MM)
        .map(|(_, r)| (r[0], r[1]))
        .collect();
    Ok(DartboardSweep { curve, sectors, aim_jumps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn square_wave_counterexample() {
        let u = Dart::uniform(0.0, 2.0).unwrap();
        let spec = EvalSpec::default();
        let c = g_curve(&u, &Payoff::SquareWave, &[1.0, 1.5], &spec).unwrap();
        assert!((c.points[0].g - 0.5).abs() < 1e-6);
        assert!((c.points[1].g - 2.0 / 3.0).abs() < 1e-6);
        assert_eq!(c.points[0].status, AimStatus::Flat);
        assert_eq!(c.increases.len(), 1);
        assert!((c.increases[0].magnitude - 1.0 / 6.0).abs() < 1e-5);
    }

    #[test]
    fn cosine_closed_form_and_flat() {
        let b = Dart::bern(0.5).unwrap();
        let r = best_aim(&b, &Payoff::cosine(), PI, &EvalSpec::default(), &SearchBox::interval(-1.0, 1.0)).unwrap();
        assert!(r.g.abs() < 1e-12);
        assert_eq!(r.status, AimStatus::Flat);
        let n = Dart::normal(0.0, 1.0).unwrap();
        let r = best_aim(&n, &Payoff::cosine(), 1.0, &EvalSpec::default(), &SearchBox::interval(-1.0, 1.0)).unwrap();
        assert!((r.g - libm::exp(-0.5)).abs() < 1e-15);
        assert_eq!(r.status, AimStatus::Converged);
    }

    #[test]
    fn box_errors() {
        let n = Dart::normal(0.0, 1.0).unwrap();
        let s = EvalSpec::default();
        assert_eq!(best_aim(&n, &Payoff::SquareWave, 1.0, &s, &SearchBox::interval(1.0, 0.0)), Err(OptError::EmptyBox));
        assert_eq!(best_aim(&n, &Payoff::SquareWave, 1.0, &s, &SearchBox::interval(0.0, f64::INFINITY)), Err(OptError::UnboundedBox));
        assert_eq!(g_curve(&n, &Payoff::SquareWave, &[1.0, 1.0], &s), Err(OptError::BadGrid));
        assert_eq!(g_curve(&n, &Payoff::SquareWave, &[], &s), Err(OptError::BadGrid));
    }

    #[test]
    fn increases_use_margin() {
        let mk = |g: f64| AimResult { aim: Point::ZERO, g, err_est: 0.01, status: AimStatus::Converged, n_evals: 0 };
        let pts = vec![mk(1.0), mk(1.015), mk(1.2)];
        let inc = detect_increases(&[1.0, 2.0, 3.0], &pts, 1e-9);
        assert_eq!(inc.len(), 1);
        assert_eq!((inc[0].d_from, inc[0].d_to), (2.0, 3.0));
    }

    #[test]
    fn default_box_covers_support() {
        let u = Dart::uniform(0.0, 2.0).unwrap();
        let b = default_box(&u, &Payoff::kdelta(0.1, 0.5).unwrap(), 3.0);
        assert!(b.lo.x <= -1.0 - 6.0 && b.hi.x >= 1.0);
    }
}
