//! Expected payoff `E f(a + dX)` with an error estimate.
//!
//! The dart is first expanded into a weighted list of terms. Each term is a
//! fixed shift plus a (possibly empty) sum of scaled continuous base darts:
//!
//! * no continuous part: an atom, evaluated exactly;
//! * one one-dimensional part: adaptive Gauss-Kronrod in a chart coordinate
//!   that makes the density smooth and the domain bounded, split at the
//!   payoff's knots;
//! * one disc: equal-area polar midpoint grid, refined by doubling;
//! * two one-dimensional parts: nested quadrature;
//! * anything else: Monte Carlo with a three-sigma error.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, TAU};

use libm::{acos, asin, atan, cos, exp, fabs, sin, sqrt, tan};
use num_complex::Complex64;

use crate::dart::Dart;
use crate::error::ExpectError;
use crate::geom::Point;
use crate::math::{normal_cdf, one_minus_cos_over_sq, pairwise_sum, sine_integral};
use crate::payoff::{Focus, Payoff};
use crate::quad::{integrate, QuadResult, PANEL_EVALS};
use crate::rng::{stream, StreamRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Auto,
    Exact,
    Quad,
    MonteCarlo,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::Exact => "exact",
            Engine::Quad => "quad",
            Engine::MonteCarlo => "mc",
        }
    }

    pub fn from_name(s: &str) -> Option<Engine> {
        Some(match s {
            "auto" => Engine::Auto,
            "exact" => Engine::Exact,
            "quad" => Engine::Quad,
            "mc" => Engine::MonteCarlo,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalSpec {
    pub engine: Engine,
    pub abs_tol: f64,
    pub seed: u64,
    pub max_evals: usize,
}

impl Default for EvalSpec {
    fn default() -> Self {
        EvalSpec { engine: Engine::Auto, abs_tol: 1e-6, seed: 0, max_evals: 1 << 18 }
    }
}

impl EvalSpec {
    pub fn validate(&self) -> Result<(), ExpectError> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(ExpectError::BadSpec("abs_tol must be positive"));
        }
        if self.max_evals < 1000 {
            return Err(ExpectError::BadSpec("max_evals must be at least 1000"));
        }
        Ok(())
    }

    pub fn with_tol(self, abs_tol: f64) -> Self {
        EvalSpec { abs_tol, ..self }
    }

    pub fn with_budget(self, max_evals: usize) -> Self {
        EvalSpec { max_evals, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub err_est: f64,
    pub n_evals: usize,
    pub engine_used: Engine,
    /// False when the budget ran out before `err_est <= abs_tol`.
    pub within_budget: bool,
}

/// One summand of the expanded dart: `weight` times the law of
/// `shift + Σ scale_j Y_j`.
#[derive(Clone, Debug)]
pub(crate) struct Term<'a> {
    pub weight: f64,
    pub shift: Point,
    pub parts: Vec<(f64, &'a Dart)>,
}

const TERM_CAP: usize = 1 << 16;

fn is_base(d: &Dart) -> bool {
    !matches!(
        d,
        Dart::Atomic { .. } | Dart::GridUniform { .. } | Dart::Mixture(_) | Dart::IndepSum(_) | Dart::Affine { .. }
    )
}

/// Expands `scale · dart` into terms, or `None` if there would be too many.
pub(crate) fn expand(dart: &Dart, scale: f64) -> Option<Vec<Term<'_>>> {
    let mut out = Vec::new();
    match dart {
        Dart::Atomic { .. } | Dart::GridUniform { .. } => {
            for a in dart.atoms().ok()? {
                out.push(Term { weight: a.mass, shift: a.at * scale, parts: Vec::new() });
            }
        }
        Dart::Mixture(parts) => {
            for (w, d) in parts {
                for mut t in expand(d, scale)? {
                    t.weight *= w;
                    out.push(t);
                }
                if out.len() > TERM_CAP {
                    return None;
                }
            }
        }
        Dart::IndepSum(parts) => {
            out.push(Term { weight: 1.0, shift: Point::ZERO, parts: Vec::new() });
            for (c, d) in parts {
                let member = expand(d, scale * c)?;
                if out.len().saturating_mul(member.len()) > TERM_CAP {
                    return None;
                }
                let mut next = Vec::with_capacity(out.len() * member.len());
                for t in &out {
                    for m in &member {
                        let mut parts = t.parts.clone();
                        parts.extend(m.parts.iter().copied());
                        next.push(Term { weight: t.weight * m.weight, shift: t.shift + m.shift, parts });
                    }
                }
                out = next;
            }
        }
        Dart::Affine { scale: a, shift, inner } => {
            for mut t in expand(inner, scale * a)? {
                t.shift = t.shift + *shift * scale;
                out.push(t);
            }
        }
        base => {
            debug_assert!(is_base(base));
            let parts = if scale == 0.0 { Vec::new() } else { alloc::vec![(scale, base)] };
            out.push(Term { weight: 1.0, shift: Point::ZERO, parts });
        }
    }
    Some(out)
}

/// Smooth bounded coordinate for a one-dimensional base dart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Chart {
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
    Cauchy { loc: f64, scale: f64 },
    SemiCircle,
    Arcsine,
    Tent { half_width: f64 },
}

/// Normal charts cover this many standard deviations each side.
const NORMAL_REACH: f64 = 12.0;
/// Largest half-width of the tent-density chart.
pub const TENT_MAX_HALF_WIDTH: f64 = 2e4;

impl Chart {
    /// `tail_tol` bounds the probability the chart may leave out.
    pub(crate) fn of(d: &Dart, tail_tol: f64) -> Option<Chart> {
        Some(match d {
            Dart::Uniform { lo, hi } => Chart::Uniform { lo: *lo, hi: *hi },
            Dart::Normal { mean, sd } => Chart::Normal { mean: *mean, sd: *sd },
            Dart::Cauchy { loc, scale } => Chart::Cauchy { loc: *loc, scale: *scale },
            Dart::SemiCircle => Chart::SemiCircle,
            Dart::Arcsine => Chart::Arcsine,
            Dart::TentCf => {
                // Tail mass beyond L is about 2/(πL).
                let l = (2.0 / (PI * tail_tol.max(1e-300))).clamp(50.0, TENT_MAX_HALF_WIDTH);
                Chart::Tent { half_width: l }
            }
            _ => return None,
        })
    }

    fn domain(&self) -> (f64, f64) {
        match *self {
            Chart::Uniform { lo, hi } => (lo, hi),
            Chart::Normal { mean, sd } => (mean - NORMAL_REACH * sd, mean + NORMAL_REACH * sd),
            Chart::Cauchy { .. } | Chart::Arcsine => (0.0, 1.0),
            Chart::SemiCircle => (-FRAC_PI_2, FRAC_PI_2),
            Chart::Tent { half_width } => (-half_width, half_width),
        }
    }

    fn compact(&self) -> bool {
        matches!(self, Chart::Uniform { .. } | Chart::SemiCircle | Chart::Arcsine)
    }

    fn y(&self, u: f64) -> f64 {
        match *self {
            Chart::Uniform { .. } | Chart::Normal { .. } | Chart::Tent { .. } => u,
            Chart::Cauchy { loc, scale } => loc + scale * tan(PI * (u - 0.5)),
            Chart::SemiCircle => sin(u),
            Chart::Arcsine => -cos(PI * u),
        }
    }

    /// Density of the law in the chart coordinate.
    fn w(&self, u: f64) -> f64 {
        match *self {
            Chart::Uniform { lo, hi } => 1.0 / (hi - lo),
            Chart::Normal { mean, sd } => {
                let z = (u - mean) / sd;
                exp(-0.5 * z * z) / (sd * sqrt(TAU))
            }
            Chart::Cauchy { .. } | Chart::Arcsine => 1.0,
            Chart::SemiCircle => {
                let c = cos(u);
                (2.0 / PI) * c * c
            }
            Chart::Tent { .. } => one_minus_cos_over_sq(u) / PI,
        }
    }

    /// Chart coordinate of `y`, clamped to the domain.
    fn u_of(&self, y: f64) -> f64 {
        let (u0, u1) = self.domain();
        let u = match *self {
            Chart::Uniform { .. } | Chart::Normal { .. } | Chart::Tent { .. } => y,
            Chart::Cauchy { .. } => self.cdf(y),
            Chart::SemiCircle => asin(y.clamp(-1.0, 1.0)),
            Chart::Arcsine => acos(-y.clamp(-1.0, 1.0)) / PI,
        };
        u.clamp(u0, u1)
    }

    /// `P(Y <= y)` for the full law.
    fn cdf(&self, y: f64) -> f64 {
        match *self {
            Chart::Uniform { lo, hi } => ((y - lo) / (hi - lo)).clamp(0.0, 1.0),
            Chart::Normal { mean, sd } => normal_cdf((y - mean) / sd),
            Chart::Cauchy { loc, scale } => {
                if y == f64::INFINITY {
                    1.0
                } else if y == f64::NEG_INFINITY {
                    0.0
                } else {
                    0.5 + atan((y - loc) / scale) / PI
                }
            }
            Chart::SemiCircle => {
                let y = y.clamp(-1.0, 1.0);
                0.5 + (asin(y) + y * sqrt(1.0 - y * y)) / PI
            }
            Chart::Arcsine => acos(-y.clamp(-1.0, 1.0)) / PI,
            Chart::Tent { .. } => tent_cdf(y),
        }
    }

    /// `P(Y <= y(u))` for `u` in the domain.
    fn cum(&self, u: f64) -> f64 {
        match *self {
            Chart::Cauchy { .. } | Chart::Arcsine => u,
            Chart::SemiCircle => 0.5 + (u + sin(u) * cos(u)) / PI,
            _ => self.cdf(self.y(u)),
        }
    }

    /// Chart coordinate with `cum(u) = q`, by bisection.
    fn quantile_u(&self, q: f64) -> f64 {
        let (mut lo, mut hi) = self.domain();
        if q <= self.cum(lo) {
            return lo;
        }
        if q >= self.cum(hi) {
            return hi;
        }
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if self.cum(m) < q {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    }
}

fn tent_cdf(y: f64) -> f64 {
    if !y.is_finite() {
        return if y > 0.0 { 1.0 } else { 0.0 };
    }
    // ∫_0^y (1 - cos t)/t² dt = Si(y) - (1 - cos y)/y
    0.5 + (sine_integral(y) - y * one_minus_cos_over_sq(y)) / PI
}

/// `E f(c + s·Y)` for a one-dimensional base dart `Y`.
pub(crate) fn quad_1d(chart: &Chart, c: f64, s: f64, f: &dyn Fn(f64) -> f64, payoff: &Payoff, tol: f64, budget: usize) -> QuadResult {
    let (inf, sup) = payoff.bounds();
    let span = (sup - inf).max(0.0);
    let mid = 0.5 * (inf + sup);
    let (u0, u1) = chart.domain();
    let mut value = 0.0;
    let mut err = 0.0;
    let (mut ua, mut ub);
    let bounded = match payoff.focus() {
        Focus::Bounded { lo, hi, outside: Some((vl, vr)) } => Some((lo, hi, vl, vr)),
        _ => None,
    };
    if let Some((lo, hi, vl, vr)) = bounded {
        let (ya, yb) = ((lo - c) / s, (hi - c) / s);
        let (m_left, m_right) = (chart.cdf(ya), 1.0 - chart.cdf(yb));
        value += vl * m_left + vr * m_right;
        let extra_left = (chart.cum(u0).min(chart.cdf(yb)) - chart.cdf(ya)).max(0.0);
        let extra_right = (chart.cdf(yb) - chart.cum(u1).max(chart.cdf(ya))).max(0.0);
        value += mid * (extra_left + extra_right);
        err += 0.5 * span * (extra_left + extra_right);
        ua = chart.u_of(ya);
        ub = chart.u_of(yb);
    } else {
        let eps = if chart.compact() || span == 0.0 { 0.0 } else { 0.25 * tol / span };
        ua = chart.quantile_u(eps);
        ub = chart.quantile_u(1.0 - eps);
    }
    let cap = (budget / (2 * PANEL_EVALS)).max(4);
    let mut knots = Vec::new();
    let mut eps_shrink = 0.25 * tol / span.max(1e-300);
    loop {
        knots.clear();
        let xa = c + s * chart.y(ua);
        let xb = c + s * chart.y(ub);
        if payoff.knots(xa.min(xb), xa.max(xb), cap, &mut knots).is_ok() || ub <= ua {
            break;
        }
        // Too many knots: give up more tail mass on each side.
        eps_shrink *= 2.0;
        let (qa, qb) = (chart.cum(ua), chart.cum(ub));
        let qm = 0.5 * (qa + qb);
        let na = chart.quantile_u((qa + eps_shrink).min(qm));
        let nb = chart.quantile_u((qb - eps_shrink).max(qm));
        if na == ua && nb == ub {
            eps_shrink *= 4.0;
            continue;
        }
        ua = na;
        ub = nb;
    }
    if bounded.is_none() {
        let outside = chart.cum(ua) + (1.0 - chart.cum(ub));
        value += mid * outside;
        err += 0.5 * span * outside;
    }
    if !(ub > ua) {
        return QuadResult { value, err, n_evals: 0 };
    }
    let mut pts = Vec::with_capacity(knots.len() + 2);
    pts.push(ua);
    for k in &knots {
        let u = chart.u_of((k - c) / s);
        if u > ua && u < ub {
            pts.push(u);
        }
    }
    pts.push(ub);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    let g = |u: f64| {
        let w = chart.w(u);
        if w == 0.0 {
            0.0
        } else {
            f(c + s * chart.y(u)) * w
        }
    };
    let r = integrate(g, &pts, (tol - err).max(0.5 * tol), budget);
    QuadResult { value: value + r.value, err: err + r.err, n_evals: r.n_evals }
}

/// `E f(c + s·U)` for `U` uniform on the unit disc.
///
/// For each direction from `c` the radial integral is taken piecewise between
/// the payoff's ray crossings; the angular average is a periodic trapezoid rule
/// whose point count doubles until two levels agree.
pub(crate) fn disc_rays(c: Point, s: f64, payoff: &Payoff, tol: f64, budget: usize) -> QuadResult {
    const THETA0: f64 = 0.012_345_678_9;
    let mut knots = Vec::new();
    let mut evals = 0usize;
    let mut ray = |theta: f64, evals: &mut usize| -> f64 {
        let u = Point::new(cos(theta), sin(theta));
        knots.clear();
        knots.push(0.0);
        payoff.ray_knots(c, u, s, &mut knots);
        knots.push(s);
        knots.sort_by(|a, b| a.total_cmp(b));
        let r = integrate(|rho| payoff.eval(c + u * rho) * rho, &knots, 0.25 * tol * s * s, 4000);
        *evals += r.n_evals;
        2.0 * r.value / (s * s)
    };
    let mut n = 8usize;
    let mut sum = 0.0;
    for j in 0..n {
        sum += ray(THETA0 + TAU * j as f64 / n as f64, &mut evals);
    }
    let mut prev = sum / n as f64;
    let mut err = f64::INFINITY;
    loop {
        let per_ray = evals as f64 / n as f64;
        if evals as f64 + per_ray * n as f64 > budget as f64 {
            break;
        }
        let mut add = Vec::with_capacity(n);
        for j in 0..n {
            add.push(ray(THETA0 + TAU * (j as f64 + 0.5) / n as f64, &mut evals));
        }
        sum += pairwise_sum(&add);
        n *= 2;
        let cur = sum / n as f64;
        err = fabs(cur - prev);
        prev = cur;
        if err <= tol && n >= 32 {
            break;
        }
    }
    QuadResult { value: prev, err, n_evals: evals }
}

fn mc_term(term: &Term<'_>, c: Point, d: f64, f: &dyn Fn(Point) -> f64, tol: f64, budget: usize, rng: &mut StreamRng) -> QuadResult {
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut target = 1024usize.min(budget);
    loop {
        while n < target {
            let mut x = c;
            for (s, part) in &term.parts {
                x = x + part.sample_one(rng) * (d * s);
            }
            let v = f(x);
            n += 1;
            let delta = v - mean;
            mean += delta / n as f64;
            m2 += delta * (v - mean);
        }
        let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        let err = 3.0 * sqrt(var / n as f64);
        if err <= tol || n >= budget {
            return QuadResult { value: mean, err, n_evals: n };
        }
        target = (2 * n).min(budget);
    }
}

fn check_inputs(dart: &Dart, payoff: &Payoff, a: Point, d: f64, spec: &EvalSpec) -> Result<(), ExpectError> {
    spec.validate()?;
    dart.validate()?;
    if let Some(pd) = payoff.dim() {
        if pd != dart.dim() {
            return Err(ExpectError::DimensionMismatch { dart: dart.dim(), payoff: pd });
        }
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(ExpectError::BadDistance);
    }
    if !a.is_finite() || (dart.dim() == 1 && a.y != 0.0) {
        return Err(ExpectError::BadAim);
    }
    Ok(())
}

/// `E f(a + dX)`.
pub fn expect(dart: &Dart, payoff: &Payoff, a: Point, d: f64, spec: &EvalSpec) -> Result<EvalResult, ExpectError> {
    check_inputs(dart, payoff, a, d, spec)?;
    let f = |x: Point| payoff.eval(x);
    let tol = spec.abs_tol;

    if spec.engine == Engine::MonteCarlo {
        return Ok(mc_whole(dart, a, d, &f, spec));
    }
    let Some(terms) = expand(dart, 1.0) else {
        if spec.engine == Engine::Auto {
            return Ok(mc_whole(dart, a, d, &f, spec));
        }
        return Err(ExpectError::EngineUnsupported(spec.engine.name()));
    };

    let mut used = Engine::Exact;
    let mut values = Vec::with_capacity(terms.len());
    let mut errs = Vec::with_capacity(terms.len());
    let mut n_evals = 0usize;
    let mut atoms_value = Vec::new();
    for (idx, term) in terms.iter().enumerate() {
        let c = a + term.shift * d;
        if term.parts.is_empty() {
            atoms_value.push(term.weight * f(c));
            n_evals += 1;
            continue;
        }
        let exact_disc = matches!((term.parts.as_slice(), payoff), ([(_, Dart::UniformDisc)], Payoff::Dartboard(_)));
        if spec.engine == Engine::Exact && !exact_disc {
            return Err(ExpectError::EngineUnsupported("exact"));
        }
        let budget = ((spec.max_evals as f64 * term.weight) as usize).max(1000);
        let r = match classify(term) {
            TermKind::OneD(chart, s) => {
                used = used.max(Engine::Quad);
                let g = |x: f64| payoff.eval(Point::scalar(x));
                quad_1d(&chart, c.x, d * s, &g, payoff, tol, budget)
            }
            TermKind::Disc(s) => match payoff {
                Payoff::Dartboard(g) => {
                    n_evals += 1;
                    atoms_value.push(term.weight * g.disc_mean(c, d * s));
                    continue;
                }
                _ => {
                    if spec.engine == Engine::Exact {
                        return Err(ExpectError::EngineUnsupported("exact"));
                    }
                    used = used.max(Engine::Quad);
                    disc_rays(c, d * s, payoff, tol, budget)
                }
            },
            TermKind::Nested(c1, s1, c2, s2) => {
                used = used.max(Engine::Quad);
                nested(c1, d * s1, c2, d * s2, c.x, payoff, tol, budget)
            }
            TermKind::Sampled => {
                if spec.engine == Engine::Quad {
                    return Err(ExpectError::EngineUnsupported("quad"));
                }
                used = Engine::MonteCarlo;
                let mut rng = stream(spec.seed, idx as u64 + 1);
                mc_term(term, c, d, &f, tol, budget, &mut rng)
            }
        };
        values.push(term.weight * r.value);
        errs.push(term.weight * r.err);
        n_evals += r.n_evals;
    }
    values.push(pairwise_sum(&atoms_value));
    let value = pairwise_sum(&values);
    let err_est = pairwise_sum(&errs);
    Ok(EvalResult { value, err_est, n_evals, engine_used: used, within_budget: err_est <= tol })
}

fn mc_whole(dart: &Dart, a: Point, d: f64, f: &dyn Fn(Point) -> f64, spec: &EvalSpec) -> EvalResult {
    let mut rng = stream(spec.seed, 0);
    let term = Term { weight: 1.0, shift: Point::ZERO, parts: alloc::vec![(1.0, dart)] };
    let r = mc_term(&term, a, d, f, spec.abs_tol, spec.max_evals, &mut rng);
    EvalResult {
        value: r.value,
        err_est: r.err,
        n_evals: r.n_evals,
        engine_used: Engine::MonteCarlo,
        within_budget: r.err <= spec.abs_tol,
    }
}

enum TermKind {
    OneD(Chart, f64),
    Disc(f64),
    Nested(Chart, f64, Chart, f64),
    Sampled,
}

fn classify(term: &Term<'_>) -> TermKind {
    const TAIL: f64 = 1e-7;
    match term.parts.as_slice() {
        [(s, Dart::UniformDisc)] => TermKind::Disc(*s),
        [(s, d)] => match Chart::of(d, TAIL) {
            Some(ch) => TermKind::OneD(ch, *s),
            None => TermKind::Sampled,
        },
        [(s1, d1), (s2, d2)] => match (Chart::of(d1, TAIL), Chart::of(d2, TAIL)) {
            (Some(c1), Some(c2)) => TermKind::Nested(c1, *s1, c2, *s2),
            _ => TermKind::Sampled,
        },
        _ => TermKind::Sampled,
    }
}

/// `E f(c + s1 Y1 + s2 Y2)`: outer quadrature over `Y1` of inner expectations over `Y2`.
#[allow(clippy::too_many_arguments)]
fn nested(c1: Chart, s1: f64, c2: Chart, s2: f64, c: f64, payoff: &Payoff, tol: f64, budget: usize) -> QuadResult {
    let inner_budget = (budget / 16).max(1000);
    let g = |x: f64| payoff.eval(Point::scalar(x));
    let (inf, sup) = payoff.bounds();
    let span = (sup - inf).max(0.0);
    let mid = 0.5 * (inf + sup);
    let eps = if c1.compact() || span == 0.0 { 0.0 } else { 0.25 * tol / span };
    let (ua, ub) = (c1.quantile_u(eps), c1.quantile_u(1.0 - eps));
    let outside = c1.cum(ua) + 1.0 - c1.cum(ub);
    let mut inner_err: f64 = 0.0;
    let mut inner_evals = 0usize;
    let h = |u: f64| {
        let w = c1.w(u);
        if w == 0.0 {
            return 0.0;
        }
        let r = quad_1d(&c2, c + s1 * c1.y(u), s2, &g, payoff, 0.5 * tol, inner_budget);
        inner_err = inner_err.max(r.err);
        inner_evals += r.n_evals;
        r.value * w
    };
    let pts: Vec<f64> = (0..=8).map(|i| ua + (ub - ua) * i as f64 / 8.0).collect();
    let r = integrate(h, &pts, 0.5 * tol, 40 * PANEL_EVALS);
    let mass = 1.0 - outside;
    QuadResult {
        value: r.value + mid * outside,
        err: r.err + inner_err * mass + 0.5 * span * outside,
        n_evals: inner_evals,
    }
}

/// `E cos(Σ_j (a + dX)_j) = |φ(d·1)| cos(Σ a_j + Arg φ(d·1))`.
pub fn expect_cos_closed(dart: &Dart, a: Point, d: f64) -> Result<f64, ExpectError> {
    let w = if dart.dim() == 2 { Point::new(1.0, 1.0) } else { Point::scalar(1.0) };
    expect_cos_weighted(dart, w, a, d)
}

/// `E cos(w · (a + dX)) = Re(e^{i w·a} φ(d w))`.
pub fn expect_cos_weighted(dart: &Dart, w: Point, a: Point, d: f64) -> Result<f64, ExpectError> {
    dart.validate()?;
    if !(d > 0.0) || !d.is_finite() {
        return Err(ExpectError::BadDistance);
    }
    if !a.is_finite() {
        return Err(ExpectError::BadAim);
    }
    let phi = dart.cf(w * d);
    let arg = if phi.norm() == 0.0 { 0.0 } else { phi.arg() };
    Ok(phi.norm() * cos(w.dot(a) + arg))
}

/// Characteristic function of a one-dimensional density dart by numerical
/// Fourier integration of its density, to within about `tol`.
pub fn cf_numeric(dart: &Dart, t: f64, tol: f64) -> Result<Complex64, ExpectError> {
    if !(tol > 0.0) {
        return Err(ExpectError::BadSpec("tolerance must be positive"));
    }
    let chart = Chart::of(dart, 0.5 * tol).ok_or(ExpectError::EngineUnsupported("quad"))?;
    let (u0, u1) = chart.domain();
    let (ya, yb) = (chart.y(u0), chart.y(u1));
    let span = if ya.is_finite() && yb.is_finite() { yb - ya } else { 64.0 };
    let pieces = ((span * fabs(t) / PI) as usize + 16).min(200_000);
    let pts: Vec<f64> = (0..=pieces).map(|i| u0 + (u1 - u0) * i as f64 / pieces as f64).collect();
    let budget = 100 * pieces * PANEL_EVALS;
    let re = integrate(|u| chart.w(u) * cos(t * chart.y(u)), &pts, 0.25 * tol, budget);
    let im = integrate(|u| chart.w(u) * sin(t * chart.y(u)), &pts, 0.25 * tol, budget);
    Ok(Complex64::new(re.value, im.value))
}

/// Locations that matter for aiming: atoms and the endpoints of compact
/// continuous parts, each as an offset from the aim at unit distance.
pub(crate) fn feature_points(dart: &Dart) -> Vec<Point> {
    let Some(terms) = expand(dart, 1.0) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for t in &terms {
        match t.parts.as_slice() {
            [] => out.push(t.shift),
            [(s, d)] => match d {
                Dart::Uniform { lo, hi } => {
                    out.push(t.shift + Point::scalar(lo * s));
                    out.push(t.shift + Point::scalar(hi * s));
                }
                Dart::SemiCircle | Dart::Arcsine => {
                    out.push(t.shift + Point::scalar(-s));
                    out.push(t.shift + Point::scalar(*s));
                }
                _ => out.push(t.shift),
            },
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::normal_sf;
    use crate::payoff::BoardGeometry;
    use alloc::vec;

    fn spec() -> EvalSpec {
        EvalSpec::default()
    }

    #[test]
    fn uniform_square_wave_half() {
        let d = Dart::uniform(0.0, 2.0).unwrap();
        for a in [0.0, 0.3, -1.7] {
            let r = expect(&d, &Payoff::SquareWave, Point::scalar(a), 1.0, &spec()).unwrap();
            assert!((r.value - 0.5).abs() < 1e-9, "a={a}: {}", r.value);
            assert!(r.within_budget);
        }
    }

    #[test]
    fn point_mass_cosine() {
        let d = Dart::point_mass(0.0);
        for dist in [0.1, 1.0, 7.0] {
            let r = expect(&d, &Payoff::cosine(), Point::ZERO, dist, &spec()).unwrap();
            assert_eq!(r.value, 1.0);
            assert_eq!(r.engine_used, Engine::Exact);
        }
    }

    #[test]
    fn mixture_point_step() {
        let d = Dart::mixture(vec![(0.5, Dart::point_mass(0.0)), (0.5, Dart::normal(0.0, 1.0).unwrap())]).unwrap();
        let p = Payoff::point_step(1.0, 1.0, 0.5).unwrap();
        let r = expect(&d, &p, Point::ZERO, 1.0, &spec()).unwrap();
        let want = 0.5 + 0.25 * 2.0 * normal_sf(1.0);
        assert!((r.value - want).abs() < 1e-6, "{} vs {want}", r.value);
    }

    #[test]
    fn cos_closed_examples() {
        let b = Dart::bern(0.5).unwrap();
        for a in [0.0, 1.0, -2.5] {
            assert!(expect_cos_closed(&b, Point::scalar(a), PI).unwrap().abs() < 1e-15);
        }
        let n = Dart::normal(0.0, 1.0).unwrap();
        assert!((expect_cos_closed(&n, Point::ZERO, 1.0).unwrap() - exp(-0.5)).abs() < 1e-15);
        assert_eq!(expect_cos_closed(&Dart::point_mass(0.0), Point::ZERO, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let darts = [Dart::normal(0.0, 1.0).unwrap(), Dart::uniform(-0.5, 1.5).unwrap(), Dart::SemiCircle];
        for dart in &darts {
            for dist in [0.5, 1.0, 2.0, 4.0] {
                for a in [0.0, 0.7] {
                    let q = expect(dart, &Payoff::cosine(), Point::scalar(a), dist, &spec()).unwrap();
                    let c = expect_cos_closed(dart, Point::scalar(a), dist).unwrap();
                    assert!((q.value - c).abs() < 1e-6 + q.err_est, "{dart:?} d={dist} a={a}");
                }
            }
        }
    }

    #[test]
    fn cauchy_singular_atom() {
        let d = Dart::mixture(vec![(0.5, Dart::point_mass(0.0)), (0.5, Dart::cauchy(0.0, 1.0).unwrap())]).unwrap();
        let p = Payoff::singular_atom(0.0, 0.5).unwrap();
        for t in [1.0, 0.05] {
            let r = expect(&d, &p, Point::ZERO, t, &spec()).unwrap();
            let tail = 1.0 - 2.0 * atan(2.0 / t) / PI;
            assert!((r.value - (2.0 + 0.5 * tail)).abs() < 1e-6);
        }
    }

    #[test]
    fn board_disc_mean_on_rings() {
        // Centered disc of radius 20: bullseye, bull and the single ring.
        let g = BoardGeometry::standard();
        let a = |x: f64| x * x / 400.0;
        let singles: f64 = g.sectors.iter().map(|&v| v as f64).sum::<f64>() / 20.0;
        let want = 50.0 * a(6.35) + 25.0 * (a(16.0) - a(6.35)) + singles * (1.0 - a(16.0));
        let r = expect(&Dart::UniformDisc, &Payoff::dartboard(), Point::ZERO, 20.0, &spec()).unwrap();
        assert!((r.value - want).abs() < 1e-10, "{} vs {want}", r.value);
        assert_eq!(r.engine_used, Engine::Exact);
    }

    #[test]
    fn board_disc_mean_matches_rays() {
        let board = Payoff::dartboard();
        for (c, s) in [(Point::new(-2.4, 124.0), 30.0), (Point::new(60.0, -20.0), 45.0), (Point::new(3.0, 103.0), 3.0)] {
            let exact = expect(&Dart::UniformDisc, &board, c, s, &spec()).unwrap().value;
            let rays = disc_rays(c, s, &board, 1e-8, 1 << 22);
            assert!((exact - rays.value).abs() < 1e-5 + rays.err, "{c:?} {s}: {exact} vs {}", rays.value);
        }
    }

    #[test]
    fn disc_rays_smooth_payoff() {
        let p = Payoff::Cosine { weights: vec![1.0, 0.0] };
        let r = disc_rays(Point::ZERO, 2.0, &p, 1e-10, 1 << 18);
        // E cos(2U_1) = jinc(2) = J1(2)
        let want = crate::analysis::bessel::jinc(2.0);
        assert!((r.value - want).abs() < 1e-9, "{} vs {want}", r.value);
    }

    #[test]
    fn exact_engine_rejects_densities() {
        let s = EvalSpec { engine: Engine::Exact, ..spec() };
        let e = expect(&Dart::normal(0.0, 1.0).unwrap(), &Payoff::cosine(), Point::ZERO, 1.0, &s);
        assert_eq!(e, Err(ExpectError::EngineUnsupported("exact")));
        let ok = expect(&Dart::bern(0.3).unwrap(), &Payoff::SquareWave, Point::ZERO, 1.0, &s).unwrap();
        assert!((ok.value - 0.7).abs() < 1e-15);
    }

    #[test]
    fn input_errors() {
        let n = Dart::normal(0.0, 1.0).unwrap();
        let s = spec();
        assert_eq!(expect(&n, &Payoff::dartboard(), Point::ZERO, 1.0, &s), Err(ExpectError::DimensionMismatch { dart: 1, payoff: 2 }));
        assert_eq!(expect(&n, &Payoff::SquareWave, Point::ZERO, 0.0, &s), Err(ExpectError::BadDistance));
        assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 1.0, &s.with_budget(10)).is_err());
        assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 1.0, &s.with_tol(0.0)).is_err());
    }

    #[test]
    fn monte_carlo_agrees_with_quadrature() {
        let d = Dart::normal(0.3, 0.7).unwrap();
        let p = Payoff::gauss_bump(Point::scalar(0.5), 0.8, 1).unwrap();
        let q = expect(&d, &p, Point::scalar(0.1), 1.3, &spec()).unwrap();
        let mc = expect(&d, &p, Point::scalar(0.1), 1.3, &EvalSpec { engine: Engine::MonteCarlo, abs_tol: 2e-3, ..spec() }).unwrap();
        assert!((q.value - mc.value).abs() <= q.err_est + mc.err_est);
    }

    #[test]
    fn tent_cf_numeric() {
        for t in [0.0, 0.25, 0.5, 0.9, 1.5, 3.0] {
            let v = cf_numeric(&Dart::TentCf, t, 1e-4).unwrap();
            assert!((v.re - (1.0 - fabs(t)).max(0.0)).abs() < 1e-3, "t={t}: {v}");
            assert!(v.im.abs() < 1e-6);
        }
    }

    #[test]
    fn tent_cdf_limits() {
        assert!((tent_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((tent_cdf(1e4) - 1.0).abs() < 1e-4);
        assert!((tent_cdf(-3.0) + tent_cdf(3.0) - 1.0).abs() < 1e-14);
    }
}
