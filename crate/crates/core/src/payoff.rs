//! Payoff functions.
//!
//! Every payoff is bounded above and evaluates pointwise. One-dimensional
//! payoffs also describe their own structure for the integrators: a list of
//! knots where they jump or kink, and a [`Focus`] saying where the interesting
//! part lives.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan2, ceil, cos, exp, fabs, floor, round};

use crate::analysis::zeros::complex_zero;
use crate::dart::Dart;
use crate::error::PayoffError;
use crate::geom::area::{disc_disc_area, disc_sector_area};
use crate::geom::Point;

/// Standard dartboard layout, lengths in millimetres.
#[derive(Clone, Debug, PartialEq)]
pub struct BoardGeometry {
    pub bullseye_r: f64,
    pub bull_r: f64,
    pub treble_in: f64,
    pub treble_out: f64,
    pub double_in: f64,
    pub double_out: f64,
    /// Sector numbers counterclockwise from angle 0; sector `k` is centered at `18k` degrees.
    pub sectors: [u8; 20],
    pub bull_value: f64,
    pub bullseye_value: f64,
}

/// Which scoring ring a point falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Bullseye,
    Bull,
    Single,
    Treble,
    Double,
    Off,
}

impl Default for BoardGeometry {
    fn default() -> Self {
        Self::standard()
    }
}

impl BoardGeometry {
    pub const SECTOR_HALF_WIDTH_DEG: f64 = 9.0;

    pub fn standard() -> Self {
        BoardGeometry {
            bullseye_r: 6.35,
            bull_r: 16.0,
            treble_in: 99.0,
            treble_out: 107.0,
            double_in: 162.0,
            double_out: 170.0,
            sectors: [6, 13, 4, 18, 1, 20, 5, 12, 9, 14, 11, 8, 16, 7, 19, 3, 17, 2, 15, 10],
            bull_value: 25.0,
            bullseye_value: 50.0,
        }
    }

    pub fn validate(&self) -> Result<(), PayoffError> {
        let radii = [self.bullseye_r, self.bull_r, self.treble_in, self.treble_out, self.double_in, self.double_out];
        if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(PayoffError::InvalidParameter("board radii must be strictly increasing"));
        }
        let mut seen = [false; 21];
        for &s in &self.sectors {
            if s == 0 || s > 20 || seen[s as usize] {
                return Err(PayoffError::InvalidParameter("sector numbers must be a permutation of 1..20"));
            }
            seen[s as usize] = true;
        }
        Ok(())
    }

    /// Rings are half-open `[inner, outer)`.
    pub fn ring(&self, r: f64) -> Ring {
        if r < self.bullseye_r {
            Ring::Bullseye
        } else if r < self.bull_r {
            Ring::Bull
        } else if r < self.treble_in {
            Ring::Single
        } else if r < self.treble_out {
            Ring::Treble
        } else if r < self.double_in {
            Ring::Single
        } else if r < self.double_out {
            Ring::Double
        } else {
            Ring::Off
        }
    }

    /// Index into `sectors`. A sector owns its counterclockwise boundary.
    pub fn sector_index(&self, p: Point) -> usize {
        let mut deg = atan2(p.y, p.x) * (180.0 / PI);
        if deg < 0.0 {
            deg += 360.0;
        }
        let k = ceil((deg - Self::SECTOR_HALF_WIDTH_DEG) / 18.0) as i64;
        k.rem_euclid(20) as usize
    }

    pub fn sector_label(&self, p: Point) -> u8 {
        self.sectors[self.sector_index(p)]
    }

    pub fn score(&self, p: Point) -> f64 {
        let r = p.norm();
        let mult = match self.ring(r) {
            Ring::Bullseye => return self.bullseye_value,
            Ring::Bull => return self.bull_value,
            Ring::Off => return 0.0,
            Ring::Single => 1.0,
            Ring::Treble => 3.0,
            Ring::Double => 2.0,
        };
        mult * self.sectors[self.sector_index(p)] as f64
    }

    pub fn max_score(&self) -> f64 {
        let top = self.sectors.iter().copied().max().unwrap_or(20) as f64;
        (3.0 * top).max(self.bullseye_value).max(self.bull_value)
    }

    /// Mean score over the disc of radius `s` about `center`, from exact
    /// region areas.
    pub fn disc_mean(&self, center: Point, s: f64) -> f64 {
        let width = 2.0 * Self::SECTOR_HALF_WIDTH_DEG * PI / 180.0;
        let radii = self.radii();
        let bull = disc_disc_area(center, s, radii[0]);
        let outer_bull = disc_disc_area(center, s, radii[1]);
        let mut total = self.bullseye_value * bull + self.bull_value * (outer_bull - bull);
        if center.norm() < radii[5] + s && center.norm() + s > radii[1] {
            // Single, treble, single, double: multiplier on [radii[i], radii[i+1]).
            const MULT: [f64; 4] = [1.0, 3.0, 1.0, 2.0];
            for (k, &value) in self.sectors.iter().enumerate() {
                let alpha = (18.0 * k as f64 - Self::SECTOR_HALF_WIDTH_DEG) * PI / 180.0;
                let areas: [f64; 5] = core::array::from_fn(|i| disc_sector_area(center, s, radii[i + 1], alpha, width));
                let mut ring_sum = 0.0;
                for i in 0..4 {
                    ring_sum += MULT[i] * (areas[i + 1] - areas[i]);
                }
                total += value as f64 * ring_sum;
            }
        }
        (total / (PI * s * s)).max(0.0)
    }

    fn radii(&self) -> [f64; 6] {
        [self.bullseye_r, self.bull_r, self.treble_in, self.treble_out, self.double_in, self.double_out]
    }
}

/// Parameters of the bounded modification `h` of `e^{cx} cos(ωx)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroConstruct {
    pub omega: f64,
    pub c: f64,
    pub a0: f64,
    pub b: f64,
    /// Level taken far out, at least `sup |e^{cy} cos(ωy)|` over `|y| <= |a0| + 10b`.
    pub sup_bound: f64,
    /// Distance at which the construction pays off.
    pub d0: f64,
}

impl ZeroConstruct {
    pub fn inner_radius(&self) -> f64 {
        fabs(self.a0) + self.b
    }

    pub fn outer_radius(&self) -> f64 {
        fabs(self.a0) + 2.0 * self.b
    }

    pub fn raw(&self, x: f64) -> f64 {
        exp(self.c * x) * cos(self.omega * x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ax = fabs(x);
        let r1 = self.inner_radius();
        if ax <= r1 {
            self.raw(x)
        } else if ax >= self.outer_radius() {
            -self.sup_bound
        } else {
            let t = (ax - r1) / self.b;
            let f = self.raw(x);
            f + t * (-f - self.sup_bound)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payoff {
    /// `cos(w · x)`; empty weights mean all ones in any dimension.
    Cosine { weights: Vec<f64> },
    /// 1 on `[2k, 2k+1)`, 0 elsewhere.
    SquareWave,
    /// Blocks `m = 1..=m_max` of unit tents of half-width `0.1/(m+1)` centered at `2m + j/m`.
    Comb { k: u32, m_max: u32 },
    Dartboard(BoardGeometry),
    /// `1 - |x|/δ` on `|x| <= δ`, 0 up to `1 - δ`, a linear ramp to `p0/2` at 1, then `p0/2`.
    KDelta { delta: f64, p0: f64 },
    ZeroConstruct(ZeroConstruct),
    /// `2/p` at the atom, 1 on `|x| > 2`, 0 elsewhere.
    SingularAtom { atom: f64, p: f64 },
    /// `value` at 0, 0 on `0 < |x| <= radius`, `outer` beyond.
    PointStep { value: f64, radius: f64, outer: f64 },
    /// `inner(x) · h(|x|)` where `h` is 1 up to `radius`, 0 from `radius + 1`, linear between.
    Truncated { inner: Box<Payoff>, radius: f64 },
    /// `exp(-|x - center|² / (2 width²))`.
    GaussBump { center: Point, width: f64, dim: usize },
    /// Linear interpolation through sorted knots, constant beyond the ends.
    PiecewiseLinear(Vec<(f64, f64)>),
    /// `inner(t · direction)` for a planar payoff restricted to a line through the origin.
    Slice { inner: Box<Payoff>, direction: Point },
}

/// Where a one-dimensional payoff does something interesting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Focus {
    /// Outside `[lo, hi]` the payoff equals `outside.0` on the left and `outside.1`
    /// on the right, when known.
    Bounded { lo: f64, hi: f64, outside: Option<(f64, f64)> },
    Periodic { period: f64 },
    Anywhere,
}

/// Returned when a knot list would exceed its cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnotOverflow;

impl Payoff {
    pub fn cosine() -> Payoff {
        Payoff::Cosine { weights: Vec::new() }
    }

    pub fn dartboard() -> Payoff {
        Payoff::Dartboard(BoardGeometry::standard())
    }

    pub fn kdelta(delta: f64, p0: f64) -> Result<Payoff, PayoffError> {
        let p = Payoff::KDelta { delta, p0 };
        p.validate()?;
        Ok(p)
    }

    pub fn singular_atom(atom: f64, p: f64) -> Result<Payoff, PayoffError> {
        let f = Payoff::SingularAtom { atom, p };
        f.validate()?;
        Ok(f)
    }

    pub fn point_step(value: f64, radius: f64, outer: f64) -> Result<Payoff, PayoffError> {
        let f = Payoff::PointStep { value, radius, outer };
        f.validate()?;
        Ok(f)
    }

    pub fn gauss_bump(center: Point, width: f64, dim: usize) -> Result<Payoff, PayoffError> {
        let f = Payoff::GaussBump { center, width, dim };
        f.validate()?;
        Ok(f)
    }

    pub fn piecewise_linear(mut knots: Vec<(f64, f64)>) -> Result<Payoff, PayoffError> {
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        let f = Payoff::PiecewiseLinear(knots);
        f.validate()?;
        Ok(f)
    }

    pub fn slice(inner: Payoff, direction: Point) -> Result<Payoff, PayoffError> {
        let f = Payoff::Slice { inner: Box::new(inner), direction };
        f.validate()?;
        Ok(f)
    }

    /// `None` when the payoff accepts any dimension.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Payoff::Cosine { weights } if weights.is_empty() => None,
            Payoff::Cosine { weights } => Some(weights.len()),
            Payoff::Dartboard(_) => Some(2),
            Payoff::GaussBump { dim, .. } => Some(*dim),
            Payoff::Truncated { inner, .. } => inner.dim(),
            _ => Some(1),
        }
    }

    pub fn validate(&self) -> Result<(), PayoffError> {
        let bad = |m| Err(PayoffError::InvalidParameter(m));
        match self {
            Payoff::Cosine { weights } => {
                if weights.len() > 2 || weights.iter().any(|w| !w.is_finite()) {
                    return bad("cosine weights must be finite, at most two");
                }
            }
            Payoff::SquareWave => {}
            Payoff::Comb { k, m_max } => {
                if *k == 0 || m_max < k {
                    return bad("comb needs 1 <= k <= m_max");
                }
            }
            Payoff::Dartboard(g) => g.validate()?,
            Payoff::KDelta { delta, p0 } => {
                if !(*delta > 0.0 && *delta < 0.5) || !(*p0 >= 0.0 && *p0 <= 1.0) {
                    return bad("kdelta needs 0 < delta < 1/2 and 0 <= p0 <= 1");
                }
            }
            Payoff::ZeroConstruct(z) => {
                let ok = z.omega.is_finite()
                    && z.omega != 0.0
                    && z.c.is_finite()
                    && z.a0.is_finite()
                    && z.b > 0.0
                    && z.sup_bound.is_finite()
                    && z.sup_bound >= 0.0;
                if !ok {
                    return bad("zero construction parameters out of range");
                }
            }
            Payoff::SingularAtom { atom, p } => {
                if !atom.is_finite() || !(*p > 0.0 && *p <= 1.0) {
                    return bad("singularatom needs a finite atom and 0 < p <= 1");
                }
            }
            Payoff::PointStep { value, radius, outer } => {
                if !value.is_finite() || !outer.is_finite() || !(*radius > 0.0) || !radius.is_finite() {
                    return bad("pointstep needs finite values and radius > 0");
                }
            }
            Payoff::Truncated { inner, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return bad("truncation radius must be positive");
                }
                inner.validate()?;
            }
            Payoff::GaussBump { center, width, dim } => {
                if !(*width > 0.0) || !width.is_finite() || !center.is_finite() || (*dim != 1 && *dim != 2) {
                    return bad("gaussbump needs a finite center, width > 0 and dimension 1 or 2");
                }
                if *dim == 1 && center.y != 0.0 {
                    return bad("one-dimensional bump center must have y = 0");
                }
            }
            Payoff::PiecewiseLinear(k) => {
                if k.is_empty() || k.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return bad("piecewise-linear payoff needs finite knots");
                }
                if k.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return bad("piecewise-linear knots must be strictly increasing");
                }
            }
            Payoff::Slice { inner, direction } => {
                if inner.dim() != Some(2) {
                    return bad("slice needs a planar payoff");
                }
                if fabs(direction.norm() - 1.0) > 1e-9 {
                    return bad("slice direction must be a unit vector");
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: Point) -> f64 {
        match self {
            Payoff::Cosine { weights } => {
                let arg = match weights.len() {
                    0 => x.x + x.y,
                    1 => weights[0] * x.x,
                    _ => weights[0] * x.x + weights[1] * x.y,
                };
                cos(arg)
            }
            Payoff::SquareWave => {
                let r = x.x - 2.0 * floor(0.5 * x.x);
                if r < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Payoff::Comb { m_max, .. } => comb_eval(*m_max, x.x),
            Payoff::Dartboard(g) => g.score(x),
            Payoff::KDelta { delta, p0 } => {
                let ax = fabs(x.x);
                if ax <= *delta {
                    1.0 - ax / delta
                } else if ax < 1.0 - delta {
                    0.0
                } else if ax < 1.0 {
                    0.5 * p0 * (ax - 1.0 + delta) / delta
                } else {
                    0.5 * p0
                }
            }
            Payoff::ZeroConstruct(z) => z.eval(x.x),
            Payoff::SingularAtom { atom, p } => {
                if x.x == *atom {
                    2.0 / p
                } else if fabs(x.x) > 2.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Payoff::PointStep { value, radius, outer } => {
                let ax = fabs(x.x);
                if ax == 0.0 {
                    *value
                } else if ax <= *radius {
                    0.0
                } else {
                    *outer
                }
            }
            Payoff::Truncated { inner, radius } => {
                let r = if inner.dim() == Some(2) { x.norm() } else { fabs(x.x) };
                let h = if r <= *radius {
                    1.0
                } else if r >= radius + 1.0 {
                    return 0.0;
                } else {
                    radius + 1.0 - r
                };
                h * inner.eval(x)
            }
            Payoff::GaussBump { center, width, .. } => {
                let r = x.dist(*center);
                exp(-0.5 * r * r / (width * width))
            }
            Payoff::PiecewiseLinear(k) => pwl_eval(k, x.x),
            Payoff::Slice { inner, direction } => inner.eval(*direction * x.x),
        }
    }

    /// `(inf, sup)` of the payoff over its whole domain.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Payoff::Cosine { weights } => {
                if !weights.is_empty() && weights.iter().all(|w| *w == 0.0) {
                    (1.0, 1.0)
                } else {
                    (-1.0, 1.0)
                }
            }
            Payoff::SquareWave | Payoff::Comb { .. } => (0.0, 1.0),
            Payoff::Dartboard(g) => (0.0, g.max_score()),
            Payoff::KDelta { .. } => (0.0, 1.0),
            Payoff::ZeroConstruct(z) => {
                let r1 = z.inner_radius();
                let top = exp(fabs(z.c) * r1);
                (-z.sup_bound.max(top), top.max(0.0))
            }
            Payoff::SingularAtom { p, .. } => (0.0, (2.0 / p).max(1.0)),
            Payoff::PointStep { value, outer, .. } => {
                (value.min(*outer).min(0.0), value.max(*outer).max(0.0))
            }
            Payoff::Truncated { inner, .. } => {
                let (lo, hi) = inner.bounds();
                (lo.min(0.0), hi.max(0.0))
            }
            Payoff::GaussBump { .. } => (0.0, 1.0),
            Payoff::PiecewiseLinear(k) => k.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
                (lo.min(y), hi.max(y))
            }),
            Payoff::Slice { inner, .. } => inner.bounds(),
        }
    }

    /// Structure of a one-dimensional payoff.
    pub fn focus(&self) -> Focus {
        match self {
            Payoff::Cosine { weights } => {
                let w = weights.first().copied().unwrap_or(1.0);
                if w == 0.0 {
                    Focus::Bounded { lo: 0.0, hi: 0.0, outside: Some((1.0, 1.0)) }
                } else {
                    Focus::Periodic { period: 2.0 * PI / fabs(w) }
                }
            }
            Payoff::SquareWave => Focus::Periodic { period: 2.0 },
            Payoff::Comb { m_max, .. } => {
                Focus::Bounded { lo: 1.9, hi: 2.0 * *m_max as f64 + 1.1, outside: Some((0.0, 0.0)) }
            }
            Payoff::Dartboard(g) => Focus::Bounded { lo: -g.double_out, hi: g.double_out, outside: Some((0.0, 0.0)) },
            Payoff::KDelta { p0, .. } => Focus::Bounded { lo: -1.0, hi: 1.0, outside: Some((0.5 * p0, 0.5 * p0)) },
            Payoff::ZeroConstruct(z) => {
                let r = z.outer_radius();
                Focus::Bounded { lo: -r, hi: r, outside: Some((-z.sup_bound, -z.sup_bound)) }
            }
            Payoff::SingularAtom { atom, .. } => {
                let r = fabs(*atom).max(2.0);
                Focus::Bounded { lo: -r, hi: r, outside: Some((1.0, 1.0)) }
            }
            Payoff::PointStep { radius, outer, .. } => {
                Focus::Bounded { lo: -radius, hi: *radius, outside: Some((*outer, *outer)) }
            }
            Payoff::Truncated { radius, .. } => {
                Focus::Bounded { lo: -(radius + 1.0), hi: radius + 1.0, outside: Some((0.0, 0.0)) }
            }
            Payoff::GaussBump { center, width, .. } => {
                // exp(-x²/2) underflows to exactly zero beyond 40 widths.
                Focus::Bounded { lo: center.x - 40.0 * width, hi: center.x + 40.0 * width, outside: Some((0.0, 0.0)) }
            }
            Payoff::PiecewiseLinear(k) => Focus::Bounded {
                lo: k[0].0,
                hi: k[k.len() - 1].0,
                outside: Some((k[0].1, k[k.len() - 1].1)),
            },
            Payoff::Slice { inner, .. } => match inner.as_ref() {
                Payoff::Dartboard(g) => Focus::Bounded { lo: -g.double_out, hi: g.double_out, outside: Some((0.0, 0.0)) },
                Payoff::GaussBump { center, width, .. } => {
                    let r = center.norm() + 40.0 * width;
                    Focus::Bounded { lo: -r, hi: r, outside: Some((0.0, 0.0)) }
                }
                Payoff::Truncated { radius, .. } => {
                    Focus::Bounded { lo: -(radius + 1.0), hi: radius + 1.0, outside: Some((0.0, 0.0)) }
                }
                _ => Focus::Anywhere,
            },
        }
    }

    /// Planar analogue of [`Payoff::focus`]: a center and radius outside which
    /// the payoff is constant, if there is one.
    pub fn focus_2d(&self) -> Option<(Point, f64)> {
        match self {
            Payoff::Dartboard(g) => Some((Point::ZERO, g.double_out)),
            Payoff::GaussBump { center, width, .. } => Some((*center, 40.0 * width)),
            Payoff::Truncated { radius, .. } => Some((Point::ZERO, radius + 1.0)),
            _ => None,
        }
    }

    /// Appends the knots of a one-dimensional payoff inside `[lo, hi]`: points
    /// where it jumps, kinks or takes an isolated value.
    pub fn knots(&self, lo: f64, hi: f64, cap: usize, out: &mut Vec<f64>) -> Result<(), KnotOverflow> {
        let push = |x: f64, out: &mut Vec<f64>| -> Result<(), KnotOverflow> {
            if x >= lo && x <= hi {
                if out.len() >= cap {
                    return Err(KnotOverflow);
                }
                out.push(x);
            }
            Ok(())
        };
        if !(lo <= hi) {
            return Ok(());
        }
        match self {
            Payoff::Cosine { weights } => {
                let w = fabs(weights.first().copied().unwrap_or(1.0));
                if w > 0.0 {
                    periodic_knots(PI / w, 0.0, lo, hi, cap, out)?;
                }
            }
            Payoff::SquareWave => periodic_knots(1.0, 0.0, lo, hi, cap, out)?,
            Payoff::Comb { m_max, .. } => {
                for m in 1..=*m_max {
                    let base = 2.0 * m as f64;
                    if base + 1.1 < lo || base - 0.1 > hi {
                        continue;
                    }
                    let hw = 0.1 / (m as f64 + 1.0);
                    for j in 0..=m {
                        let c = base + j as f64 / m as f64;
                        push(c - hw, out)?;
                        push(c, out)?;
                        push(c + hw, out)?;
                    }
                }
            }
            Payoff::Dartboard(_) => {}
            Payoff::KDelta { delta, .. } => {
                for x in [-1.0, delta - 1.0, -delta, 0.0, *delta, 1.0 - delta, 1.0] {
                    push(x, out)?;
                }
            }
            Payoff::ZeroConstruct(z) => {
                let (r1, r2) = (z.inner_radius(), z.outer_radius());
                for x in [-r2, -r1, r1, r2] {
                    push(x, out)?;
                }
                if z.omega != 0.0 {
                    periodic_knots(PI / fabs(z.omega), 0.0, lo.max(-r2), hi.min(r2), cap, out)?;
                }
            }
            Payoff::SingularAtom { atom, .. } => {
                for x in [-2.0, *atom, 2.0] {
                    push(x, out)?;
                }
            }
            Payoff::PointStep { radius, .. } => {
                for x in [-radius, 0.0, *radius] {
                    push(x, out)?;
                }
            }
            Payoff::Truncated { inner, radius } => {
                for x in [-(radius + 1.0), -radius, *radius, radius + 1.0] {
                    push(x, out)?;
                }
                inner.knots(lo.max(-(radius + 1.0)), hi.min(radius + 1.0), cap, out)?;
            }
            Payoff::GaussBump { center, width, .. } => {
                for k in -4..=4 {
                    push(center.x + k as f64 * width, out)?;
                }
            }
            Payoff::PiecewiseLinear(k) => {
                for &(x, _) in k {
                    push(x, out)?;
                }
            }
            Payoff::Slice { inner, .. } => match inner.as_ref() {
                Payoff::Dartboard(g) => {
                    for r in g.radii() {
                        push(-r, out)?;
                        push(r, out)?;
                    }
                    push(0.0, out)?;
                }
                Payoff::Truncated { radius, .. } => {
                    for x in [-(radius + 1.0), -radius, *radius, radius + 1.0] {
                        push(x, out)?;
                    }
                }
                _ => {}
            },
        }
        Ok(())
    }
}

impl Payoff {
    /// Appends the distances `t` in `(0, t_max)` at which the ray `origin + t·dir`
    /// crosses a discontinuity of a planar payoff. `dir` must be a unit vector.
    /// Smooth payoffs add nothing.
    pub fn ray_knots(&self, origin: Point, dir: Point, t_max: f64, out: &mut Vec<f64>) {
        match self {
            Payoff::Dartboard(g) => {
                for r in g.radii() {
                    circle_crossings(origin, dir, r, t_max, out);
                }
                for k in 0..20 {
                    let deg = BoardGeometry::SECTOR_HALF_WIDTH_DEG + 18.0 * k as f64;
                    let v = Point::new(cos(deg * PI / 180.0), libm::sin(deg * PI / 180.0));
                    let den = v.x * dir.y - v.y * dir.x;
                    if den == 0.0 {
                        continue;
                    }
                    let t = (origin.x * v.y - origin.y * v.x) / den;
                    if t > 0.0 && t < t_max && (origin + dir * t).dot(v) > 0.0 {
                        out.push(t);
                    }
                }
            }
            Payoff::Truncated { inner, radius } => {
                circle_crossings(origin, dir, *radius, t_max, out);
                circle_crossings(origin, dir, radius + 1.0, t_max, out);
                inner.ray_knots(origin, dir, t_max, out);
            }
            _ => {}
        }
    }
}

fn circle_crossings(origin: Point, dir: Point, r: f64, t_max: f64, out: &mut Vec<f64>) {
    let b = origin.dot(dir);
    let disc = b * b - (origin.dot(origin) - r * r);
    if disc <= 0.0 {
        return;
    }
    let root = libm::sqrt(disc);
    for t in [-b - root, -b + root] {
        if t > 0.0 && t < t_max {
            out.push(t);
        }
    }
}

fn periodic_knots(step: f64, offset: f64, lo: f64, hi: f64, cap: usize, out: &mut Vec<f64>) -> Result<(), KnotOverflow> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(KnotOverflow);
    }
    let first = ceil((lo - offset) / step);
    let last = floor((hi - offset) / step);
    if last < first {
        return Ok(());
    }
    if last - first + 1.0 + out.len() as f64 > cap as f64 {
        return Err(KnotOverflow);
    }
    let mut k = first;
    while k <= last {
        out.push(offset + k * step);
        k += 1.0;
    }
    Ok(())
}

fn comb_eval(m_max: u32, x: f64) -> f64 {
    let m = floor((x + 0.1) / 2.0);
    if !(m >= 1.0 && m <= m_max as f64) {
        return 0.0;
    }
    let base = 2.0 * m;
    let j = round((x - base) * m).clamp(0.0, m);
    let center = base + j / m;
    let hw = 0.1 / (m + 1.0);
    (1.0 - fabs(x - center) / hw).max(0.0)
}

fn pwl_eval(k: &[(f64, f64)], x: f64) -> f64 {
    if x <= k[0].0 {
        return k[0].1;
    }
    let last = k[k.len() - 1];
    if x >= last.0 {
        return last.1;
    }
    let i = k.partition_point(|&(kx, _)| kx <= x);
    let (x0, y0) = k[i - 1];
    let (x1, y1) = k[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Teeth of value 1 on a grid of blocks; see [`Payoff::Comb`].
pub fn make_comb(k: u32, m_max: u32) -> Result<Payoff, PayoffError> {
    let p = Payoff::Comb { k, m_max };
    p.validate()?;
    Ok(p)
}

/// `payoff · h(|x|)` with a linear radial cutoff from `radius` to `radius + 1`.
pub fn truncate(payoff: Payoff, radius: f64) -> Result<Payoff, PayoffError> {
    if payoff.bounds().0 < 0.0 {
        return Err(PayoffError::Negative);
    }
    let p = Payoff::Truncated { inner: Box::new(payoff), radius };
    p.validate()?;
    Ok(p)
}

/// Builds the bounded payoff `h` from a complex zero of the dart's
/// characteristic function. Aiming anywhere from distance 1 earns at most 0,
/// while aiming at `a0` from distance `d0` earns a positive amount.
pub fn make_zero_construct(dart: &Dart) -> Result<Payoff, PayoffError> {
    if dart.dim() != 1 {
        return Err(PayoffError::ConstructionUnavailable("dart must be one-dimensional"));
    }
    let atoms = dart.atoms().map_err(|_| PayoffError::ConstructionUnavailable("dart must be atomic"))?;
    if atoms.len() < 2 {
        return Err(PayoffError::ConstructionUnavailable("degenerate dart has no characteristic-function zero"));
    }
    let z0 = complex_zero(dart).map_err(|_| PayoffError::ConstructionUnavailable("no complex zero found"))?;
    let (omega, c) = (z0.re, -z0.im);
    let reach = atoms.iter().map(|a| fabs(a.at.x)).fold(0.0, f64::max);
    let mut chosen = None;
    for d0 in [2.0, 1.5, 3.0, 2.5, 4.0, 1.25, 5.0, 1.75, 6.0] {
        let v = dart.cf_complex(z0 * d0)?;
        if v.norm() > 1e-9 {
            chosen = Some((d0, v));
            break;
        }
    }
    let (d0, v) = chosen.ok_or(PayoffError::ConstructionUnavailable("characteristic function vanishes at every trial distance"))?;
    let a0 = -v.arg() / omega;
    let a0 = if fabs(a0) < 1e-15 { 0.0 } else { a0 };
    let b = d0 * reach;
    let mut z = ZeroConstruct { omega, c, a0, b, sup_bound: 0.0, d0 };
    let r = fabs(a0) + 10.0 * b;
    let n = 100_000;
    let mut sup: f64 = 0.0;
    for i in 0..=n {
        let y = -r + 2.0 * r * i as f64 / n as f64;
        sup = sup.max(fabs(z.raw(y)));
    }
    z.sup_bound = 1.01 * sup;
    let p = Payoff::ZeroConstruct(z);
    p.validate()?;
    Ok(p)
}
