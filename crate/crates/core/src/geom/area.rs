//! Area of a disc intersected with a circular sector, by Green's theorem.
//!
//! For a region `A`, `area(A) = ½ ∮ (x dy - y dx)` over its boundary. The
//! boundary of `disc ∩ sector` consists of arcs of the disc, arcs of the
//! sector's circle and pieces of the two bounding rays; the rays pass through
//! the origin and contribute nothing.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{acos, atan2, cos, sin, sqrt};

use super::Point;

fn wrap(a: f64) -> f64 {
    let r = a % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Angles (about `center`, radius `radius`) where that circle meets the
/// circle of radius `r` about the origin.
fn circle_circle(center: Point, radius: f64, r: f64, out: &mut Vec<f64>) {
    let dist = center.norm();
    if dist == 0.0 {
        return;
    }
    // |center + radius e(φ)|² = r²  ⇔  cos(φ - φ0) = (r² - dist² - radius²) / (2 dist radius)
    let k = (r * r - dist * dist - radius * radius) / (2.0 * dist * radius);
    if !(k > -1.0 && k < 1.0) {
        return;
    }
    let phi0 = atan2(center.y, center.x);
    let h = acos(k);
    out.push(wrap(phi0 + h));
    out.push(wrap(phi0 - h));
}

/// Angles where the circle about `center` crosses the line `n · p = 0`.
fn circle_line(center: Point, radius: f64, n: Point, out: &mut Vec<f64>) {
    // n·center + radius (n_x cos φ + n_y sin φ) = 0
    let k = -n.dot(center) / radius;
    if !(k > -1.0 && k < 1.0) {
        return;
    }
    let phi0 = atan2(n.y, n.x);
    let h = acos(k);
    out.push(wrap(phi0 + h));
    out.push(wrap(phi0 - h));
}

/// Calls `f(lo, hi)` for each subinterval of `[start, start + span]` (split at
/// `cuts`) that lies inside. `inside` reports (strictly inside, inside or on the
/// boundary); it is probed at two interior points so a single tangency point
/// cannot decide the outcome. With `shared_boundary`, an interval lying on the
/// boundary counts as inside.
fn for_each_inside<I, F>(cuts: &mut Vec<f64>, start: f64, span: f64, shared_boundary: bool, inside: I, mut f: F)
where
    I: Fn(f64) -> (bool, bool),
    F: FnMut(f64, f64),
{
    cuts.retain(|&a| a > 0.0 && a < span);
    cuts.push(0.0);
    cuts.push(span);
    cuts.sort_by(|a, b| a.total_cmp(b));
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let (s1, l1) = inside(start + lo + 0.381_966 * (hi - lo));
        let (s2, l2) = inside(start + lo + 0.618_034 * (hi - lo));
        if s1 || s2 || (shared_boundary && l1 && l2) {
            f(start + lo, start + hi);
        }
    }
}

/// Area of `{|x - center| < s} ∩ {|x| < r, angle(x) ∈ [alpha, alpha + width]}`
/// with `0 < width <= π`.
pub fn disc_sector_area(center: Point, s: f64, r: f64, alpha: f64, width: f64) -> f64 {
    let beta = alpha + width;
    // Inward normals of the two bounding half-planes.
    let n_a = Point::new(-sin(alpha), cos(alpha));
    let n_b = Point::new(sin(beta), -cos(beta));
    // Coincident circles are resolved in favour of the sector's arc.
    let eps = 1e-9 * r.max(s);
    let in_sector = |p: Point| {
        let strict = p.norm() < r - eps && n_a.dot(p) > 0.0 && n_b.dot(p) > 0.0;
        (strict, strict)
    };
    let in_disc = |p: Point| {
        let d = p.dist(center);
        (d < s - eps, d < s + eps)
    };
    let mut total = 0.0;
    let mut cuts = Vec::with_capacity(8);

    // Arc of the sector's circle inside the disc: ½ r² dθ.
    cuts.clear();
    {
        let mut phis = Vec::with_capacity(2);
        circle_circle(Point::ZERO - center, r, s, &mut phis);
        // Angles on the origin circle where it meets the disc boundary.
        for phi in phis {
            cuts.push(wrap(phi - alpha));
        }
    }
    for_each_inside(&mut cuts, alpha, width, true, |t| in_disc(Point::new(r * cos(t), r * sin(t))), |lo, hi| {
        total += 0.5 * r * r * (hi - lo);
    });

    // Arc of the disc inside the sector: ½ ∫ (s² + s (c_x cos φ + c_y sin φ)) dφ.
    cuts.clear();
    circle_circle(center, s, r, &mut cuts);
    circle_line(center, s, n_a, &mut cuts);
    circle_line(center, s, n_b, &mut cuts);
    let at = |phi: f64| Point::new(center.x + s * cos(phi), center.y + s * sin(phi));
    for_each_inside(&mut cuts, 0.0, TAU, false, |phi| in_sector(at(phi)), |lo, hi| {
        let prim = |p: f64| s * s * p + s * (center.x * sin(p) - center.y * cos(p));
        total += 0.5 * (prim(hi) - prim(lo));
    });
    total.max(0.0)
}

/// Area of the intersection of two discs: one about `center` with radius
/// `s`, one about the origin with radius `r`.
pub fn disc_disc_area(center: Point, s: f64, r: f64) -> f64 {
    let d = center.norm();
    if d >= s + r {
        return 0.0;
    }
    if d <= (s - r).abs() {
        let m = s.min(r);
        return PI * m * m;
    }
    let a = acos(((d * d + s * s - r * r) / (2.0 * d * s)).clamp(-1.0, 1.0));
    let b = acos(((d * d + r * r - s * s) / (2.0 * d * r)).clamp(-1.0, 1.0));
    let kite = 0.5 * sqrt(((-d + s + r) * (d + s - r) * (d - s + r) * (d + s + r)).max(0.0));
    s * s * a + r * r * b - kite
}
