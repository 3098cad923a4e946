//! Dart distributions.
//!
//! A [`Dart`] is an algebraic description of a probability law on the line or
//! the plane. Every variant has a closed-form characteristic function and an
//! exact sampler; density variants also expose what the quadrature engine needs
//! through [`crate::expectation`].

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{cos, exp, fabs, sin, sqrt};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::analysis::bessel::{j0, jinc};
use crate::error::DartError;
use crate::geom::Point;
use crate::math::sinc;
use crate::rng::{stream, StreamRng};

/// Atoms closer than this are merged on construction.
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Masses and mixture weights must sum to one within this tolerance.
pub const MASS_SUM_TOL: f64 = 1e-12;
/// Number of factors kept in the Cantor characteristic-function product.
pub const CANTOR_FACTORS: usize = 60;
/// Base-3 digits drawn per Cantor sample.
pub const CANTOR_DIGITS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub at: Point,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dart {
    /// Finitely many point masses.
    Atomic { dim: usize, atoms: Vec<Atom> },
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
    Cauchy { loc: f64, scale: f64 },
    /// Density `(2/π)·sqrt(1 - x²)` on `[-1, 1]`.
    SemiCircle,
    /// Density `1/(π·sqrt(1 - x²))` on `(-1, 1)`.
    Arcsine,
    /// Density `(1 - cos x)/(π x²)`, whose characteristic function is the tent `max(1 - |t|, 0)`.
    TentCf,
    /// Middle-thirds Cantor measure on `[0, 1]`.
    Cantor,
    /// Uniform on `{0, 1/k, 2/k, …, 1}`.
    GridUniform { k: u32 },
    /// Uniform on the unit disc.
    UniformDisc,
    Mixture(Vec<(f64, Dart)>),
    /// `Σ c_j X_j` with independent members.
    IndepSum(Vec<(f64, Dart)>),
    /// `scale · X + shift`.
    Affine { scale: f64, shift: Point, inner: Box<Dart> },
}

impl Dart {
    pub fn point_mass(x: f64) -> Dart {
        Dart::Atomic { dim: 1, atoms: alloc::vec![Atom { at: Point::scalar(x), mass: 1.0 }] }
    }

    /// One-dimensional atoms given as `(location, mass)`.
    pub fn atomic_1d(atoms: &[(f64, f64)]) -> Result<Dart, DartError> {
        Dart::atomic(1, atoms.iter().map(|&(x, m)| (Point::scalar(x), m)))
    }

    pub fn atomic<I>(dim: usize, atoms: I) -> Result<Dart, DartError>
    where
        I: IntoIterator<Item = (Point, f64)>,
    {
        if dim != 1 && dim != 2 {
            return Err(DartError::InvalidParameter("dimension must be 1 or 2"));
        }
        let mut list: Vec<Atom> = Vec::new();
        for (at, mass) in atoms {
            if !at.is_finite() {
                return Err(DartError::InvalidParameter("atom location must be finite"));
            }
            if dim == 1 && at.y != 0.0 {
                return Err(DartError::DimensionMismatch);
            }
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(DartError::MassSum(mass));
            }
            list.push(Atom { at, mass });
        }
        if list.is_empty() {
            return Err(DartError::InvalidParameter("at least one atom is required"));
        }
        let atoms = merge_atoms(list);
        let sum: f64 = atoms.iter().map(|a| a.mass).sum();
        if fabs(sum - 1.0) > MASS_SUM_TOL {
            return Err(DartError::MassSum(sum));
        }
        Ok(Dart::Atomic { dim, atoms })
    }

    /// `P(X = 1) = p`, `P(X = 0) = 1 - p`.
    pub fn bern(p: f64) -> Result<Dart, DartError> {
        if !(p > 0.0 && p < 1.0) {
            if p == 0.0 || p == 1.0 {
                return Ok(Dart::point_mass(p));
            }
            return Err(DartError::InvalidParameter("bern(p) needs 0 <= p <= 1"));
        }
        Dart::atomic_1d(&[(0.0, 1.0 - p), (1.0, p)])
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Dart, DartError> {
        let d = Dart::Uniform { lo, hi };
        d.validate()?;
        Ok(d)
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Dart, DartError> {
        let d = Dart::Normal { mean, sd };
        d.validate()?;
        Ok(d)
    }

    pub fn cauchy(loc: f64, scale: f64) -> Result<Dart, DartError> {
        let d = Dart::Cauchy { loc, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn grid(k: u32) -> Result<Dart, DartError> {
        let d = Dart::GridUniform { k };
        d.validate()?;
        Ok(d)
    }

    pub fn mixture(parts: Vec<(f64, Dart)>) -> Result<Dart, DartError> {
        let d = Dart::Mixture(parts);
        d.validate()?;
        Ok(d)
    }

    pub fn indep_sum(parts: Vec<(f64, Dart)>) -> Result<Dart, DartError> {
        let d = Dart::IndepSum(parts);
        d.validate()?;
        Ok(d)
    }

    pub fn affine(scale: f64, shift: Point, inner: Dart) -> Result<Dart, DartError> {
        let d = Dart::Affine { scale, shift, inner: Box::new(inner) };
        d.validate()?;
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        match self {
            Dart::Atomic { dim, .. } => *dim,
            Dart::UniformDisc => 2,
            Dart::Mixture(parts) | Dart::IndepSum(parts) => parts.first().map_or(1, |(_, d)| d.dim()),
            Dart::Affine { inner, .. } => inner.dim(),
            _ => 1,
        }
    }

    /// Checks every parameter invariant, recursively.
    pub fn validate(&self) -> Result<(), DartError> {
        let finite = |v: f64| v.is_finite();
        match self {
            Dart::Atomic { dim, atoms } => {
                if *dim != 1 && *dim != 2 {
                    return Err(DartError::InvalidParameter("dimension must be 1 or 2"));
                }
                if atoms.is_empty() {
                    return Err(DartError::InvalidParameter("at least one atom is required"));
                }
                let mut sum = 0.0;
                for a in atoms {
                    if !(a.mass > 0.0) || !a.at.is_finite() {
                        return Err(DartError::MassSum(a.mass));
                    }
                    if *dim == 1 && a.at.y != 0.0 {
                        return Err(DartError::DimensionMismatch);
                    }
                    sum += a.mass;
                }
                if fabs(sum - 1.0) > MASS_SUM_TOL {
                    return Err(DartError::MassSum(sum));
                }
            }
            Dart::Uniform { lo, hi } => {
                if !(finite(*lo) && finite(*hi) && lo < hi) {
                    return Err(DartError::InvalidParameter("uniform needs finite lo < hi"));
                }
            }
            Dart::Normal { mean, sd } => {
                if !(finite(*mean) && finite(*sd) && *sd > 0.0) {
                    return Err(DartError::InvalidParameter("normal needs a finite mean and sd > 0"));
                }
            }
            Dart::Cauchy { loc, scale } => {
                if !(finite(*loc) && finite(*scale) && *scale > 0.0) {
                    return Err(DartError::InvalidParameter("cauchy needs a finite location and scale > 0"));
                }
            }
            Dart::GridUniform { k } => {
                if *k == 0 {
                    return Err(DartError::InvalidParameter("grid(k) needs k >= 1"));
                }
            }
            Dart::SemiCircle | Dart::Arcsine | Dart::TentCf | Dart::Cantor | Dart::UniformDisc => {}
            Dart::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(DartError::InvalidParameter("mixture needs at least one component"));
                }
                let dim = parts[0].1.dim();
                let mut sum = 0.0;
                for (w, d) in parts {
                    if !(*w > 0.0) || !w.is_finite() {
                        return Err(DartError::MassSum(*w));
                    }
                    if d.dim() != dim {
                        return Err(DartError::DimensionMismatch);
                    }
                    d.validate()?;
                    sum += w;
                }
                if fabs(sum - 1.0) > MASS_SUM_TOL {
                    return Err(DartError::MassSum(sum));
                }
            }
            Dart::IndepSum(parts) => {
                if parts.is_empty() {
                    return Err(DartError::InvalidParameter("sum needs at least one member"));
                }
                let dim = parts[0].1.dim();
                for (c, d) in parts {
                    if !(*c >= 0.0) || !c.is_finite() {
                        return Err(DartError::InvalidParameter("sum scales must be nonnegative"));
                    }
                    if d.dim() != dim {
                        return Err(DartError::DimensionMismatch);
                    }
                    d.validate()?;
                }
            }
            Dart::Affine { scale, shift, inner } => {
                if !(*scale > 0.0) || !scale.is_finite() || !shift.is_finite() {
                    return Err(DartError::InvalidParameter("affine needs scale > 0 and a finite shift"));
                }
                if inner.dim() == 1 && shift.y != 0.0 {
                    return Err(DartError::DimensionMismatch);
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    /// True when the law is a finite set of atoms.
    pub fn is_atomic(&self) -> bool {
        match self {
            Dart::Atomic { .. } | Dart::GridUniform { .. } => true,
            Dart::Mixture(parts) | Dart::IndepSum(parts) => parts.iter().all(|(_, d)| d.is_atomic()),
            Dart::Affine { inner, .. } => inner.is_atomic(),
            _ => false,
        }
    }

    /// Atoms of a purely atomic dart, merged and sorted.
    pub fn atoms(&self) -> Result<Vec<Atom>, DartError> {
        let list = match self {
            Dart::Atomic { atoms, .. } => atoms.clone(),
            Dart::GridUniform { k } => {
                let m = 1.0 / (*k as f64 + 1.0);
                (0..=*k).map(|j| Atom { at: Point::scalar(j as f64 / *k as f64), mass: m }).collect()
            }
            Dart::Mixture(parts) => {
                let mut out = Vec::new();
                for (w, d) in parts {
                    out.extend(d.atoms()?.into_iter().map(|a| Atom { at: a.at, mass: a.mass * w }));
                }
                out
            }
            Dart::IndepSum(parts) => {
                let mut acc = alloc::vec![Atom { at: Point::ZERO, mass: 1.0 }];
                for (c, d) in parts {
                    let member = d.atoms()?;
                    let mut next = Vec::with_capacity(acc.len() * member.len());
                    for a in &acc {
                        for b in &member {
                            next.push(Atom { at: a.at + b.at * *c, mass: a.mass * b.mass });
                        }
                    }
                    acc = merge_atoms(next);
                }
                acc
            }
            Dart::Affine { scale, shift, inner } => inner
                .atoms()?
                .into_iter()
                .map(|a| Atom { at: *shift + a.at * *scale, mass: a.mass })
                .collect(),
            _ => return Err(DartError::NotAtomic),
        };
        Ok(merge_atoms(list))
    }

    /// Characteristic function `E exp(i t·X)`. For one-dimensional darts only
    /// `t.x` is used.
    pub fn cf(&self, t: Point) -> Complex64 {
        match self {
            Dart::Atomic { atoms, .. } => {
                atoms.iter().map(|a| Complex64::from_polar(a.mass, t.dot(a.at))).sum()
            }
            Dart::Uniform { lo, hi } => {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                Complex64::from_polar(sinc(t.x * half), t.x * mid)
            }
            Dart::Normal { mean, sd } => {
                Complex64::from_polar(exp(-0.5 * sd * sd * t.x * t.x), t.x * mean)
            }
            Dart::Cauchy { loc, scale } => Complex64::from_polar(exp(-scale * fabs(t.x)), t.x * loc),
            Dart::SemiCircle => Complex64::new(jinc(t.x), 0.0),
            Dart::Arcsine => Complex64::new(j0(t.x), 0.0),
            Dart::TentCf => Complex64::new((1.0 - fabs(t.x)).max(0.0), 0.0),
            Dart::Cantor => {
                let mut prod = 1.0;
                let mut s = t.x;
                for _ in 0..CANTOR_FACTORS {
                    s /= 3.0;
                    prod *= cos(s);
                }
                Complex64::from_polar(prod, 0.5 * t.x)
            }
            Dart::GridUniform { k } => {
                let m = 1.0 / (*k as f64 + 1.0);
                (0..=*k).map(|j| Complex64::from_polar(m, t.x * j as f64 / *k as f64)).sum()
            }
            Dart::UniformDisc => Complex64::new(jinc(t.norm()), 0.0),
            Dart::Mixture(parts) => parts.iter().map(|(w, d)| d.cf(t) * *w).sum(),
            Dart::IndepSum(parts) => parts.iter().map(|(c, d)| d.cf(t * *c)).product(),
            Dart::Affine { scale, shift, inner } => {
                inner.cf(t * *scale) * Complex64::from_polar(1.0, t.dot(*shift))
            }
        }
    }

    /// Entire extension `Σ m_j exp(i z x_j)` of the characteristic function of
    /// a one-dimensional atomic dart.
    pub fn cf_complex(&self, z: Complex64) -> Result<Complex64, DartError> {
        if self.dim() != 1 {
            return Err(DartError::WrongDimension { expected: 1 });
        }
        let atoms = self.atoms()?;
        let i = Complex64::new(0.0, 1.0);
        Ok(atoms.iter().map(|a| (i * z * a.at.x).exp() * a.mass).sum())
    }

    /// Law of `direction · X` for a planar dart.
    pub fn project(&self, direction: Point) -> Result<Dart, DartError> {
        if self.dim() != 2 {
            return Err(DartError::WrongDimension { expected: 2 });
        }
        if fabs(direction.norm() - 1.0) > 1e-9 {
            return Err(DartError::NotUnitDirection);
        }
        self.project_inner(direction)
    }

    fn project_inner(&self, u: Point) -> Result<Dart, DartError> {
        Ok(match self {
            Dart::Atomic { atoms, .. } => {
                Dart::atomic(1, atoms.iter().map(|a| (Point::scalar(a.at.dot(u)), a.mass)))?
            }
            // Rotation invariance: every unit direction gives the semicircle law.
            Dart::UniformDisc => Dart::SemiCircle,
            Dart::Mixture(parts) => Dart::Mixture(
                parts.iter().map(|(w, d)| Ok((*w, d.project_inner(u)?))).collect::<Result<_, DartError>>()?,
            ),
            Dart::IndepSum(parts) => Dart::IndepSum(
                parts.iter().map(|(c, d)| Ok((*c, d.project_inner(u)?))).collect::<Result<_, DartError>>()?,
            ),
            Dart::Affine { scale, shift, inner } => Dart::Affine {
                scale: *scale,
                shift: Point::scalar(shift.dot(u)),
                inner: Box::new(inner.project_inner(u)?),
            },
            _ => return Err(DartError::WrongDimension { expected: 2 }),
        })
    }

    /// `n` independent draws, deterministic in `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<Point> {
        let mut rng = stream(seed, 0);
        (0..n).map(|_| self.sample_one(&mut rng)).collect()
    }

    pub fn sample_one(&self, rng: &mut StreamRng) -> Point {
        match self {
            Dart::Atomic { atoms, .. } => {
                let u: f64 = rng.random();
                pick(atoms.iter().map(|a| a.mass), u).map_or(atoms[atoms.len() - 1].at, |i| atoms[i].at)
            }
            Dart::Uniform { lo, hi } => Point::scalar(lo + (hi - lo) * rng.random::<f64>()),
            Dart::Normal { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                Point::scalar(mean + sd * z)
            }
            Dart::Cauchy { loc, scale } => Point::scalar(loc + scale * standard_cauchy(rng)),
            Dart::SemiCircle => {
                let r = sqrt(rng.random::<f64>());
                Point::scalar(r * cos(TAU * rng.random::<f64>()))
            }
            Dart::Arcsine => Point::scalar(cos(PI * rng.random::<f64>())),
            Dart::TentCf => Point::scalar(sample_tent(rng)),
            Dart::Cantor => {
                let mut x = 0.0;
                let mut scale = 1.0;
                for _ in 0..CANTOR_DIGITS {
                    scale /= 3.0;
                    if rng.random::<bool>() {
                        x += 2.0 * scale;
                    }
                }
                Point::scalar(x)
            }
            Dart::GridUniform { k } => {
                let j = rng.random_range(0..=*k);
                Point::scalar(j as f64 / *k as f64)
            }
            Dart::UniformDisc => {
                let r = sqrt(rng.random::<f64>());
                let th = TAU * rng.random::<f64>();
                Point::new(r * cos(th), r * sin(th))
            }
            Dart::Mixture(parts) => {
                let u: f64 = rng.random();
                let i = pick(parts.iter().map(|(w, _)| *w), u).unwrap_or(parts.len() - 1);
                parts[i].1.sample_one(rng)
            }
            Dart::IndepSum(parts) => {
                let mut acc = Point::ZERO;
                for (c, d) in parts {
                    acc = acc + d.sample_one(rng) * *c;
                }
                acc
            }
            Dart::Affine { scale, shift, inner } => *shift + inner.sample_one(rng) * *scale,
        }
    }

    /// A center and radius such that the bulk of the law lies within
    /// `radius` of `center`: the support radius for compact laws, eight
    /// scales for unbounded ones.
    pub fn spread(&self) -> (Point, f64) {
        match self {
            Dart::Atomic { atoms, .. } => {
                let (lo, hi) = bbox(atoms.iter().map(|a| a.at));
                let c = (lo + hi) * 0.5;
                let r = atoms.iter().map(|a| a.at.dist(c)).fold(0.0, f64::max);
                (c, r)
            }
            Dart::Uniform { lo, hi } => (Point::scalar(0.5 * (lo + hi)), 0.5 * (hi - lo)),
            Dart::Normal { mean, sd } => (Point::scalar(*mean), 8.0 * sd),
            Dart::Cauchy { loc, scale } => (Point::scalar(*loc), 8.0 * scale),
            Dart::SemiCircle | Dart::Arcsine | Dart::UniformDisc => (Point::ZERO, 1.0),
            Dart::TentCf => (Point::ZERO, 8.0),
            Dart::Cantor | Dart::GridUniform { .. } => (Point::scalar(0.5), 0.5),
            Dart::Mixture(parts) => {
                let spreads: Vec<(Point, f64)> = parts.iter().map(|(_, d)| d.spread()).collect();
                let (lo, hi) = bbox(spreads.iter().flat_map(|&(c, r)| [c - Point::new(r, r), c + Point::new(r, r)]));
                let mut c = (lo + hi) * 0.5;
                if self.dim() == 1 {
                    c.y = 0.0;
                }
                let r = spreads.iter().map(|&(ci, ri)| ci.dist(c) + ri).fold(0.0, f64::max);
                (c, r)
            }
            Dart::IndepSum(parts) => parts.iter().fold((Point::ZERO, 0.0), |(c, r), (s, d)| {
                let (ci, ri) = d.spread();
                (c + ci * *s, r + ri * s)
            }),
            Dart::Affine { scale, shift, inner } => {
                let (c, r) = inner.spread();
                (*shift + c * *scale, r * scale)
            }
        }
    }

    /// True for darts symmetric about the origin.
    pub fn is_symmetric(&self) -> bool {
        match self {
            Dart::Normal { mean, .. } => *mean == 0.0,
            Dart::Cauchy { loc, .. } => *loc == 0.0,
            Dart::Uniform { lo, hi } => *lo == -*hi,
            Dart::SemiCircle | Dart::Arcsine | Dart::TentCf | Dart::UniformDisc => true,
            Dart::Atomic { atoms, .. } => atoms.iter().all(|a| {
                atoms.iter().any(|b| b.at.dist(-a.at) <= ATOM_MERGE_TOL && fabs(b.mass - a.mass) <= MASS_SUM_TOL)
            }),
            Dart::Mixture(parts) | Dart::IndepSum(parts) => parts.iter().all(|(_, d)| d.is_symmetric()),
            Dart::Affine { shift, inner, .. } => *shift == Point::ZERO && inner.is_symmetric(),
            Dart::Cantor | Dart::GridUniform { .. } => false,
        }
    }
}

fn bbox<I: Iterator<Item = Point>>(pts: I) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

fn pick<I: Iterator<Item = f64>>(weights: I, u: f64) -> Option<usize> {
    let mut acc = 0.0;
    for (i, w) in weights.enumerate() {
        acc += w;
        if u < acc {
            return Some(i);
        }
    }
    None
}

fn standard_cauchy(rng: &mut StreamRng) -> f64 {
    libm::tan(PI * (rng.random::<f64>() - 0.5))
}

/// Rejection sampler for the density `(1 - cos x)/(π x²)` under a Cauchy(0, 2)
/// envelope; the density ratio is bounded by [`TENT_ENVELOPE`].
fn sample_tent(rng: &mut StreamRng) -> f64 {
    loop {
        let x = 2.0 * standard_cauchy(rng);
        let target = crate::math::one_minus_cos_over_sq(x) / PI;
        let envelope = 2.0 / (PI * (4.0 + x * x));
        if rng.random::<f64>() * TENT_ENVELOPE * envelope <= target {
            return x;
        }
    }
}

pub(crate) const TENT_ENVELOPE: f64 = 1.5;

/// Sorts atoms and merges those within [`ATOM_MERGE_TOL`].
fn merge_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| a.at.x.total_cmp(&b.at.x).then(a.at.y.total_cmp(&b.at.y)));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.iter_mut().rev().take(8).find(|b| b.at.dist(a.at) <= ATOM_MERGE_TOL) {
            Some(b) => b.mass += a.mass,
            None => out.push(a),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cf_examples() {
        let n = Dart::normal(0.0, 1.0).unwrap();
        assert_eq!(n.cf(Point::ZERO), Complex64::new(1.0, 0.0));
        assert!(Dart::Arcsine.cf(Point::scalar(2.4048)).norm() < 1e-3);
        let u = Dart::uniform(0.0, 2.0).unwrap();
        assert!(u.cf(Point::scalar(PI)).norm() < 1e-12);
        let c3 = Dart::Cantor.cf(Point::scalar(3.0 * PI)).norm();
        let c1 = Dart::Cantor.cf(Point::scalar(PI)).norm();
        assert!(near(c3, cos(PI).abs() * c1, 1e-12));
    }

    #[test]
    fn uniform_cf_matches_exponential_form() {
        // (e^{i t hi} - e^{i t lo}) / (i t (hi - lo))
        let (lo, hi) = (-0.3, 1.7);
        let u = Dart::uniform(lo, hi).unwrap();
        for &t in &[0.1, 1.0, 2.5, -4.0] {
            let i = Complex64::new(0.0, 1.0);
            let want = ((i * t * hi).exp() - (i * t * lo).exp()) / (i * t * (hi - lo));
            assert!((u.cf(Point::scalar(t)) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn cf_complex_bern_zero() {
        let b = Dart::bern(0.3).unwrap();
        let c = libm::log(7.0 / 3.0);
        let z0 = Complex64::new(PI, -c);
        assert!(b.cf_complex(z0).unwrap().norm() < 1e-12);
        let v = b.cf_complex(z0 * 2.0).unwrap();
        assert!((v - Complex64::new(0.7 + 0.3 * 49.0 / 9.0, 0.0)).norm() < 1e-12);
        let one = Dart::point_mass(0.0).cf_complex(Complex64::new(3.0, -2.0)).unwrap();
        assert!((one - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(Dart::normal(0.0, 1.0).unwrap().cf_complex(z0), Err(DartError::NotAtomic));
    }

    #[test]
    fn cf_complex_agrees_on_real_axis() {
        let d = Dart::atomic_1d(&[(-1.0, 0.2), (0.5, 0.5), (2.0, 0.3)]).unwrap();
        for &t in &[0.0, 0.7, 3.0, -5.5] {
            let a = d.cf(Point::scalar(t));
            let b = d.cf_complex(Complex64::new(t, 0.0)).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn atoms_merge_and_validate() {
        let d = Dart::atomic_1d(&[(1.0, 0.25), (1.0 + 1e-13, 0.25), (0.0, 0.5)]).unwrap();
        match &d {
            Dart::Atomic { atoms, .. } => assert_eq!(atoms.len(), 2),
            _ => unreachable!(),
        }
        assert!(Dart::atomic_1d(&[(0.0, 0.5), (1.0, 0.4)]).is_err());
        assert!(Dart::atomic_1d(&[(0.0, -0.5), (1.0, 1.5)]).is_err());
        assert!(Dart::uniform(1.0, 1.0).is_err());
        assert!(Dart::normal(0.0, 0.0).is_err());
        assert!(Dart::bern(1.5).is_err());
        let mixed = Dart::mixture(vec![(0.5, Dart::UniformDisc), (0.5, Dart::point_mass(0.0))]);
        assert_eq!(mixed, Err(DartError::DimensionMismatch));
    }

    #[test]
    fn projections() {
        assert_eq!(Dart::UniformDisc.project(Point::new(1.0, 0.0)).unwrap(), Dart::SemiCircle);
        let a = Dart::atomic(2, [(Point::new(1.0, 2.0), 1.0)]).unwrap();
        assert_eq!(a.project(Point::new(0.0, 1.0)).unwrap(), Dart::point_mass(2.0));
        let b = Dart::atomic(2, [(Point::new(0.0, 0.0), 0.5), (Point::new(1.0, 0.0), 0.5)]).unwrap();
        assert_eq!(b.project(Point::new(0.0, 1.0)).unwrap(), Dart::point_mass(0.0));
        assert_eq!(Dart::SemiCircle.project(Point::new(1.0, 0.0)), Err(DartError::WrongDimension { expected: 2 }));
        assert_eq!(Dart::UniformDisc.project(Point::new(1.0, 1.0)), Err(DartError::NotUnitDirection));
    }

    #[test]
    fn projected_cf_matches_planar_cf() {
        let d = Dart::mixture(vec![
            (0.4, Dart::UniformDisc),
            (0.6, Dart::atomic(2, [(Point::new(0.3, -1.0), 0.5), (Point::new(-0.2, 0.4), 0.5)]).unwrap()),
        ])
        .unwrap();
        let u = Point::new(0.6, 0.8);
        let p = d.project(u).unwrap();
        for &t in &[0.5, 2.0, -3.0] {
            assert!((p.cf(Point::scalar(t)) - d.cf(u * t)).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_samples() {
        let s = Dart::point_mass(5.0).sample(11, 3);
        assert_eq!(s, vec![Point::scalar(5.0); 3]);
    }

    #[test]
    fn uniform_sample_mean() {
        let s = Dart::uniform(0.0, 2.0).unwrap().sample(1, 100_000);
        let mean = s.iter().map(|p| p.x).sum::<f64>() / s.len() as f64;
        assert!(near(mean, 1.0, 0.01));
    }

    #[test]
    fn disc_sample_inner_area() {
        let s = Dart::UniformDisc.sample(2, 100_000);
        let inside = s.iter().filter(|p| p.norm() <= 0.5).count() as f64 / s.len() as f64;
        assert!(near(inside, 0.25, 0.01));
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = Dart::mixture(vec![(0.5, Dart::TentCf), (0.5, Dart::Cantor)]).unwrap();
        assert_eq!(d.sample(42, 100), d.sample(42, 100));
        assert_ne!(d.sample(42, 100), d.sample(43, 100));
    }

    #[test]
    fn tent_envelope_bounds_density_ratio() {
        let mut worst: f64 = 0.0;
        for i in 0..200_000 {
            let x = -100.0 + i as f64 * 1e-3;
            let target = crate::math::one_minus_cos_over_sq(x) / PI;
            let env = 2.0 / (PI * (4.0 + x * x));
            worst = worst.max(target / env);
        }
        assert!(worst < TENT_ENVELOPE, "ratio {worst}");
    }

    #[test]
    fn spreads() {
        let (c, r) = Dart::bern(0.3).unwrap().spread();
        assert_eq!((c.x, r), (0.5, 0.5));
        let (c, r) = Dart::affine(2.0, Point::scalar(1.0), Dart::uniform(0.0, 2.0).unwrap()).unwrap().spread();
        assert_eq!((c.x, r), (3.0, 2.0));
    }
}
