//! `darts reproduce <case>`: named experiments with PASS/FAIL checks.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use darts_core::analysis::divisibility::{DEFAULT_GRID, DEFAULT_T_MAX};
use darts_core::analysis::{
    bern_normal_criterion, bessel_j, cf_scan, divisibility_check, first_positive_zero, j0, jinc, phase_boundary_sigma, sufficient_sigma_sq,
    BernNormalParams,
};
use darts_core::expectation::cf_numeric;
use darts_core::math::normal_sf;
use darts_core::optimizer::default_box;
use darts_core::payoff::{make_comb, make_zero_construct};
use darts_core::{best_aim, dartboard_sweep, expect, expect_cos_closed, g_curve, AimResult, Dart, Engine, EvalSpec, Payoff, Point, SearchBox};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    UniformSquarewave,
    DartboardBumps,
    CosCriterion,
    BernNormalPhase,
    PointmassIncreasing,
    CombLimit,
    SelfdecompRatio,
    ZeroConstruct,
    Kdelta,
    SingularAtom,
    ProjectionSemicircle,
    TentCf,
}

impl Case {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

/// PASS/FAIL lines for one case.
#[derive(Debug, Default)]
pub struct Report {
    pub checks: Vec<(String, bool, String)>,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push((name.to_string(), ok, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    pub fn render(&self, case: Case) -> String {
        let mut s = String::new();
        for (name, ok, detail) in &self.checks {
            let _ = writeln!(s, "{} {} {name}: {detail}", if *ok { "PASS" } else { "FAIL" }, case.name());
        }
        s
    }
}

fn spec() -> EvalSpec {
    EvalSpec::default()
}

fn aim(dart: &Dart, f: &Payoff, d: f64) -> Result<AimResult> {
    Ok(best_aim(dart, f, d, &spec(), &default_box(dart, f, d))?)
}

fn half_and_half(other: Dart) -> Result<Dart> {
    Ok(Dart::mixture(vec![(0.5, Dart::point_mass(0.0)), (0.5, other)])?)
}

pub fn run(case: Case) -> Result<Report> {
    let mut r = Report::default();
    match case {
        Case::UniformSquarewave => uniform_squarewave(&mut r)?,
        Case::DartboardBumps => dartboard_bumps(&mut r)?,
        Case::CosCriterion => cos_criterion(&mut r)?,
        Case::BernNormalPhase => bern_normal_phase(&mut r)?,
        Case::PointmassIncreasing => pointmass_increasing(&mut r)?,
        Case::CombLimit => comb_limit(&mut r)?,
        Case::SelfdecompRatio => selfdecomp_ratio(&mut r)?,
        Case::ZeroConstruct => zero_construct(&mut r)?,
        Case::Kdelta => kdelta(&mut r)?,
        Case::SingularAtom => singular_atom(&mut r)?,
        Case::ProjectionSemicircle => projection_semicircle(&mut r)?,
        Case::TentCf => tent_cf(&mut r)?,
    }
    Ok(r)
}

fn uniform_squarewave(r: &mut Report) -> Result<()> {
    let c = g_curve(&Dart::uniform(0.0, 2.0)?, &Payoff::SquareWave, &[1.0, 1.5], &spec())?;
    let (g1, g15) = (c.points[0].g, c.points[1].g);
    r.check("g(1)", (g1 - 0.5).abs() <= 0.005, format!("{g1:.4}"));
    r.check("g(1.5)", (g15 - 2.0 / 3.0).abs() <= 0.005, format!("{g15:.4}"));
    r.check("increase", c.increases.len() == 1, format!("{} detected", c.increases.len()));
    Ok(())
}

fn dartboard_bumps(r: &mut Report) -> Result<()> {
    let grid = [3.0, 30.0, 33.6, 35.7, 37.0, 38.0, 39.0, 40.0, 41.0, 42.0, 43.0, 44.0, 45.0, 104.8, 107.0, 164.0, 170.0];
    let s = dartboard_sweep(&grid, &spec())?;
    let at = |x: f64| grid.iter().position(|&y| y == x).unwrap_or(0);
    let g = |x: f64| s.curve.points[at(x)].g;
    let rises = |a: f64, b: f64| s.curve.increases.iter().any(|i| i.d_from == a && i.d_to == b);
    r.check("g(3)", (g(3.0) - 60.0).abs() <= 1e-6, format!("{:.6}", g(3.0)));
    r.check("g(33.6)", (g(33.6) - 18.45).abs() <= 0.10, format!("{:.4}", g(33.6)));
    r.check("g(35.7)", (g(35.7) - 18.60).abs() <= 0.10 && g(35.7) > g(33.6), format!("{:.4}", g(35.7)));
    for (a, b) in [(33.6, 35.7), (104.8, 107.0), (164.0, 170.0)] {
        r.check(&format!("increase {a}->{b}"), rises(a, b), format!("{:.4} -> {:.4}", g(a), g(b)));
    }
    let (s30, s41) = (s.sectors[at(30.0)], s.sectors[at(41.0)]);
    r.check("sectors", s30 == 20 && s41 == 19, format!("{s30} at 30 mm, {s41} at 41 mm"));
    let flip = grid.windows(2).zip(s.sectors.windows(2)).find(|(_, w)| w[0] == 20 && w[1] == 19).map(|(x, _)| (x[0], x[1]));
    r.check("20->19 jump", flip.is_some_and(|(a, b)| a >= 37.0 && b <= 41.0), format!("{flip:?}"));
    let later = s.aim_jumps.iter().find(|&&(a, b)| a >= 41.0 && b <= 45.0 && Some((a, b)) != flip);
    r.check("later jump", later.is_some(), format!("{later:?}"));
    Ok(())
}

fn cos_criterion(r: &mut Report) -> Result<()> {
    let quad = EvalSpec { engine: Engine::Quad, abs_tol: 1e-9, ..EvalSpec::default() };
    let mut worst: f64 = 0.0;
    for dart in [Dart::normal(0.0, 1.0)?, Dart::uniform(0.0, 2.0)?, Dart::SemiCircle] {
        for d in [0.5, 1.0, 2.0, 4.0] {
            for a in [0.0, 0.7] {
                let closed = expect_cos_closed(&dart, Point::scalar(a), d)?;
                let q = expect(&dart, &Payoff::cosine(), Point::scalar(a), d, &quad)?.value;
                worst = worst.max((closed - q).abs());
            }
        }
    }
    r.check("closed form", worst < 1e-4, format!("max |closed - quad| = {worst:.2e}"));
    let catalog: [(&str, Dart, f64, bool); 8] = [
        ("normal", Dart::normal(0.0, 1.0)?, 10.0, true),
        ("cauchy", Dart::cauchy(0.0, 1.0)?, 10.0, true),
        ("tentcf", Dart::TentCf, 2.0, true),
        ("normal+cauchy", Dart::indep_sum(vec![(1.0, Dart::normal(0.0, 1.0)?), (1.0, Dart::cauchy(0.0, 1.0)?)])?, 10.0, true),
        ("normal mixture", Dart::mixture(vec![(0.3, Dart::normal(0.0, 1.0)?), (0.7, Dart::normal(0.0, 2.0)?)])?, 10.0, true),
        ("bern(1/2)", Dart::bern(0.5)?, 8.0, false),
        ("uniform", Dart::uniform(0.0, 2.0)?, 10.0, false),
        ("semicircle", Dart::SemiCircle, 8.0, false),
    ];
    for (name, dart, t_max, want) in catalog {
        let scan = cf_scan(&dart, t_max, 2000)?;
        r.check(name, scan.monotone == want, format!("monotone={} on [0,{t_max}]", scan.monotone));
    }
    Ok(())
}

fn bern_normal_phase(r: &mut Report) -> Result<()> {
    let holds = |p: f64, sigma: f64| bern_normal_criterion(BernNormalParams { p, sigma }, 4.0 * PI, 4000).map(|c| c.reasonable_cos);
    let mut fair = true;
    for s in [0.1, 1.0, 10.0] {
        fair &= !holds(0.5, s)?;
    }
    r.check("p=1/2", fair, "fails for sigma in {0.1, 1, 10}".into());
    r.check("p=0.3 wide", holds(0.3, 0.4178f64.sqrt())?, "holds at sigma^2=0.4178".into());
    r.check("p=0.3 narrow", !holds(0.3, 0.05)?, "fails at sigma=0.05".into());
    let sp = phase_boundary_sigma(0.3, 1e-4)?;
    r.check("boundary", sp * sp <= 0.4178 + 1e-3, format!("sigma_p={sp:.5} sigma_p^2={:.5} bound {:.5}", sp * sp, sufficient_sigma_sq(0.3)));
    r.check("flip", holds(0.3, sp + 1e-3)? && !holds(0.3, sp - 1e-3)?, "criterion changes within 1e-3 of sigma_p".into());
    Ok(())
}

fn pointmass_increasing(r: &mut Report) -> Result<()> {
    let ds = [0.5, 1.0, 2.0, 5.0];
    let c = g_curve(&half_and_half(Dart::normal(0.0, 1.0)?)?, &Payoff::point_step(1.0, 1.0, 0.5)?, &ds, &spec())?;
    for (d, p) in ds.iter().zip(&c.points) {
        let want = 0.5 + 0.25 * 2.0 * normal_sf(1.0 / d);
        r.check(&format!("g({d})"), (p.g - want).abs() <= 0.01, format!("{:.5} vs {want:.5}", p.g));
    }
    r.check("increasing", c.points.windows(2).all(|w| w[1].g > w[0].g), format!("{} increases", c.increases.len()));
    Ok(())
}

fn comb_limit(r: &mut Report) -> Result<()> {
    let comb = make_comb(5, 8)?;
    let grid = aim(&Dart::grid(5)?, &comb, 1.0)?;
    let uni = aim(&Dart::uniform(0.0, 1.0)?, &comb, 1.0)?;
    r.check("grid dart", (grid.g - 1.0).abs() < 1e-12 && (grid.aim.x - 10.0).abs() < 1e-6, format!("g={} at {}", grid.g, grid.aim.x));
    r.check("uniform dart", uni.g <= 0.6, format!("g={:.5}", uni.g));
    Ok(())
}

fn selfdecomp_ratio(r: &mut Report) -> Result<()> {
    let mut check = |name: &str, dart: &Dart, d: f64, want: bool| -> Result<()> {
        let rep = divisibility_check(dart, d, DEFAULT_T_MAX, DEFAULT_GRID)?;
        let why = if rep.min_density.is_finite() {
            format!("min density {:.2e}", rep.min_density)
        } else {
            format!("max |phi(dt)/phi(t)| = {:.3}", rep.max_ratio)
        };
        r.check(&format!("{name} d={d}"), rep.valid == want, format!("valid={} {why}", rep.valid));
        Ok(())
    };
    for d in [1.1, 1.5, 2.0, 3.0] {
        check("normal", &Dart::normal(0.0, 1.0)?, d, true)?;
        check("cauchy", &Dart::cauchy(0.0, 1.0)?, d, true)?;
    }
    let u = Dart::uniform(0.0, 1.0)?;
    check("uniform", &u, 2.0, true)?;
    check("uniform", &u, 1.5, false)?;
    Ok(())
}

fn zero_construct(r: &mut Report) -> Result<()> {
    let bern = Dart::bern(0.3)?;
    let h = make_zero_construct(&bern)?;
    let Payoff::ZeroConstruct(z) = &h else { unreachable!() };
    let exact = EvalSpec { engine: Engine::Exact, ..EvalSpec::default() };
    let (mut top, mut eq_top, mut n_eq) = (f64::NEG_INFINITY, 0.0f64, 0);
    for i in 0..20 {
        let a = -8.0 + 16.0 * f64::from(i) / 19.0;
        let v = expect(&bern, &h, Point::scalar(a), 1.0, &exact)?.value;
        top = top.max(v);
        if a >= -z.inner_radius() && a + 1.0 <= z.inner_radius() {
            eq_top = eq_top.max(v.abs());
            n_eq += 1;
        }
    }
    r.check("E h <= 0", top <= 1e-9, format!("max over 20 aims {top:.2e}"));
    r.check("equality", n_eq > 0 && eq_top < 1e-12, format!("{n_eq} aims, max |E h| {eq_top:.2e}"));
    let g2 = aim(&bern, &h, 2.0)?;
    r.check("g(2)", g2.g >= 2.30, format!("{:.5} at {:.4}", g2.g, g2.aim.x));
    Ok(())
}

fn kdelta(r: &mut Report) -> Result<()> {
    let x = half_and_half(Dart::normal(0.0, 1.0)?)?;
    let far = aim(&x, &Payoff::kdelta(0.1, 0.5)?, 50.0)?;
    r.check("g(50), delta=0.1", far.g >= 0.74, format!("{:.5}; every aim is capped by p0+(1-p0)p0/2 = 0.625 as d grows", far.g));
    let c = g_curve(&x, &Payoff::kdelta(0.01, 0.5)?, &[0.05, 50.0], &spec())?;
    r.check("g(0.05), delta=0.01", c.points[0].g <= 0.60, format!("{:.5}", c.points[0].g));
    r.check("increase", !c.increases.is_empty(), format!("{:.5} -> {:.5}", c.points[0].g, c.points[1].g));
    Ok(())
}

fn singular_atom(r: &mut Report) -> Result<()> {
    let x = half_and_half(Dart::cauchy(0.0, 1.0)?)?;
    let c = g_curve(&x, &Payoff::singular_atom(0.0, 0.5)?, &[0.05, 1.0], &spec())?;
    let exact = |t: f64| 2.0 + 0.5 * (1.0 - 2.0 / PI * (2.0 / t).atan());
    let (g0, g1) = (c.points[0].g, c.points[1].g);
    r.check("g(1)", g1 >= 2.14, format!("{g1:.5} (exact {:.5})", exact(1.0)));
    r.check("g(0.05)", g0 <= 2.05, format!("{g0:.5} (exact {:.5})", exact(0.05)));
    r.check("increase", !c.increases.is_empty(), format!("{} detected", c.increases.len()));
    Ok(())
}

fn projection_semicircle(r: &mut Report) -> Result<()> {
    let z0 = first_positive_zero(j0, 0.5, 50.0)?;
    let z1 = first_positive_zero(jinc, 0.5, 50.0)?;
    r.check("J0 zero", (z0 - 2.4048).abs() <= 1e-3, format!("{z0:.6}"));
    r.check("2J1(d)/d zero", (z1 - 3.8317).abs() <= 1e-3, format!("{z1:.6}"));
    let (c3, c4) = (Dart::SemiCircle.cf(Point::scalar(3.0)).re, Dart::SemiCircle.cf(Point::scalar(4.0)).re);
    r.check("semicircle cf sign", c3 > 0.0 && c4 < 0.0, format!("cf(3)={c3:.5} cf(4)={c4:.5}"));
    let cos_x1 = Payoff::Cosine { weights: vec![1.0, 0.0] };
    let quad = EvalSpec { engine: Engine::Quad, abs_tol: 1e-8, ..EvalSpec::default() };
    for d in [1.0, 2.0, 3.0, 4.0] {
        let semi = aim(&Dart::SemiCircle, &Payoff::cosine(), d)?.g;
        let bessel = (2.0 * bessel_j(1, d)? / d).abs();
        let disc = best_aim(&Dart::UniformDisc, &cos_x1, d, &quad, &SearchBox::square(Point::ZERO, PI + 1.0))?.g;
        r.check(&format!("d={d}"), (semi - bessel).abs() <= 1e-6 && (semi - disc).abs() <= 1e-3, format!("semicircle {semi:.7} |2J1/d| {bessel:.7} disc {disc:.7}"));
    }
    Ok(())
}

fn tent_cf(r: &mut Report) -> Result<()> {
    let mut worst: f64 = 0.0;
    for i in 0..=30 {
        let t = 0.1 * f64::from(i);
        let v = cf_numeric(&Dart::TentCf, t, 1e-6)?;
        worst = worst.max((v.re - (1.0 - t).max(0.0)).abs()).max(v.im.abs());
    }
    r.check("tent", worst < 1e-3, format!("max |cf - max(1-|t|,0)| = {worst:.2e} on [0,3]"));
    let scan = cf_scan(&Dart::TentCf, 2.0, 1000)?;
    r.check("monotone", scan.monotone, "modulus scan on [0,2]".into());
    Ok(())
}
