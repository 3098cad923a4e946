use std::f64::consts::PI;

use darts_core::payoff::{make_comb, make_zero_construct, truncate, Ring};
use darts_core::{BoardGeometry, Dart, Payoff, Point};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_dim() -> Vec<Payoff> {
    vec![
        Payoff::cosine(),
        Payoff::SquareWave,
        make_comb(5, 8).unwrap(),
        Payoff::kdelta(0.1, 0.5).unwrap(),
        make_zero_construct(&Dart::bern(0.3).unwrap()).unwrap(),
        Payoff::singular_atom(0.0, 0.5).unwrap(),
        truncate(Payoff::SquareWave, 3.0).unwrap(),
        Payoff::gauss_bump(Point::scalar(1.0), 0.5, 1).unwrap(),
        Payoff::piecewise_linear(vec![(-1.0, 0.0), (0.0, 2.0), (3.0, -1.0)]).unwrap(),
        Payoff::slice(Payoff::dartboard(), Point::new(0.0, 1.0)).unwrap(),
    ]
}

#[test]
fn probe_grid_respects_declared_bounds() {
    let n = 100_000;
    for f in one_dim() {
        let (lo, hi) = f.bounds();
        for i in 0..=n {
            let x = -200.0 + 400.0 * i as f64 / n as f64;
            let v = f.eval(Point::scalar(x));
            assert!(v <= hi + 1e-12 && v >= lo - 1e-12, "{f:?} at {x}: {v} outside [{lo}, {hi}]");
        }
    }
    let board = Payoff::dartboard();
    let (lo, hi) = board.bounds();
    let m = 1000;
    for i in 0..=m {
        for j in 0..=m {
            let p = Point::new(-200.0 + 0.4 * i as f64, -200.0 + 0.4 * j as f64);
            let v = board.eval(p);
            assert!(v >= lo && v <= hi);
        }
    }
}

#[test]
fn board_landmarks() {
    let b = Payoff::dartboard();
    assert_eq!(b.eval(Point::ZERO), 50.0);
    assert_eq!(b.eval(Point::new(0.0, 103.0)), 60.0);
    assert_eq!(b.eval(Point::new(200.0, 0.0)), 0.0);
    assert_eq!(b.eval(Point::new(0.0, 10.0)), 25.0);
    assert_eq!(b.eval(Point::new(0.0, 166.0)), 40.0);
    assert_eq!(b.eval(Point::new(0.0, 50.0)), 20.0);
    let g = BoardGeometry::standard();
    let mut labels = g.sectors.to_vec();
    labels.sort();
    assert_eq!(labels, (1..=20).collect::<Vec<u8>>());
}

proptest! {
    #[test]
    fn rotating_by_a_sector_keeps_the_ring(r in 17.0f64..169.0, theta in 0.0f64..(2.0 * PI)) {
        let g = BoardGeometry::standard();
        // Stay off the wires.
        let rel = (theta.to_degrees() + 9.0).rem_euclid(18.0);
        prop_assume!(rel > 1e-6 && rel < 18.0 - 1e-6);
        let p = Point::new(r * theta.cos(), r * theta.sin());
        let phi = theta + PI / 10.0;
        let q = Point::new(r * phi.cos(), r * phi.sin());
        let mult = |x: Point| g.score(x) / f64::from(g.sector_label(x));
        prop_assert_eq!(mult(p), mult(q));
        prop_assert_ne!(g.sector_label(p), g.sector_label(q));
    }

    #[test]
    fn truncation_is_sandwiched(x in -30.0f64..30.0, radius in 0.5f64..10.0) {
        for f in [Payoff::SquareWave, Payoff::gauss_bump(Point::scalar(0.3), 2.0, 1).unwrap(), make_comb(3, 4).unwrap()] {
            let t = truncate(f.clone(), radius).unwrap();
            let (v, w) = (t.eval(Point::scalar(x)), f.eval(Point::scalar(x)));
            prop_assert!(v >= 0.0 && v <= w + 1e-15);
            if x.abs() <= radius {
                prop_assert_eq!(v, w);
            }
            if x.abs() >= radius + 1.0 {
                prop_assert_eq!(v, 0.0);
            }
            let wider = truncate(f.clone(), radius + 1.5).unwrap();
            prop_assert!(wider.eval(Point::scalar(x)) >= v);
        }
    }
}

#[test]
fn truncation_examples() {
    let t = truncate(Payoff::SquareWave, 3.0).unwrap();
    assert_eq!(t.eval(Point::scalar(10.0)), 0.0);
    assert!((t.eval(Point::scalar(-3.5)) - 0.5 * Payoff::SquareWave.eval(Point::scalar(-3.5))).abs() < 1e-15);
    assert!((t.eval(Point::scalar(2.5)) - 1.0).abs() < 1e-15);
    assert!(truncate(Payoff::cosine(), 3.0).is_err());
}

#[test]
fn region_areas_match_monte_carlo() {
    let g = BoardGeometry::standard();
    let radii = [0.0, g.bullseye_r, g.bull_r, g.treble_in, g.treble_out, g.double_in, g.double_out];
    let rings = [Ring::Bullseye, Ring::Bull, Ring::Single, Ring::Treble, Ring::Single, Ring::Double];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 4_000_000;
    for k in 0..rings.len() {
        // Sample the square circumscribing the region's outer circle.
        let r_out = radii[k + 1];
        let (mut hits, mut sector_hits) = (0usize, [0usize; 20]);
        for _ in 0..n {
            let p = Point::new(rng.random_range(-r_out..r_out), rng.random_range(-r_out..r_out));
            let r = p.norm();
            if r >= radii[k] && r < r_out && g.ring(r) == rings[k] {
                hits += 1;
                sector_hits[g.sector_index(p)] += 1;
            }
        }
        let square = 4.0 * r_out * r_out;
        let exact = PI * (r_out * r_out - radii[k] * radii[k]);
        let mc = hits as f64 / n as f64 * square;
        assert!((mc / exact - 1.0).abs() < 0.005, "region {k}: {mc} vs {exact}");
        if k >= 2 {
            for (i, h) in sector_hits.iter().enumerate() {
                let mc = *h as f64 / n as f64 * square;
                assert!((mc / (exact / 20.0) - 1.0).abs() < 0.05, "region {k} sector {i}: {mc}");
            }
        }
    }
}

#[test]
fn comb_teeth_and_gaps() {
    let c = make_comb(5, 8).unwrap();
    for m in 1..=8u32 {
        for j in 0..=m {
            assert_eq!(c.eval(Point::scalar(2.0 * m as f64 + j as f64 / m as f64)), 1.0);
        }
        assert_eq!(c.eval(Point::scalar(2.0 * m as f64 - 0.1)), 0.0);
        // Nonzero set of a block has measure 0.2.
        let n = 200_000;
        let lo = 2.0 * m as f64 - 0.5;
        let count = (0..n).filter(|i| c.eval(Point::scalar(lo + 2.0 * (*i as f64 + 0.5) / n as f64)) > 0.0).count();
        assert!((count as f64 / n as f64 * 2.0 - 0.2).abs() < 1e-3, "block {m}");
    }
}

#[test]
fn zero_construct_envelope() {
    let h = make_zero_construct(&Dart::bern(0.3).unwrap()).unwrap();
    let z = match h {
        Payoff::ZeroConstruct(z) => z,
        _ => unreachable!(),
    };
    assert!((z.omega - PI).abs() < 1e-12);
    assert!((z.c - (7.0f64 / 3.0).ln()).abs() < 1e-12);
    assert_eq!(z.a0, 0.0);
    assert_eq!(z.d0, 2.0);
    let r10 = z.a0.abs() + 10.0 * z.b;
    for i in 0..=20_000 {
        let x = -r10 + 2.0 * r10 * i as f64 / 20_000.0;
        assert!(z.eval(x) <= z.raw(x) + 1e-9, "h > f at {x}");
        if x.abs() >= z.outer_radius() {
            assert!(z.eval(x) <= 0.0);
        }
    }
    assert!(make_zero_construct(&Dart::point_mass(0.0)).is_err());
}
