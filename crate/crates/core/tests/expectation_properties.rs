use darts_core::{expect, expect_cos_closed, Dart, Engine, EvalSpec, Payoff, Point};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

fn quad(tol: f64) -> EvalSpec {
    EvalSpec { engine: Engine::Quad, abs_tol: tol, ..EvalSpec::default() }
}

fn mc(seed: u64) -> EvalSpec {
    EvalSpec { engine: Engine::MonteCarlo, abs_tol: 1e-2, seed, max_evals: 1 << 18 }
}

fn smooth_darts() -> Vec<Dart> {
    vec![
        Dart::normal(0.0, 1.0).unwrap(),
        Dart::uniform(-0.5, 1.5).unwrap(),
        Dart::SemiCircle,
        Dart::cauchy(0.0, 0.5).unwrap(),
        Dart::mixture(vec![(0.4, Dart::point_mass(0.3)), (0.6, Dart::normal(1.0, 0.5).unwrap())]).unwrap(),
    ]
}

fn smooth_payoffs() -> Vec<Payoff> {
    vec![
        Payoff::gauss_bump(Point::scalar(0.5), 0.7, 1).unwrap(),
        Payoff::cosine(),
        Payoff::piecewise_linear(vec![(-2.0, 0.0), (0.0, 1.0), (1.0, 0.5), (3.0, 0.0)]).unwrap(),
    ]
}

#[test]
fn quad_and_monte_carlo_agree() {
    let darts = smooth_darts();
    let payoffs = smooth_payoffs();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..20 {
        let dart = &darts[rng.random_range(0..darts.len())];
        let f = &payoffs[rng.random_range(0..payoffs.len())];
        let a = Point::scalar(rng.random_range(-2.0..2.0));
        let d = rng.random_range(0.3..3.0);
        let q = expect(dart, f, a, d, &quad(1e-8)).unwrap();
        let m = expect(dart, f, a, d, &mc(case)).unwrap();
        assert_eq!(m.engine_used, Engine::MonteCarlo);
        assert!((q.value - m.value).abs() <= q.err_est + m.err_est, "case {case}: {dart:?} {f:?} {q:?} {m:?}");
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let dart = Dart::normal(0.0, 1.0).unwrap();
    let f = Payoff::SquareWave;
    let a = expect(&dart, &f, Point::scalar(0.2), 1.3, &mc(42)).unwrap();
    let b = expect(&dart, &f, Point::scalar(0.2), 1.3, &mc(42)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let c = expect(&dart, &f, Point::scalar(0.2), 1.3, &mc(43)).unwrap();
    assert_ne!(a.value.to_bits(), c.value.to_bits());
}

#[test]
fn exhausted_budget_is_flagged() {
    let spec = EvalSpec { engine: Engine::MonteCarlo, abs_tol: 1e-9, seed: 1, max_evals: 1000 };
    let r = expect(&Dart::normal(0.0, 1.0).unwrap(), &Payoff::SquareWave, Point::ZERO, 1.0, &spec).unwrap();
    assert!(!r.within_budget);
    assert!(r.err_est > 1e-9);
}

#[test]
fn documented_examples() {
    let spec = EvalSpec::default();
    let u = Dart::uniform(0.0, 2.0).unwrap();
    assert!((expect(&u, &Payoff::SquareWave, Point::ZERO, 1.0, &spec).unwrap().value - 0.5).abs() <= 1e-6);
    for d in [0.1, 3.0, 70.0] {
        assert!((expect(&Dart::point_mass(0.0), &Payoff::cosine(), Point::ZERO, d, &spec).unwrap().value - 1.0).abs() < 1e-15);
    }
    let mix = Dart::mixture(vec![(0.5, Dart::point_mass(0.0)), (0.5, Dart::normal(0.0, 1.0).unwrap())]).unwrap();
    let step = Payoff::point_step(1.0, 1.0, 0.5).unwrap();
    let want = 0.5 + 0.25 * erfc(1.0 / 2f64.sqrt());
    assert!((expect(&mix, &step, Point::ZERO, 1.0, &spec).unwrap().value - want).abs() <= 1e-6);
    assert!(expect_cos_closed(&Dart::bern(0.5).unwrap(), Point::scalar(0.3), std::f64::consts::PI).unwrap().abs() < 1e-15);
    assert!((expect_cos_closed(&Dart::normal(0.0, 1.0).unwrap(), Point::ZERO, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
}

#[test]
fn disc_on_board_exact_matches_monte_carlo() {
    let board = Payoff::dartboard();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let exact = EvalSpec { engine: Engine::Exact, ..EvalSpec::default() };
    for case in 0..12 {
        let a = Point::new(rng.random_range(-150.0..150.0), rng.random_range(-150.0..150.0));
        let d = rng.random_range(2.0..120.0);
        let e = expect(&Dart::UniformDisc, &board, a, d, &exact).unwrap();
        let spec = EvalSpec { engine: Engine::MonteCarlo, abs_tol: 1e-1, seed: case, max_evals: 1 << 20 };
        let m = expect(&Dart::UniformDisc, &board, a, d, &spec).unwrap();
        assert!((e.value - m.value).abs() <= e.err_est + m.err_est, "{a:?} d={d}: {e:?} vs {m:?}");
    }
}

#[test]
fn disc_on_board_limits() {
    let board = Payoff::dartboard();
    let spec = EvalSpec::default();
    // A tiny disc inside the treble 20 scores 60; a disc covering everything averages over its area.
    let r = expect(&Dart::UniformDisc, &board, Point::new(0.0, 103.0), 3.0, &spec).unwrap();
    assert!((r.value - 60.0).abs() < 1e-9);
    let off = expect(&Dart::UniformDisc, &board, Point::new(400.0, 0.0), 50.0, &spec).unwrap();
    assert_eq!(off.value, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_in_the_payoff(alpha in 0.0f64..3.0, beta in 0.0f64..3.0, a in -2.0f64..2.0, d in 0.2f64..4.0, idx in 0usize..5) {
        let xs = [-2.0, -0.5, 0.0, 1.0, 2.5];
        let fv = [0.0, 1.0, 0.3, -0.4, 0.0];
        let gv = [1.0, 0.0, 2.0, 0.5, 1.0];
        let pwl = |v: &[f64]| Payoff::piecewise_linear(xs.iter().copied().zip(v.iter().copied()).collect()).unwrap();
        let combo: Vec<f64> = fv.iter().zip(&gv).map(|(f, g)| alpha * f + beta * g).collect();
        let dart = &smooth_darts()[idx];
        let tol = 1e-7;
        let e = |p: &Payoff| expect(dart, p, Point::scalar(a), d, &quad(tol)).unwrap().value;
        let lhs = e(&pwl(&combo));
        let rhs = alpha * e(&pwl(&fv)) + beta * e(&pwl(&gv));
        prop_assert!((lhs - rhs).abs() <= 2.0 * tol * (1.0 + alpha + beta));
    }

    #[test]
    fn affine_substitution(scale in 0.2f64..3.0, shift in -2.0f64..2.0, a in -2.0f64..2.0, d in 0.2f64..3.0, idx in 0usize..3) {
        let base = &smooth_darts()[idx];
        let f = &smooth_payoffs()[0];
        let aff = Dart::affine(scale, Point::scalar(shift), base.clone()).unwrap();
        let spec = quad(1e-8);
        let lhs = expect(&aff, f, Point::scalar(a), d, &spec).unwrap().value;
        let rhs = expect(base, f, Point::scalar(a + d * shift), d * scale, &spec).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 2e-8);
    }

    #[test]
    fn cosine_closed_form_matches_quadrature(idx in 0usize..3, a in -3.0f64..3.0, d in 0.1f64..6.0) {
        let dart = &smooth_darts()[idx];
        let closed = expect_cos_closed(dart, Point::scalar(a), d).unwrap();
        let q = expect(dart, &Payoff::cosine(), Point::scalar(a), d, &quad(1e-9)).unwrap();
        prop_assert!((closed - q.value).abs() <= 1e-6 + q.err_est);
    }
}

#[test]
fn bad_inputs_are_errors() {
    let n = Dart::normal(0.0, 1.0).unwrap();
    let spec = EvalSpec::default();
    assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 0.0, &spec).is_err());
    assert!(expect(&n, &Payoff::dartboard(), Point::ZERO, 1.0, &spec).is_err());
    assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 1.0, &spec.with_tol(0.0)).is_err());
    assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 1.0, &spec.with_budget(10)).is_err());
    let exact = EvalSpec { engine: Engine::Exact, ..spec };
    assert!(expect(&n, &Payoff::SquareWave, Point::ZERO, 1.0, &exact).is_err());
}
