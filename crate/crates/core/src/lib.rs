//! Where should you stand when throwing darts?
//!
//! A dart `X` is the landing offset when aiming at the origin from distance one;
//! standing at distance `d` and aiming at `a` lands at `a + dX`. For a payoff `f`
//! (bounded above) this crate computes the best-aim expected payoff
//!
//! ```text
//! g(d) = sup_a E f(a + dX)
//! ```
//!
//! and the tooling around it: a catalog of darts with exact characteristic
//! functions and samplers ([`dart`]), a catalog of payoffs including the standard
//! board and several explicit constructions ([`payoff`]), error-controlled
//! expectation engines ([`expectation`]), a multistart aim optimizer that traces
//! g-curves and flags increases ([`optimizer`]), and characteristic-function
//! analytics ([`analysis`]).
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod dart;
pub mod error;
pub mod expectation;
pub mod geom;
pub mod math;
pub mod optimizer;
pub mod payoff;
pub mod quad;
pub mod rng;

pub use dart::{Atom, Dart};
pub use error::{AnalysisError, DartError, ExpectError, OptError, PayoffError};
pub use expectation::{expect, expect_cos_closed, Engine, EvalResult, EvalSpec};
pub use geom::Point;
pub use num_complex::Complex64;
pub use optimizer::{best_aim, dartboard_sweep, g_curve, AimResult, AimStatus, GCurve, SearchBox};
pub use payoff::{BoardGeometry, Payoff};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
