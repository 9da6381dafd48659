//! Schwarzian-Newton root finding.
//!
//! The Schwarzian-Newton method (SNM) is the fixed-point iteration
//! `x ↦ x - arctan(Ω(x), h(x))`, where `Ω = {f,x}/2` is half the Schwarzian
//! derivative of `f` and `h = f / (f' - f f''/(2f'))` is the Halley
//! correction. It is exact for every function of constant Schwarzian
//! derivative, converges with order four, and reduces to Halley's method as
//! Ω → 0.
//!
//! The crate provides the step maps and a safeguarded driver ([`solve`]),
//! the osculating-curve view of the method, and three inversion solvers built
//! on it: gamma quantiles ([`gamma_quantile`]), beta quantiles
//! ([`beta_quantile`]) and the amplitude of the incomplete elliptic integral of
//! the second kind ([`elliptic_inverse`]).

pub mod beta_quantile;
pub mod cli;
pub mod elliptic_inverse;
mod error;
pub mod gamma_quantile;
mod gtan;
pub mod oracle;
mod osculating;
mod problem;
mod solver;
pub mod special;
mod step;

pub use error::{Error, Result};
pub use gtan::{gatan, gatan_with_threshold, gtan, gtan_with_threshold, DEFAULT_SERIES_THRESHOLD};
pub use osculating::{halley_hyperbola, osculating_eval, osculating_fit, osculating_root, OsculatingModel};
pub use problem::{FnProblem, Interval, OmegaMonotoneHint, Problem, ProblemEvaluation};
pub use solver::{solve, IterationRecord, Method, Safeguard, SolveOptions, SolveReport, StopReason};
pub use step::{halley_step, newton_step, schwarzian_omega, snm_step, snm_step_with_threshold};
