//! Fixed-point driver shared by the three iteration maps.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gtan::DEFAULT_SERIES_THRESHOLD;
use crate::problem::{Problem, ProblemEvaluation};
use crate::step::{halley_correction, newton_correction, snm_correction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Snm,
    Halley,
    Newton,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Snm, Method::Halley, Method::Newton];

    pub fn name(self) -> &'static str {
        match self {
            Method::Snm => "snm",
            Method::Halley => "halley",
            Method::Newton => "newton",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "snm" => Ok(Method::Snm),
            "halley" => Ok(Method::Halley),
            "newton" => Ok(Method::Newton),
            other => Err(format!("unknown method '{other}' (expected snm, halley or newton)")),
        }
    }
}

/// What to do when a step leaves the problem domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Safeguard {
    /// Move to the midpoint between the current iterate and the violated
    /// endpoint.
    ClampToDomain,
    /// Stop with [`StopReason::DomainExit`].
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// |f| threshold; 0 disables the residual test.
    pub residual_tol: f64,
    pub max_iter: usize,
    pub method: Method,
    pub series_threshold: f64,
    pub safeguard: Safeguard,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            abs_tol: 1e-15,
            rel_tol: 4.0 * f64::EPSILON,
            residual_tol: 0.0,
            max_iter: 30,
            method: Method::Snm,
            series_threshold: DEFAULT_SERIES_THRESHOLD,
            safeguard: Safeguard::ClampToDomain,
        }
    }
}

impl SolveOptions {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidOptions("abs_tol must be > 0"));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidOptions("rel_tol must be >= 0"));
        }
        if !(self.residual_tol >= 0.0) {
            return Err(Error::InvalidOptions("residual_tol must be >= 0"));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidOptions("max_iter must be >= 1"));
        }
        if !(self.series_threshold > 0.0 && self.series_threshold < 1.0) {
            return Err(Error::InvalidOptions("series_threshold must lie in (0, 1)"));
        }
        Ok(())
    }

    fn step_tolerance(&self, x: f64) -> f64 {
        self.abs_tol + self.rel_tol * x.abs()
    }
}

/// One accepted iteration `x -> x + step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub n: usize,
    pub x: f64,
    pub f: f64,
    pub h: f64,
    pub omega: f64,
    pub step: f64,
    /// The SNM step was undefined and a Halley step was taken, or the step
    /// left the domain and the safeguard moved it.
    pub fallback_used: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    StepTol,
    ResidualTol,
    MaxIter,
    DerivativeVanished,
    DomainExit,
}

impl StopReason {
    pub fn is_converged(self) -> bool {
        matches!(self, StopReason::StepTol | StopReason::ResidualTol)
    }

    pub fn name(self) -> &'static str {
        match self {
            StopReason::StepTol => "StepTol",
            StopReason::ResidualTol => "ResidualTol",
            StopReason::MaxIter => "MaxIter",
            StopReason::DerivativeVanished => "DerivativeVanished",
            StopReason::DomainExit => "DomainExit",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of [`solve`].
///
/// `trace` holds the accepted iterations only. The evaluation at `root` that
/// detected convergence (whose proposed step was below tolerance) is not an
/// iteration; its residual is kept in `residual`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub root: f64,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub reason: StopReason,
    /// f at `root`.
    pub residual: f64,
}

impl SolveReport {
    /// x_0, x_1, ..., root.
    pub fn iterates(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.trace.iter().map(|r| r.x).collect();
        xs.push(self.root);
        xs
    }

    /// True when no two accepted steps have opposite signs.
    pub fn is_monotone(&self) -> bool {
        self.is_monotone_within(0.0)
    }

    /// As [`is_monotone`](Self::is_monotone), ignoring steps no larger than
    /// `rel · max(1, |x|)`. Lets round-off jitter at the root pass.
    pub fn is_monotone_within(&self, rel: f64) -> bool {
        let big = |r: &&IterationRecord| r.step.abs() > rel * r.x.abs().max(1.0);
        let up = self.trace.iter().filter(big).any(|r| r.step > 0.0);
        let down = self.trace.iter().filter(big).any(|r| r.step < 0.0);
        !(up && down)
    }

    /// Applies `map` to the root. Used to report the result of a solve carried
    /// out in a transformed variable; the trace stays in that variable.
    pub fn map_root(mut self, map: impl Fn(f64) -> f64) -> Self {
        self.root = map(self.root);
        self
    }
}

enum Proposal {
    Step { step: f64, fallback: bool },
    Degenerate,
}

fn propose(e: &ProblemEvaluation, opts: &SolveOptions) -> Result<Proposal> {
    let raw = match opts.method {
        Method::Newton => newton_correction(e).map(|s| (s, false)),
        Method::Halley => halley_correction(e).map(|s| (s, false)),
        Method::Snm => match snm_correction(e, opts.series_threshold) {
            Err(Error::StepUndefined { .. }) => halley_correction(e).map(|s| (s, true)),
            other => other.map(|s| (s, false)),
        },
    };
    match raw {
        Ok((step, fallback)) if step.is_finite() => Ok(Proposal::Step { step, fallback }),
        Ok(_) | Err(Error::DegenerateDenominator { .. }) => Ok(Proposal::Degenerate),
        Err(Error::Domain { routine: "newton_step", .. }) => Ok(Proposal::Degenerate),
        Err(other) => Err(other),
    }
}

/// Steps below this fraction of max(1, |x|) may be round-off.
const STALL_SCALE: f64 = 1.5e-8;

/// True when a tiny step reverses the previous one without shrinking: the
/// iterate is bouncing on the noise floor of f and cannot improve.
fn is_stalled(step: f64, prev_step: Option<f64>, x: f64) -> bool {
    let Some(prev) = prev_step else {
        return false;
    };
    step.signum() != prev.signum()
        && step.abs() >= 0.5 * prev.abs()
        && step.abs() <= STALL_SCALE * x.abs().max(1.0)
}

/// Iterates the selected method from `x0`.
///
/// Stops when a proposed step satisfies `|Δx| <= abs_tol + rel_tol·|x|` or
/// stalls at the round-off level (a tiny step that reverses and does not
/// shrink the previous one; also reported as [`StopReason::StepTol`]), when
/// `|f| <= residual_tol`, or after `max_iter` accepted iterations. An
/// undefined SNM step (arctanh out of range) is replaced by a Halley step. A
/// step leaving the domain is handled per `opts.safeguard`.
///
/// A vanishing f' or a vanishing Φ' (the denominator of the Halley
/// correction) stops the iteration with [`StopReason::DerivativeVanished`].
/// Errors from evaluating the problem are returned as `Err`.
pub fn solve<P: Problem + ?Sized>(problem: &P, x0: f64, opts: &SolveOptions) -> Result<SolveReport> {
    opts.validate()?;
    let domain = problem.domain();
    if !x0.is_finite() || !domain.contains(x0) {
        return Err(Error::StartOutsideDomain { x0 });
    }

    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut x = x0;
    let mut prev_step: Option<f64> = None;
    let finish = |trace: Vec<IterationRecord>, root: f64, residual: f64, reason: StopReason| {
        Ok(SolveReport {
            root,
            iterations: trace.len(),
            trace,
            converged: reason.is_converged(),
            reason,
            residual,
        })
    };

    loop {
        let e = problem.evaluate(x)?;
        if e.fp == 0.0 {
            return finish(trace, x, e.f, StopReason::DerivativeVanished);
        }
        if opts.residual_tol > 0.0 && e.f.abs() <= opts.residual_tol {
            return finish(trace, x, e.f, StopReason::ResidualTol);
        }
        let (mut step, mut fallback_used) = match propose(&e, opts)? {
            Proposal::Step { step, fallback } => (step, fallback),
            Proposal::Degenerate => return finish(trace, x, e.f, StopReason::DerivativeVanished),
        };
        if step.abs() <= opts.step_tolerance(x) || is_stalled(step, prev_step, x) {
            return finish(trace, x, e.f, StopReason::StepTol);
        }
        if trace.len() >= opts.max_iter {
            return finish(trace, x, e.f, StopReason::MaxIter);
        }

        let mut next = x + step;
        if !domain.contains(next) {
            if opts.safeguard == Safeguard::Fail {
                return finish(trace, x, e.f, StopReason::DomainExit);
            }
            let endpoint = if next <= domain.lo { domain.lo } else { domain.hi };
            if endpoint.is_infinite() {
                return finish(trace, x, e.f, StopReason::DomainExit);
            }
            next = 0.5 * (x + endpoint);
            step = next - x;
            fallback_used = true;
            if !domain.contains(next) || next == x {
                return finish(trace, x, e.f, StopReason::DomainExit);
            }
        }

        prev_step = Some(step);
        trace.push(IterationRecord {
            n: trace.len(),
            x,
            f: e.f,
            h: e.h,
            omega: e.omega,
            step,
            fallback_used,
        });
        x = next;
    }
}
