//! One-step iteration maps for the Newton, Halley and Schwarzian-Newton
//! methods.
//!
//! All three read a [`ProblemEvaluation`]. The Halley correction is exactly
//! `h = Φ/Φ'`; the SNM replaces it by `arctan(Ω, h)`, which reduces to `h` when
//! Ω = 0.

use crate::error::{domain, Error, Result};
use crate::gtan::{gatan_with_threshold, DEFAULT_SERIES_THRESHOLD};
use crate::problem::ProblemEvaluation;

/// Half the Schwarzian derivative, `(f'''/f' - 1.5 (f''/f')²) / 2`.
pub fn schwarzian_omega(fp: f64, fpp: f64, fppp: f64) -> Result<f64> {
    if fp == 0.0 || !fp.is_finite() {
        return Err(domain("schwarzian_omega", "fp", fp));
    }
    let r = fpp / fp;
    Ok(0.5 * (fppp / fp - 1.5 * r * r))
}

pub fn newton_step(e: &ProblemEvaluation) -> Result<f64> {
    Ok(e.x + newton_correction(e)?)
}

pub fn halley_step(e: &ProblemEvaluation) -> Result<f64> {
    Ok(e.x + halley_correction(e)?)
}

pub fn snm_step(e: &ProblemEvaluation) -> Result<f64> {
    snm_step_with_threshold(e, DEFAULT_SERIES_THRESHOLD)
}

pub fn snm_step_with_threshold(e: &ProblemEvaluation, series_threshold: f64) -> Result<f64> {
    Ok(e.x + snm_correction(e, series_threshold)?)
}

pub(crate) fn newton_correction(e: &ProblemEvaluation) -> Result<f64> {
    if e.fp == 0.0 || !e.fp.is_finite() {
        return Err(domain("newton_step", "fp", e.fp));
    }
    Ok(-e.f / e.fp)
}

pub(crate) fn halley_correction(e: &ProblemEvaluation) -> Result<f64> {
    let den = e.denominator();
    if den == 0.0 || !e.h.is_finite() {
        return Err(Error::DegenerateDenominator { x: e.x });
    }
    Ok(-e.h)
}

pub(crate) fn snm_correction(e: &ProblemEvaluation, series_threshold: f64) -> Result<f64> {
    halley_correction(e)?;
    match gatan_with_threshold(e.omega, e.h, series_threshold) {
        Ok(v) => Ok(-v),
        Err(Error::StepUndefined { .. }) => Err(Error::StepUndefined { x: e.x }),
        Err(other) => Err(other),
    }
}
