//! Generalized tangent `tan(λ, x)` and its inverse.
//!
//! ```text
//!            ⎧ tan(√λ x) / √λ        λ > 0
//! tan(λ,x) = ⎨ x                     λ = 0
//!            ⎩ tanh(√-λ x) / √-λ     λ < 0
//! ```
//!
//! Both functions are odd in their second argument and analytic in λ. Close to
//! λ = 0 the closed forms lose digits to cancellation, so for `|λ x²|` below a
//! threshold the three-term odd Taylor series is used instead.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

/// Default cutoff on `|λ u²|` below which the series branch is used.
pub const DEFAULT_SERIES_THRESHOLD: f64 = 1e-6;

/// `tan(λ, x)` with the default series threshold.
pub fn gtan(lambda: f64, x: f64) -> Result<f64> {
    gtan_with_threshold(lambda, x, DEFAULT_SERIES_THRESHOLD)
}

/// `tan(λ, x)`.
///
/// For λ > 0 the principal branch is required: `|x|·√λ < π/2`.
pub fn gtan_with_threshold(lambda: f64, x: f64, series_threshold: f64) -> Result<f64> {
    let t = lambda * x * x;
    if t.abs() < series_threshold {
        // x + λx³/3 + 2λ²x⁵/15
        return Ok(x * (1.0 + t * (1.0 / 3.0 + t * (2.0 / 15.0))));
    }
    if lambda > 0.0 {
        let s = lambda.sqrt();
        if (x * s).abs() >= FRAC_PI_2 {
            return Err(domain("gtan", "x", x));
        }
        Ok(((s * x.abs()).tan() / s).copysign(x))
    } else {
        let s = (-lambda).sqrt();
        Ok(((s * x.abs()).tanh() / s).copysign(x))
    }
}

/// `arctan(λ, u)` with the default series threshold.
pub fn gatan(lambda: f64, u: f64) -> Result<f64> {
    gatan_with_threshold(lambda, u, DEFAULT_SERIES_THRESHOLD)
}

/// `arctan(λ, u)`, the inverse of [`gtan`] in its second argument.
///
/// For λ < 0 the arctanh branch requires `|u|·√-λ < 1`; outside that range
/// [`Error::StepUndefined`] is returned (with `x` set to `u`), which is the
/// signal the solver uses to fall back to a Halley step.
pub fn gatan_with_threshold(lambda: f64, u: f64, series_threshold: f64) -> Result<f64> {
    let t = lambda * u * u;
    if t.abs() < series_threshold {
        // u - λu³/3 + λ²u⁵/5
        return Ok(u * (1.0 - t * (1.0 / 3.0 - t * (1.0 / 5.0))));
    }
    if lambda > 0.0 {
        let s = lambda.sqrt();
        Ok(((s * u.abs()).atan() / s).copysign(u))
    } else {
        let s = (-lambda).sqrt();
        let arg = s * u.abs();
        if !(arg < 1.0) {
            return Err(Error::StepUndefined { x: u });
        }
        Ok((arg.atanh() / s).copysign(u))
    }
}
