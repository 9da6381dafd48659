//! Incomplete elliptic integral of the second kind.
//!
//! `m` is the modulus throughout: the integrand is √(1 - m² sin² t).

use std::f64::consts::FRAC_PI_2;

use super::carlson::{carlson_rd, carlson_rf};
use crate::error::{domain, Result};

/// E(φ | m) = ∫₀^φ √(1 - m² sin² t) dt for φ in [0, π/2], m in [0, 1].
pub fn ellip_e_inc(phi: f64, m: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&phi) {
        return Err(domain("ellip_e_inc", "phi", phi));
    }
    if !(0.0..=1.0).contains(&m) {
        return Err(domain("ellip_e_inc", "m", m));
    }
    if phi == 0.0 {
        return Ok(0.0);
    }
    if m == 0.0 {
        return Ok(phi);
    }
    let (s, c) = phi.sin_cos();
    if m == 1.0 {
        return Ok(s);
    }
    let k = m * m;
    let c2 = c * c;
    // 1 - m² s², written to avoid cancellation near φ = π/2.
    let y = c2 + s * s * (1.0 - m) * (1.0 + m);
    Ok(s * carlson_rf(c2, y, 1.0)? - k * s * s * s / 3.0 * carlson_rd(c2, y, 1.0)?)
}

/// Complete integral E(m) = E(π/2 | m).
pub fn ellip_e_complete(m: f64) -> Result<f64> {
    ellip_e_inc(FRAC_PI_2, m)
}
