//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use snm::{gatan, FnProblem, Interval, OsculatingModel};

/// A member of the constant-Schwarzian family
/// y(x) = (T + A)/(B T + C), T = tan(λ, x - s), with its root.
#[derive(Debug, Clone, Copy)]
pub struct FamilyCase {
    pub model: OsculatingModel,
    pub root: f64,
}

impl FamilyCase {
    pub fn problem(&self) -> FnProblem<impl Fn(f64) -> [f64; 4]> {
        let model = self.model;
        FnProblem::new(move |x| model.derivatives(x).unwrap_or([f64::NAN; 4]), self.domain())
    }

    /// Principal branch of tan(λ, x - s).
    pub fn domain(&self) -> Interval {
        let m = self.model;
        if m.lambda > 0.0 {
            let r = FRAC_PI_2 / m.lambda.sqrt();
            Interval::open(m.x_anchor - r, m.x_anchor + r)
        } else {
            Interval::real_line()
        }
    }

    fn denominator(&self, x: f64) -> Option<f64> {
        let t = snm::gtan(self.model.lambda, x - self.model.x_anchor).ok()?;
        Some(self.model.b * t + self.model.c)
    }

    /// A start from which one step must land on the root: inside the branch,
    /// on the same side of every pole as the root, and closer than the
    /// principal range of arctan(λ, ·). The start must also keep away from the
    /// poles of tan and the flat tails of tanh, where f no longer pins down
    /// the root in double precision.
    pub fn valid_start<R: Rng>(&self, rng: &mut R) -> Option<f64> {
        let lambda = self.model.lambda;
        let reach = if lambda > 0.0 { 0.9 * FRAC_PI_2 / lambda.sqrt() } else { 3.0 };
        let x0 = self.root + rng.gen_range(-reach..reach);
        if !self.domain().contains(x0) {
            return None;
        }
        let limit = if lambda > 0.0 { 0.9 * FRAC_PI_2 } else { 4.0 };
        if (x0 - self.model.x_anchor).abs() * lambda.abs().sqrt() > limit {
            return None;
        }
        let (w0, w1) = (self.denominator(x0)?, self.denominator(self.root)?);
        (w0 * w1 > 0.0 && w0.abs() > 0.05).then_some(x0)
    }
}

/// Random family member with λ ∈ [-4, 4] and C - AB away from 0, or None
/// when the root is not defined.
pub fn random_family<R: Rng>(rng: &mut R) -> Option<FamilyCase> {
    let lambda: f64 = rng.gen_range(-4.0..4.0);
    let s = rng.gen_range(-2.0..2.0);
    let a: f64 = rng.gen_range(-1.5..1.5);
    let b: f64 = rng.gen_range(-1.0..1.0);
    let c: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    if (c - a * b).abs() < 0.1 {
        return None;
    }
    let root = s + gatan(lambda, -a).ok()?;
    let model = OsculatingModel { x_anchor: s, lambda, a, b, c, d: 1.0 };
    Some(FamilyCase { model, root })
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
