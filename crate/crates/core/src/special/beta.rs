//! Regularized incomplete beta function I_x(a, b).

use super::gamma::{ln_gamma, log1pmx, stirling_correction, LN_2PI, STIRLING_MIN};
use crate::error::{domain, Error, Result};

/// Shape parameters of the beta distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: f64,
    b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(domain("BetaParams", "a", a));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(domain("BetaParams", "b", b));
        }
        Ok(BetaParams { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// (b, a).
    pub fn swapped(&self) -> Self {
        BetaParams {
            a: self.b,
            b: self.a,
        }
    }

    /// log B(a, b).
    pub fn ln_beta(&self) -> f64 {
        ln_beta(self.a, self.b)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        reg_beta(x, *self)
    }
}

/// log B(a, b) = log Γ(a) + log Γ(b) - log Γ(a+b) for validated a, b.
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let g = |v: f64| ln_gamma(v).expect("validated shape parameter");
    let (small, large) = if a <= b { (a, b) } else { (b, a) };
    if large < STIRLING_MIN {
        return g(a) + g(b) - g(a + b);
    }
    // log Γ(large) - log Γ(large + small) without subtracting two big numbers
    let sum = large + small;
    let ratio = -(large - 0.5) * (small / large).ln_1p() - small * sum.ln() + small
        + stirling_correction(large)
        - stirling_correction(sum);
    if small < STIRLING_MIN {
        g(small) + ratio
    } else {
        0.5 * LN_2PI + (small - 0.5) * small.ln() - small + stirling_correction(small) + ratio
    }
}

/// log(x^a y^b / B(a, b)) with y = 1 - x.
///
/// With both shapes large the three logarithmic terms nearly cancel, so the
/// expression is expanded about the mode a/(a+b) where the linear parts drop
/// out exactly and only t - log(1+t) terms remain.
fn ln_beta_prefactor(x: f64, y: f64, ln_x: f64, ln_y: f64, a: f64, b: f64) -> f64 {
    if a < STIRLING_MIN || b < STIRLING_MIN {
        return a * ln_x + b * ln_y - ln_beta(a, b);
    }
    let sum = a + b;
    let (x0, y0) = (a / sum, b / sum);
    // offset taken from the smaller variable so that x, y and their roles swap cleanly
    let d = if x <= y { x - x0 } else { y0 - y };
    let term = |n: f64, t: f64, ln_v: f64, v0: f64| {
        if (-0.5..=1.0).contains(&t) {
            n * log1pmx(t)
        } else {
            n * (t - (ln_v - v0.ln()))
        }
    };
    let spread = term(a, d / x0, ln_x, x0) + term(b, -d / y0, ln_y, y0);
    let scale = 0.5 * (a.ln() + b.ln() - sum.ln() - LN_2PI);
    scale - spread - (stirling_correction(a) + stirling_correction(b)) + stirling_correction(sum)
}

/// I_x(a, b) for x in [0, 1].
///
/// Continued fraction, applied to I_{1-x}(b, a) when x > (a+1)/(a+b+2).
pub fn reg_beta(x: f64, p: BetaParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("reg_beta", "x", x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    // logs taken from whichever of x, 1 - x is smaller so that I_x(a,b) and
    // I_{1-x}(b,a) share their prefactor bit for bit
    let y = 1.0 - x;
    if x <= 0.5 {
        reg_beta_logs(x, y, x.ln(), (-x).ln_1p(), p)
    } else {
        reg_beta_logs(x, y, (-y).ln_1p(), y.ln(), p)
    }
}

/// I_x(a, b) given x, 1 - x and their logarithms, all supplied by the caller
/// so that logit-variable code keeps accuracy at both tails.
pub(crate) fn reg_beta_logs(x: f64, y: f64, ln_x: f64, ln_y: f64, p: BetaParams) -> Result<f64> {
    let (a, b) = (p.a, p.b);
    let log_prefactor = ln_beta_prefactor(x, y, ln_x, ln_y, a, b);
    if x <= (a + 1.0) / (a + b + 2.0) {
        let v = (log_prefactor + beta_fraction(a, b, x, y)?.ln()).exp();
        Ok(v.min(1.0))
    } else {
        let v = (log_prefactor + beta_fraction(b, a, y, x)?.ln()).exp();
        Ok((1.0 - v).max(0.0))
    }
}

/// Continued fraction for I_x(a,b) · B(a,b) / (x^a y^b) with y = 1 - x,
/// valid for x <= (a+1)/(a+b+2).
///
/// Written in terms of λ = a - (a+b)x, which is taken from x or from y,
/// whichever does not cancel; near the switch point the classical form
/// loses digits in every odd term when one shape is large.
fn beta_fraction(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let lambda = if a > b { (a + b) * y - b } else { a - (a + b) * x };
    let cap = 500 + (10.0 * (a + b).sqrt()) as usize;
    let c = 1.0 + lambda;
    let c0 = b / a;
    let c1 = 1.0 + 1.0 / a;
    let yp1 = y + 1.0;

    let (mut p, mut s) = (1.0, a + 1.0);
    let (mut an, mut bn) = (0.0, 1.0);
    let (mut anp1, mut bnp1) = (1.0, c / c1);
    let mut r = c1 / c;
    for n in 1..=cap {
        let n = n as f64;
        let t = n / a;
        let w = n * (b - n) * x;
        let e = a / s;
        let alpha = p * (p + c0) * e * e * (w * x);
        let e = (1.0 + t) / (c1 + t + t);
        let beta = n + w / s + e * (c + n * yp1);
        p = 1.0 + t;
        s += 2.0;

        let next_a = alpha * an + beta * anp1;
        let next_b = alpha * bn + beta * bnp1;
        an = anp1 / next_b;
        bn = bnp1 / next_b;
        anp1 = next_a / next_b;
        bnp1 = 1.0;

        let r0 = r;
        r = anp1;
        if (r - r0).abs() <= f64::EPSILON * r {
            return Ok(r);
        }
    }
    Err(Error::NoConvergence {
        routine: "reg_beta continued fraction",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(a: f64, b: f64) -> BetaParams {
        BetaParams::new(a, b).unwrap()
    }

    #[test]
    fn uniform_and_symmetric() {
        for &x in &[0.0, 0.1, 0.37, 0.5, 0.99, 1.0] {
            assert!((reg_beta(x, bp(1.0, 1.0)).unwrap() - x).abs() < 4e-16);
        }
        assert!((reg_beta(0.5, bp(2.0, 2.0)).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn polynomial_case() {
        // I_x(2,3) = 6x² - 8x³ + 3x⁴
        for &x in &[0.05, 0.3, 0.6, 0.95] {
            let exact = x * x * (6.0 - 8.0 * x + 3.0 * x * x);
            assert!((reg_beta(x, bp(2.0, 3.0)).unwrap() - exact).abs() < 1e-15, "{x}");
        }
        assert!((reg_beta(0.3, bp(2.0, 3.0)).unwrap() - 0.3483).abs() < 1e-12);
    }

    #[test]
    fn arcsine_case() {
        // I_x(1/2, 1/2) = (2/π) asin(√x)
        for &x in &[0.01f64, 0.2, 0.5, 0.8, 0.999] {
            let exact = 2.0 / std::f64::consts::PI * x.sqrt().asin();
            assert!((reg_beta(x, bp(0.5, 0.5)).unwrap() - exact).abs() < 2e-15, "{x}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(reg_beta(-0.1, bp(1.0, 1.0)).is_err());
        assert!(reg_beta(1.1, bp(1.0, 1.0)).is_err());
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(1.0, f64::NAN).is_err());
    }
}
