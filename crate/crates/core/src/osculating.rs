//! Osculating curves of the constant-Schwarzian family.
//!
//! The model `y(x) = (T + A)/(B T + C)` with `T = tan(λ, x - x_n)` has
//! Schwarzian derivative `2λ`. Matching f and its first three derivatives at
//! `x_n` fixes λ = Ω(x_n) and A, B, C, and the zero of the model is the next
//! SNM iterate. With λ = 0 the same construction is Halley's tangent
//! hyperbola.

use crate::error::{Error, Result};
use crate::gtan::{gatan, gtan};
use crate::problem::ProblemEvaluation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsculatingModel {
    pub x_anchor: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// 2 f'² - f f'' at the anchor.
    pub d: f64,
}

/// Fits the SNM osculating curve at `e.x`.
pub fn osculating_fit(e: &ProblemEvaluation) -> Result<OsculatingModel> {
    hyperbola(e, e.omega)
}

/// The Halley tangent hyperbola (the λ = 0 member) at `e.x`.
pub fn halley_hyperbola(e: &ProblemEvaluation) -> Result<OsculatingModel> {
    hyperbola(e, 0.0)
}

fn hyperbola(e: &ProblemEvaluation, lambda: f64) -> Result<OsculatingModel> {
    let fpp = e.fpp();
    let d = 2.0 * e.fp * e.fp - e.f * fpp;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::DegenerateDenominator { x: e.x });
    }
    Ok(OsculatingModel {
        x_anchor: e.x,
        lambda,
        a: 2.0 * e.f * e.fp / d,
        b: -fpp / d,
        c: 2.0 * e.fp / d,
        d,
    })
}

/// Zero of the model, `x_n - arctan(λ, A)`.
pub fn osculating_root(m: &OsculatingModel) -> Result<f64> {
    Ok(m.x_anchor - gatan(m.lambda, m.a)?)
}

/// Value of the model at `x`.
pub fn osculating_eval(m: &OsculatingModel, x: f64) -> Result<f64> {
    let t = gtan(m.lambda, x - m.x_anchor)?;
    let w = m.b * t + m.c;
    if w == 0.0 {
        return Err(Error::Pole { x });
    }
    Ok((t + m.a) / w)
}

impl OsculatingModel {
    /// `[y, y', y'', y''']` at `x`, from `T' = 1 + λT²`.
    pub fn derivatives(&self, x: f64) -> Result<[f64; 4]> {
        let t = gtan(self.lambda, x - self.x_anchor)?;
        let w = self.b * t + self.c;
        if w == 0.0 {
            return Err(Error::Pole { x });
        }
        let k = self.c - self.a * self.b;
        let t1 = 1.0 + self.lambda * t * t;
        let t2 = 2.0 * self.lambda * t * t1;
        let t3 = 2.0 * self.lambda * (t1 * t1 + t * t2);
        let w2 = w * w;
        let w3 = w2 * w;
        let w4 = w2 * w2;
        let b = self.b;
        Ok([
            (t + self.a) / w,
            k * t1 / w2,
            k * (t2 / w2 - 2.0 * b * t1 * t1 / w3),
            k * (t3 / w2 - 6.0 * b * t1 * t2 / w3 + 6.0 * b * b * t1 * t1 * t1 / w4),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::snm_step;

    fn eval_tan(x: f64) -> ProblemEvaluation {
        let t = x.tan();
        let s2 = 1.0 + t * t;
        ProblemEvaluation::from_derivatives(x, t, s2, 2.0 * t * s2, 2.0 * s2 * (1.0 + 3.0 * t * t))
            .unwrap()
    }

    #[test]
    fn anchored_at_root() {
        let e = ProblemEvaluation::new(0.7, 0.0, 2.0, 0.3, -0.2);
        let m = osculating_fit(&e).unwrap();
        assert_eq!(m.a, 0.0);
        assert_eq!(osculating_root(&m).unwrap(), 0.7);
    }

    #[test]
    fn reproduces_tan() {
        let m = osculating_fit(&eval_tan(1.2)).unwrap();
        assert!(osculating_root(&m).unwrap().abs() < 1e-12);
        for &x in &[-0.3, 0.0, 0.8, 1.4] {
            let y = osculating_eval(&m, x).unwrap();
            assert!((y - x.tan()).abs() < 1e-12 * (1.0 + x.tan().abs()), "{x}");
        }
    }

    #[test]
    fn eval_at_anchor_and_root() {
        let e = ProblemEvaluation::new(1.0, 0.4, 1.5, 0.7, -0.3);
        let m = osculating_fit(&e).unwrap();
        assert!((osculating_eval(&m, 1.0).unwrap() - 0.4).abs() < 1e-15);
        let r = osculating_root(&m).unwrap();
        assert!(osculating_eval(&m, r).unwrap().abs() < 1e-15);
        assert!((r - snm_step(&e).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_line() {
        let m = OsculatingModel {
            x_anchor: 2.0,
            lambda: 0.0,
            a: 0.5,
            b: 0.0,
            c: 1.0,
            d: 1.0,
        };
        assert_eq!(osculating_eval(&m, 3.0).unwrap(), 1.5);
    }

    #[test]
    fn pole_reported() {
        let m = OsculatingModel {
            x_anchor: 0.0,
            lambda: 0.0,
            a: 0.0,
            b: 1.0,
            c: 1.0,
            d: 1.0,
        };
        assert!(matches!(osculating_eval(&m, -1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn matches_four_derivatives() {
        let e = ProblemEvaluation::new(0.3, -0.2, 1.1, 0.6, 0.45);
        let m = osculating_fit(&e).unwrap();
        let [y, y1, y2, y3] = m.derivatives(0.3).unwrap();
        let rel = |u: f64, v: f64| (u - v).abs() <= 1e-12 * v.abs().max(1e-300);
        assert!(rel(y, e.f));
        assert!(rel(y1, e.fp));
        assert!(rel(y2, e.fpp()));
        assert!(rel(y3, e.fppp()));
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let m = OsculatingModel {
            x_anchor: 0.2,
            lambda: -0.7,
            a: 0.3,
            b: 0.4,
            c: 1.3,
            d: 1.0,
        };
        let x = 0.5;
        let h = 1e-3;
        let v = |x: f64| osculating_eval(&m, x).unwrap();
        let d = m.derivatives(x).unwrap();
        let fd1 = (v(x - 2.0 * h) - 8.0 * v(x - h) + 8.0 * v(x + h) - v(x + 2.0 * h)) / (12.0 * h);
        assert!((fd1 - d[1]).abs() < 1e-9);
        let dd = |x: f64| m.derivatives(x).unwrap()[1];
        let fd2 = (dd(x - 2.0 * h) - 8.0 * dd(x - h) + 8.0 * dd(x + h) - dd(x + 2.0 * h)) / (12.0 * h);
        assert!((fd2 - d[2]).abs() < 1e-9);
        let ddd = |x: f64| m.derivatives(x).unwrap()[2];
        let fd3 = (ddd(x - 2.0 * h) - 8.0 * ddd(x - h) + 8.0 * ddd(x + h) - ddd(x + 2.0 * h)) / (12.0 * h);
        assert!((fd3 - d[3]).abs() < 1e-9);
    }
}
