use crate::error::{domain, Result};

/// Solver domain with open/closed endpoint semantics. Infinite endpoints are
/// always treated as open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) {
            return Err(domain("Interval::new", "lo", lo));
        }
        Ok(Interval {
            lo,
            hi,
            lo_open: lo_open || lo.is_infinite(),
            hi_open: hi_open || hi.is_infinite(),
        })
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true).expect("lo < hi")
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false).expect("lo < hi")
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }
}

/// Everything the iteration needs at one abscissa.
///
/// `h` is the ratio Φ/Φ' of the normal-form function Φ = f/√|f'|, which
/// equals `f / ((B/2) f + f')`. Φ itself is never formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemEvaluation {
    pub x: f64,
    pub f: f64,
    pub fp: f64,
    /// B = -f''/f'.
    pub big_b: f64,
    /// Ω = {f,x}/2.
    pub omega: f64,
    pub h: f64,
}

impl ProblemEvaluation {
    /// Builds an evaluation and derives `h`. A zero denominator leaves `h`
    /// non-finite; the step functions report it.
    pub fn new(x: f64, f: f64, fp: f64, big_b: f64, omega: f64) -> Self {
        let h = f / (0.5 * big_b * f + fp);
        ProblemEvaluation {
            x,
            f,
            fp,
            big_b,
            omega,
            h,
        }
    }

    /// Builds an evaluation from raw derivatives f, f', f'', f'''.
    ///
    /// When f' is zero, B and Ω are NaN and the solver stops with a vanished
    /// derivative rather than failing here.
    pub fn from_derivatives(x: f64, f: f64, fp: f64, fpp: f64, fppp: f64) -> Result<Self> {
        if fp == 0.0 {
            return Ok(Self::new(x, f, fp, f64::NAN, f64::NAN));
        }
        let omega = crate::step::schwarzian_omega(fp, fpp, fppp)?;
        Ok(Self::new(x, f, fp, -fpp / fp, omega))
    }

    /// (B/2) f + f', the denominator of Φ/Φ'.
    pub fn denominator(&self) -> f64 {
        0.5 * self.big_b * self.f + self.fp
    }

    /// f'' recovered as -B f'.
    pub fn fpp(&self) -> f64 {
        -self.big_b * self.fp
    }

    /// f''' recovered from Ω = (f'''/f' - 1.5 (f''/f')²)/2.
    pub fn fppp(&self) -> f64 {
        self.fp * (2.0 * self.omega + 1.5 * self.big_b * self.big_b)
    }
}

/// Monotonicity of Ω around the root, for diagnostics only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaMonotoneHint {
    DecreasingLeftOfRoot,
    IncreasingRightOfRoot,
    #[default]
    Unknown,
}

/// A scalar equation f(x) = 0 together with the quantities the SNM needs.
///
/// Implementations must be deterministic and free of interior mutability so
/// they can be shared across threads.
pub trait Problem {
    fn evaluate(&self, x: f64) -> Result<ProblemEvaluation>;

    fn domain(&self) -> Interval;

    fn omega_monotone_hint(&self) -> OmegaMonotoneHint {
        OmegaMonotoneHint::Unknown
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn evaluate(&self, x: f64) -> Result<ProblemEvaluation> {
        (**self).evaluate(x)
    }

    fn domain(&self) -> Interval {
        (**self).domain()
    }

    fn omega_monotone_hint(&self) -> OmegaMonotoneHint {
        (**self).omega_monotone_hint()
    }
}

/// A problem given by closures for f, f', f'' and f'''.
pub struct FnProblem<F> {
    derivatives: F,
    domain: Interval,
}

impl<F> FnProblem<F>
where
    F: Fn(f64) -> [f64; 4],
{
    /// `derivatives(x)` must return `[f, f', f'', f''']`.
    pub fn new(derivatives: F, domain: Interval) -> Self {
        FnProblem {
            derivatives,
            domain,
        }
    }
}

impl<F> Problem for FnProblem<F>
where
    F: Fn(f64) -> [f64; 4],
{
    fn evaluate(&self, x: f64) -> Result<ProblemEvaluation> {
        let [f, fp, fpp, fppp] = (self.derivatives)(x);
        ProblemEvaluation::from_derivatives(x, f, fp, fpp, fppp)
    }

    fn domain(&self) -> Interval {
        self.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_membership() {
        let i = Interval::open(0.0, 1.0);
        assert!(!i.contains(0.0));
        assert!(i.contains(0.5));
        assert!(!i.contains(1.0));
        let c = Interval::closed(0.0, 1.0);
        assert!(c.contains(0.0) && c.contains(1.0));
        assert!(!c.contains(f64::NAN));
        assert!(Interval::new(1.0, 1.0, false, false).is_err());
        let r = Interval::new(f64::NEG_INFINITY, 0.0, false, false).unwrap();
        assert!(r.lo_open);
    }

    #[test]
    fn h_matches_defining_formula() {
        let e = ProblemEvaluation::new(2.0, 3.0, 4.0, -0.5, 0.0);
        assert!((e.h * e.denominator() - e.f).abs() <= 4.0 * f64::EPSILON * e.f.abs());
        assert_eq!(e.fpp(), 2.0);
    }

    #[test]
    fn derivative_roundtrip() {
        let e = ProblemEvaluation::from_derivatives(0.3, 0.1, 1.7, -0.4, 2.5).unwrap();
        assert!((e.fpp() + 0.4).abs() < 1e-15);
        assert!((e.fppp() - 2.5).abs() < 1e-14);
    }
}
