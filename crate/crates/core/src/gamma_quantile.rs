//! Quantiles of the central gamma distribution: the x with P(a, x) = p.
//!
//! For a >= 1 the equation is solved in x, where Ω < 0 has a single maximum at
//! x = a + 1 and the iteration started there converges monotonically. For
//! a < 1 it is solved in z = log x, where Ω is negative and strictly
//! decreasing, starting from a point known to lie left of the root.

use crate::error::{domain, Result};
use crate::problem::{Interval, OmegaMonotoneHint, Problem, ProblemEvaluation};
use crate::solver::{solve, SolveOptions, SolveReport};
use crate::special::{ln_gamma, ln_gamma_prefactor, reg_gamma_pq};

/// Shape and tail probabilities of a gamma quantile request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaQuantileQuery {
    pub a: f64,
    pub p: f64,
    /// 1 - p, kept separately so that upper-tail requests keep their digits.
    pub q: f64,
}

impl GammaQuantileQuery {
    pub fn new(a: f64, p: f64) -> Result<Self> {
        Self::with_tails(a, p, 1.0 - p)
    }

    /// Query with both tails given. They must satisfy |p + q - 1| <= 1e-15.
    pub fn with_tails(a: f64, p: f64, q: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(domain("GammaQuantileQuery", "a", a));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(domain("GammaQuantileQuery", "p", p));
        }
        if !(q > 0.0 && q < 1.0) || (p + q - 1.0).abs() > 1e-15 {
            return Err(domain("GammaQuantileQuery", "q", q));
        }
        Ok(GammaQuantileQuery { a, p, q })
    }

    /// Inverts the upper tail: the x with Q(a, x) = q.
    pub fn upper(a: f64, q: f64) -> Result<Self> {
        Self::with_tails(a, 1.0 - q, q)
    }
}

/// Variable the iteration runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaVariable {
    /// x itself.
    Direct,
    /// z = log x.
    Log,
}

/// Starting rule for a >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaStart {
    /// x0 = a + 1, the maximum of Ω.
    #[default]
    OmegaMax,
    /// x0 = a - 1 (the mode of the density); falls back to a + 1 when a - 1 <= 0.
    Mode,
}

/// B(x) = 1 + (1 - a)/x for f = P(a, x) - p.
pub fn gamma_b(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("gamma_b", "x", x));
    }
    Ok(1.0 + (1.0 - a) / x)
}

/// Ω(x) = -(1 + 2(1-a)/x + (a²-1)/x²)/4.
pub fn gamma_omega(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("gamma_omega", "x", x));
    }
    let u = 1.0 / x;
    Ok(-0.25 * (1.0 + u * (2.0 * (1.0 - a) + u * (a - 1.0) * (a + 1.0))))
}

/// Ω in the variable z = log x: -(x² - 2(a-1)x + a²)/4 with x = e^z.
pub fn gamma_omega_log(a: f64, z: f64) -> f64 {
    let x = z.exp();
    -0.25 * (x * (x - 2.0 * (a - 1.0)) + a * a)
}

/// f(x) = P(a, x) - p (or q - Q(a, x) when p > 1/2) in the chosen variable.
#[derive(Debug, Clone, Copy)]
pub struct GammaProblem {
    query: GammaQuantileQuery,
    variable: GammaVariable,
    ln_gamma_a: f64,
}

impl GammaProblem {
    pub fn variable(&self) -> GammaVariable {
        self.variable
    }

    pub fn query(&self) -> GammaQuantileQuery {
        self.query
    }

    fn residual(&self, x: f64, ln_x: f64) -> Result<f64> {
        let (p, q) = reg_gamma_pq(self.query.a, x, ln_x)?;
        Ok(if self.query.p <= 0.5 {
            p - self.query.p
        } else {
            self.query.q - q
        })
    }
}

pub fn gamma_problem(query: GammaQuantileQuery, variable: GammaVariable) -> GammaProblem {
    GammaProblem {
        query,
        variable,
        ln_gamma_a: ln_gamma(query.a).expect("validated shape"),
    }
}

impl Problem for GammaProblem {
    fn evaluate(&self, t: f64) -> Result<ProblemEvaluation> {
        let a = self.query.a;
        match self.variable {
            GammaVariable::Direct => {
                if !(t > 0.0) {
                    return Err(domain("gamma_problem", "x", t));
                }
                let ln_x = t.ln();
                let f = self.residual(t, ln_x)?;
                let fp = (ln_gamma_prefactor(a, t, ln_x, self.ln_gamma_a) - ln_x).exp();
                Ok(ProblemEvaluation::new(t, f, fp, gamma_b(a, t)?, gamma_omega(a, t)?))
            }
            GammaVariable::Log => {
                let x = t.exp();
                let f = self.residual(x, t)?;
                // dP/dz = x · density
                let fp = ln_gamma_prefactor(a, x, t, self.ln_gamma_a).exp();
                Ok(ProblemEvaluation::new(t, f, fp, x - a, gamma_omega_log(a, t)))
            }
        }
    }

    fn domain(&self) -> Interval {
        match self.variable {
            GammaVariable::Direct => Interval::open(0.0, f64::INFINITY),
            GammaVariable::Log => Interval::real_line(),
        }
    }

    fn omega_monotone_hint(&self) -> OmegaMonotoneHint {
        match self.variable {
            GammaVariable::Log if self.query.a < 1.0 => OmegaMonotoneHint::DecreasingLeftOfRoot,
            _ => OmegaMonotoneHint::Unknown,
        }
    }
}

/// Variable and starting value (in that variable) for a query.
///
/// a >= 1: direct variable from a + 1 (or a - 1 with [`GammaStart::Mode`]).
/// a < 1: log variable from z0 = (log p + log Γ(a+1))/a. Since
/// P(a, x) <= x^a/Γ(a+1), e^{z0} never exceeds the root.
pub fn gamma_start(query: &GammaQuantileQuery, start: GammaStart) -> (GammaVariable, f64) {
    let a = query.a;
    if a >= 1.0 {
        let x0 = match start {
            GammaStart::Mode if a > 1.0 => a - 1.0,
            _ => a + 1.0,
        };
        return (GammaVariable::Direct, x0);
    }
    let lg = ln_gamma(a + 1.0).expect("validated shape");
    (GammaVariable::Log, (query.p.ln() + lg) / a)
}

/// Result of [`invert_gamma`]. `report.root` is x; the trace and `x0` are in
/// `variable`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaInversion {
    pub report: SolveReport,
    pub variable: GammaVariable,
    pub x0: f64,
    /// log of the root, meaningful even when the root underflows to 0
    /// (a tiny shape with a tiny p).
    pub ln_root: f64,
}

pub fn invert_gamma(query: GammaQuantileQuery, opts: &SolveOptions) -> Result<GammaInversion> {
    invert_gamma_from(query, GammaStart::default(), opts)
}

pub fn invert_gamma_from(
    query: GammaQuantileQuery,
    start: GammaStart,
    opts: &SolveOptions,
) -> Result<GammaInversion> {
    let (variable, x0) = gamma_start(&query, start);
    let problem = gamma_problem(query, variable);
    let mut report = solve(&problem, x0, opts)?;
    let ln_root = match variable {
        GammaVariable::Direct => report.root.ln(),
        GammaVariable::Log => {
            let z = report.root;
            report = report.map_root(f64::exp);
            z
        }
    };
    Ok(GammaInversion {
        report,
        variable,
        x0,
        ln_root,
    })
}
