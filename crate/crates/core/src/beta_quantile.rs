//! Quantiles of the beta distribution: the x with I_x(a, b) = p.
//!
//! For a, b > 1 the equation is solved in x, where Ω < 0 has a single maximum
//! x_m (root of a cubic) and the iteration from x_m converges monotonically.
//! Otherwise it is solved in z = logit x, where Ω is negative; the problem is
//! oriented (by the reflection x ↦ 1 - x, a ↔ b, p ↔ q) so that Ω decreases
//! near the root, and the iteration starts from a point known to lie left of
//! it.

use crate::error::{domain, Error, Result};
use crate::problem::{Interval, OmegaMonotoneHint, Problem, ProblemEvaluation};
use crate::solver::{solve, SolveOptions, SolveReport};
use crate::special::{ln_beta, reg_beta_logs, BetaParams};

/// Shapes and tail probabilities of a beta quantile request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaQuantileQuery {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    /// 1 - p, kept separately for upper-tail accuracy.
    pub q: f64,
}

impl BetaQuantileQuery {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        Self::with_tails(a, b, p, 1.0 - p)
    }

    /// Query with both tails given. They must satisfy |p + q - 1| <= 1e-15.
    pub fn with_tails(a: f64, b: f64, p: f64, q: f64) -> Result<Self> {
        BetaParams::new(a, b)?;
        if !(p > 0.0 && p < 1.0) {
            return Err(domain("BetaQuantileQuery", "p", p));
        }
        if !(q > 0.0 && q < 1.0) || (p + q - 1.0).abs() > 1e-15 {
            return Err(domain("BetaQuantileQuery", "q", q));
        }
        Ok(BetaQuantileQuery { a, b, p, q })
    }

    /// The reflected query (b, a, q, p), whose root is 1 - x.
    pub fn reflected(&self) -> Self {
        BetaQuantileQuery {
            a: self.b,
            b: self.a,
            p: self.q,
            q: self.p,
        }
    }
}

/// Variable the iteration runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaVariable {
    /// x itself.
    Direct,
    /// z = log(x / (1 - x)).
    Logit,
}

/// Variable selection for [`invert_beta_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaVariableChoice {
    /// Direct when a, b > 1, logit otherwise.
    #[default]
    Auto,
    /// Direct; only valid for a, b > 1.
    Direct,
    Logit,
}

fn check_unit(routine: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(routine, "x", x));
    }
    Ok(())
}

/// B(x) = -(a-1)/x + (b-1)/(1-x) for f = I_x(a, b) - p.
pub fn beta_b(a: f64, b: f64, x: f64) -> Result<f64> {
    check_unit("beta_b", x)?;
    Ok(-(a - 1.0) / x + (b - 1.0) / (1.0 - x))
}

/// Ω(x) = (a-1)(b-1)/(2x(1-x)) - (a²-1)/(4x²) - (b²-1)/(4(1-x)²).
pub fn beta_omega(a: f64, b: f64, x: f64) -> Result<f64> {
    check_unit("beta_omega", x)?;
    let y = 1.0 - x;
    Ok((a - 1.0) * (b - 1.0) / (2.0 * x * y)
        - (a - 1.0) * (a + 1.0) / (4.0 * x * x)
        - (b - 1.0) * (b + 1.0) / (4.0 * y * y))
}

/// Coefficients (G, H, I, J) of the cubic whose root in (0, 1) is the
/// maximum of Ω for a, b > 1. With α = a-1, β = b-1:
/// G = (α+β)(α+β+2), H = -3(α² + αβ + 2α), I = 3α² + αβ + 6α, J = -α(α+2).
pub fn beta_xm_coefficients(a: f64, b: f64) -> [f64; 4] {
    let (al, be) = (a - 1.0, b - 1.0);
    let s = al + be;
    [
        s * (s + 2.0),
        -3.0 * (al * al + al * be + 2.0 * al),
        3.0 * al * al + al * be + 6.0 * al,
        -al * (al + 2.0),
    ]
}

/// Abscissa x_m of the maximum of Ω for a, b > 1.
///
/// Q(0) = J < 0 and Q(1) = β(β+2) > 0 bracket the single root in (0, 1); it
/// is found by Newton's method kept inside the bracket by bisection.
pub fn beta_xm(a: f64, b: f64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(domain("beta_xm", "a", a));
    }
    if !(b > 1.0) || !b.is_finite() {
        return Err(domain("beta_xm", "b", b));
    }
    if a == b {
        return Ok(0.5);
    }
    let [g, h, i, j] = beta_xm_coefficients(a, b);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x = (a - 1.0) / (a + b - 2.0);
    for _ in 0..200 {
        let q = ((g * x + h) * x + i) * x + j;
        if q == 0.0 {
            return Ok(x);
        }
        if q < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dq = (3.0 * g * x + 2.0 * h) * x + i;
        let mut next = x - q / dq;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= f64::EPSILON * x || next == lo || next == hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Ω in the variable z = logit x:
/// (-(a+b)(a+b-2)x² + 2(a+b)(a-1)x - a²)/4 with x = 1/(1+e^{-z}).
pub fn beta_omega_logit(a: f64, b: f64, z: f64) -> f64 {
    let x = logistic(z);
    let s = a + b;
    0.25 * (x * (2.0 * s * (a - 1.0) - s * (s - 2.0) * x) - a * a)
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^t).
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// f = I_x(a, b) - p (or q - I_{1-x}(b, a) when p > 1/2) in the chosen
/// variable.
#[derive(Debug, Clone, Copy)]
pub struct BetaProblem {
    query: BetaQuantileQuery,
    variable: BetaVariable,
    ln_beta: f64,
}

pub fn beta_problem(query: BetaQuantileQuery, variable: BetaVariable) -> BetaProblem {
    BetaProblem {
        query,
        variable,
        ln_beta: ln_beta(query.a, query.b),
    }
}

impl BetaProblem {
    pub fn query(&self) -> BetaQuantileQuery {
        self.query
    }

    pub fn variable(&self) -> BetaVariable {
        self.variable
    }

    fn residual(&self, x: f64, y: f64, ln_x: f64, ln_y: f64) -> Result<f64> {
        let BetaQuantileQuery { a, b, p, q } = self.query;
        if p <= 0.5 {
            Ok(reg_beta_logs(x, y, ln_x, ln_y, BetaParams::new(a, b)?)? - p)
        } else {
            Ok(q - reg_beta_logs(y, x, ln_y, ln_x, BetaParams::new(b, a)?)?)
        }
    }
}

impl Problem for BetaProblem {
    fn evaluate(&self, t: f64) -> Result<ProblemEvaluation> {
        let BetaQuantileQuery { a, b, .. } = self.query;
        match self.variable {
            BetaVariable::Direct => {
                check_unit("beta_problem", t)?;
                let (ln_x, ln_y) = (t.ln(), (-t).ln_1p());
                let f = self.residual(t, 1.0 - t, ln_x, ln_y)?;
                let fp = ((a - 1.0) * ln_x + (b - 1.0) * ln_y - self.ln_beta).exp();
                Ok(ProblemEvaluation::new(t, f, fp, beta_b(a, b, t)?, beta_omega(a, b, t)?))
            }
            BetaVariable::Logit => {
                let (ln_x, ln_y) = (-softplus(-t), -softplus(t));
                let (x, y) = (logistic(t), logistic(-t));
                let f = self.residual(x, y, ln_x, ln_y)?;
                // dI/dz = x^a (1-x)^b / B(a, b)
                let fp = (a * ln_x + b * ln_y - self.ln_beta).exp();
                let big_b = (a + b) * x - a;
                Ok(ProblemEvaluation::new(t, f, fp, big_b, beta_omega_logit(a, b, t)))
            }
        }
    }

    fn domain(&self) -> Interval {
        match self.variable {
            BetaVariable::Direct => Interval::open(0.0, 1.0),
            BetaVariable::Logit => Interval::real_line(),
        }
    }

    fn omega_monotone_hint(&self) -> OmegaMonotoneHint {
        match self.variable {
            BetaVariable::Logit => OmegaMonotoneHint::DecreasingLeftOfRoot,
            BetaVariable::Direct => OmegaMonotoneHint::Unknown,
        }
    }
}

/// z0 = logit(min(1/2, x0)) with x0 chosen so that I_{x0}(a, b) <= p.
///
/// I_x(a, b) <= x^a / (a B(a, b)) when b >= 1, and
/// I_x(a, b) <= 2^{1-b} x^a / (a B(a, b)) for x <= 1/2 when b < 1.
pub fn beta_logit_start(a: f64, b: f64, p: f64) -> f64 {
    let mut ln_x0 = p.ln() + a.ln() + ln_beta(a, b);
    if b < 1.0 {
        ln_x0 += (b - 1.0) * std::f64::consts::LN_2;
    }
    let ln_x0 = (ln_x0 / a).min(-std::f64::consts::LN_2);
    ln_x0 - (-ln_x0.exp()).ln_1p()
}

/// How the inversion was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaPath {
    /// a, b > 1 in the direct variable from x_m.
    Direct,
    /// Logit variable with Ω monotone on (0, 1).
    Logit,
    /// Logit variable at a, b < 1, where Ω has an interior minimum; oriented
    /// so the root lies on its decreasing side. Not covered by the
    /// convergence theory, hence heuristic.
    LogitHeuristic,
}

/// Result of [`invert_beta`]. `report.root` is x for the original query;
/// the trace and `x0` are in the solve variable of the (possibly reflected)
/// problem actually solved.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaInversion {
    pub report: SolveReport,
    pub path: BetaPath,
    pub variable: BetaVariable,
    /// The reflected query (b, a, q) was solved and the root mapped by 1 - x.
    pub reflected: bool,
    pub x0: f64,
    /// On [`BetaPath::LogitHeuristic`], whether Ω was found decreasing on a
    /// grid between the start and the root.
    pub omega_monotone: Option<bool>,
    /// 1 - root, accurate even when the root rounds to 1.
    pub complement: f64,
}

pub fn invert_beta(query: BetaQuantileQuery, opts: &SolveOptions) -> Result<BetaInversion> {
    invert_beta_with(query, BetaVariableChoice::Auto, opts)
}

pub fn invert_beta_with(
    query: BetaQuantileQuery,
    choice: BetaVariableChoice,
    opts: &SolveOptions,
) -> Result<BetaInversion> {
    let BetaQuantileQuery { a, b, .. } = query;
    let both_above_one = a > 1.0 && b > 1.0;
    let variable = match choice {
        BetaVariableChoice::Auto if both_above_one => BetaVariable::Direct,
        BetaVariableChoice::Auto | BetaVariableChoice::Logit => BetaVariable::Logit,
        BetaVariableChoice::Direct if both_above_one => BetaVariable::Direct,
        BetaVariableChoice::Direct => {
            return Err(Error::InvalidOptions("direct beta variable requires a > 1 and b > 1"))
        }
    };

    if both_above_one {
        // Ω has a maximum in both variables; start at it, lower tail first.
        let reflected = query.p > 0.5;
        let solved = if reflected { query.reflected() } else { query };
        let xm = beta_xm(solved.a, solved.b)?;
        let x0 = match variable {
            BetaVariable::Direct => xm,
            BetaVariable::Logit => logit((solved.a - 1.0) / (solved.a + solved.b - 2.0)),
        };
        let report = solve(&beta_problem(solved, variable), x0, opts)?;
        return Ok(finish(report, variable, BetaPath::Direct, reflected, x0, None));
    }

    // Logit variable. dΩ/dx has the sign of (a-1) - (a+b-2)x.
    let (reflected, path) = if a <= 1.0 && b >= 1.0 {
        (false, BetaPath::Logit)
    } else if a >= 1.0 && b <= 1.0 {
        (true, BetaPath::Logit)
    } else {
        // a, b < 1: minimum of Ω at x_m; keep the root left of it
        let xm = (a - 1.0) / (a + b - 2.0);
        let i_xm = BetaParams::new(a, b)?.cdf(xm)?;
        (i_xm < query.p, BetaPath::LogitHeuristic)
    };
    let solved = if reflected { query.reflected() } else { query };
    let z0 = beta_logit_start(solved.a, solved.b, solved.p);
    let report = solve(&beta_problem(solved, BetaVariable::Logit), z0, opts)?;
    let omega_monotone = (path == BetaPath::LogitHeuristic)
        .then(|| omega_decreasing_between(solved.a, solved.b, z0, report.root));
    Ok(finish(report, BetaVariable::Logit, path, reflected, z0, omega_monotone))
}

fn logit(x: f64) -> f64 {
    x.ln() - (-x).ln_1p()
}

fn omega_decreasing_between(a: f64, b: f64, z0: f64, z1: f64) -> bool {
    const SAMPLES: usize = 32;
    let (lo, hi) = if z0 <= z1 { (z0, z1) } else { (z1, z0) };
    let mut prev = beta_omega_logit(a, b, lo);
    for k in 1..=SAMPLES {
        let w = beta_omega_logit(a, b, lo + (hi - lo) * k as f64 / SAMPLES as f64);
        if w > prev {
            return false;
        }
        prev = w;
    }
    true
}

fn finish(
    report: SolveReport,
    variable: BetaVariable,
    path: BetaPath,
    reflected: bool,
    x0: f64,
    omega_monotone: Option<bool>,
) -> BetaInversion {
    // In the logit variable both x = logistic(z) and 1 - x = logistic(-z)
    // keep full relative accuracy.
    let t = report.root;
    let (x, complement) = match (variable, reflected) {
        (BetaVariable::Logit, false) => (logistic(t), logistic(-t)),
        (BetaVariable::Logit, true) => (logistic(-t), logistic(t)),
        (BetaVariable::Direct, false) => (t, 1.0 - t),
        (BetaVariable::Direct, true) => (1.0 - t, t),
    };
    let report = report.map_root(|_| x);
    BetaInversion {
        report,
        path,
        variable,
        reflected,
        x0,
        omega_monotone,
        complement,
    }
}
