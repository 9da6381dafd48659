//! Inversion of the incomplete elliptic integral of the second kind: the
//! amplitude x ∈ [0, π/2] with E(x | m) = p E(m).
//!
//! `m` is the modulus: E(x | m) = ∫₀ˣ √(1 - m² sin² t) dt.
//!
//! Ω changes sign at x_c(m): it is negative below and positive above. For
//! m <= 2/√7 it increases on the whole interval; above that it has an
//! interior minimum at x_e < x_c. Starting values are one SNM step from
//! either endpoint, chosen by a heuristic, with one retry from the other
//! endpoint and a short bisection as the last resort.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Result};
use crate::problem::{Interval, Problem, ProblemEvaluation};
use crate::solver::{solve, SolveOptions, SolveReport};
use crate::special::{ellip_e_complete, ellip_e_inc};

/// Modulus above which x0 = arcsin(p E(m)) is used.
pub const NEAR_ONE_MODULUS: f64 = 0.95;

/// p above which the low start is not preferred.
const LOW_START_MAX_P: f64 = 0.8;

const RESEED_BISECTIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticQuery {
    /// Modulus in [0, 1].
    pub m: f64,
    /// Fraction of the complete integral, in (0, 1).
    pub p: f64,
}

impl EllipticQuery {
    pub fn new(m: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(domain("EllipticQuery", "m", m));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(domain("EllipticQuery", "p", p));
        }
        Ok(EllipticQuery { m, p })
    }
}

fn check_m(routine: &'static str, m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(domain(routine, "m", m));
    }
    Ok(())
}

fn check_x(routine: &'static str, m: f64, x: f64) -> Result<()> {
    check_m(routine, m)?;
    if !(0.0..=FRAC_PI_2).contains(&x) || (m == 1.0 && x == FRAC_PI_2) {
        return Err(domain(routine, "x", x));
    }
    Ok(())
}

/// Δ² = 1 - m² sin² x, written as cos² x + sin² x (1-m)(1+m).
fn delta_sq(m: f64, s: f64, c: f64) -> f64 {
    c * c + s * s * (1.0 - m) * (1.0 + m)
}

/// Ω(x) = (m²/4)(m² cos⁴x + (m²-4) cos²x + 2(1-m²)) / (1 - m² sin²x)².
pub fn ellip_omega(m: f64, x: f64) -> Result<f64> {
    check_x("ellip_omega", m, x)?;
    let (s, c) = x.sin_cos();
    let k = m * m;
    let c2 = c * c;
    let d = delta_sq(m, s, c);
    let n = c2 * (k * c2 + k - 4.0) + 2.0 * (1.0 - m) * (1.0 + m);
    Ok(0.25 * k * n / (d * d))
}

/// dΩ/dx = -(m²/4) sin 2x (m²(6 - 3m²) cos²x - (1-m²)(3m² + 4)) / (1 - m² sin²x)³.
pub fn ellip_omega_derivative(m: f64, x: f64) -> Result<f64> {
    check_x("ellip_omega_derivative", m, x)?;
    let (s, c) = x.sin_cos();
    let k = m * m;
    let d = delta_sq(m, s, c);
    let g = k * (6.0 - 3.0 * k) * c * c - (1.0 - m) * (1.0 + m) * (3.0 * k + 4.0);
    Ok(-0.25 * k * (2.0 * s * c) * g / (d * d * d))
}

/// x_c(m), where Ω changes sign: cos² x_c = 4(1-m²) / (4 - m² + √(9m⁴ - 16m² + 16)).
///
/// This is the smaller root of the quadratic in cos² x, in a form without
/// cancellation; it gives x_c(0) = π/4 and x_c(1) = π/2 directly.
pub fn ellip_xc(m: f64) -> Result<f64> {
    check_m("ellip_xc", m)?;
    let k = m * m;
    let disc = (9.0 * k * k + 16.0 * (1.0 - m) * (1.0 + m)).sqrt();
    let c2 = 4.0 * (1.0 - m) * (1.0 + m) / (4.0 - k + disc);
    Ok(c2.sqrt().acos())
}

/// Smallest modulus at which Ω has an interior minimum, 2/√7.
pub fn ellip_xe_threshold() -> f64 {
    2.0 / 7f64.sqrt()
}

/// x_e(m), the interior minimum of Ω for m > 2/√7:
/// cos² x_e = 1 - (7m² - 4) / (3m² (2 - m²)).
pub fn ellip_xe(m: f64) -> Result<f64> {
    if !(m > ellip_xe_threshold() && m <= 1.0) {
        return Err(domain("ellip_xe", "m", m));
    }
    let k = m * m;
    let c2 = 1.0 - (7.0 * k - 4.0) / (3.0 * k * (2.0 - k));
    Ok(c2.max(0.0).sqrt().acos())
}

/// One SNM step from x = 0: (√2/m) artanh(m p E(m) / √2).
///
/// `None` when the artanh argument reaches 1, where the step is undefined.
pub fn ellip_start_low(m: f64, p: f64) -> Result<Option<f64>> {
    check_m("ellip_start_low", m)?;
    let e = ellip_e_complete(m)?;
    if m == 0.0 {
        return Ok(Some(p * e));
    }
    let r = std::f64::consts::SQRT_2 / m;
    let arg = p * e / r;
    if !(arg < 1.0) {
        return Ok(None);
    }
    Ok(Some(r * arg.atanh()))
}

/// One SNM step from x = π/2:
/// π/2 - (√(2(1-m²))/m) arctan(m (1-p) E(m) / (√2 (1-m²))).
pub fn ellip_start_high(m: f64, p: f64) -> Result<f64> {
    check_m("ellip_start_high", m)?;
    let e = ellip_e_complete(m)?;
    if m == 0.0 {
        return Ok(p * e);
    }
    if m == 1.0 {
        return Ok(FRAC_PI_2);
    }
    let k1 = (1.0 - m) * (1.0 + m);
    let r = (2.0 * k1).sqrt() / m;
    Ok(FRAC_PI_2 - r * ((1.0 - p) * e / (r * k1.sqrt())).atan())
}

/// f(x) = E(x | m) - p E(m) on [0, π/2].
#[derive(Debug, Clone, Copy)]
pub struct EllipticProblem {
    query: EllipticQuery,
    complete: f64,
}

pub fn elliptic_problem(query: EllipticQuery) -> Result<EllipticProblem> {
    Ok(EllipticProblem {
        query,
        complete: ellip_e_complete(query.m)?,
    })
}

impl EllipticProblem {
    pub fn complete(&self) -> f64 {
        self.complete
    }
}

impl Problem for EllipticProblem {
    fn evaluate(&self, x: f64) -> Result<ProblemEvaluation> {
        let m = self.query.m;
        check_x("elliptic_problem", m, x)?;
        let (s, c) = x.sin_cos();
        let d2 = delta_sq(m, s, c);
        let f = ellip_e_inc(x, m)? - self.query.p * self.complete;
        let big_b = m * m * s * c / d2;
        Ok(ProblemEvaluation::new(x, f, d2.sqrt(), big_b, ellip_omega(m, x)?))
    }

    fn domain(&self) -> Interval {
        if self.query.m == 1.0 {
            Interval::new(0.0, FRAC_PI_2, false, true).expect("ordered")
        } else {
            Interval::closed(0.0, FRAC_PI_2)
        }
    }
}

/// Where the successful solve started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticStart {
    /// m = 0 or m = 1: closed form p π/2 or arcsin p.
    ClosedForm,
    /// arcsin(p E(m)), for m above [`NEAR_ONE_MODULUS`].
    NearOne,
    /// One SNM step from 0.
    Low,
    /// One SNM step from π/2.
    High,
    /// Bisection re-seed after both endpoint starts failed.
    Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticInversion {
    pub report: SolveReport,
    pub start: EllipticStart,
    pub x0: f64,
    /// The first start failed and another was tried.
    pub retried: bool,
}

/// Acceptable when converged without step reversals beyond round-off.
fn acceptable(r: &SolveReport) -> bool {
    r.converged && r.is_monotone_within(1e-12)
}

pub fn invert_ellip_e(query: EllipticQuery, opts: &SolveOptions) -> Result<EllipticInversion> {
    let EllipticQuery { m, p } = query;
    let problem = elliptic_problem(query)?;
    let run = |x0: f64, start: EllipticStart, retried: bool| -> Result<EllipticInversion> {
        Ok(EllipticInversion {
            report: solve(&problem, x0, opts)?,
            start,
            x0,
            retried,
        })
    };

    if m == 0.0 {
        return run(p * FRAC_PI_2, EllipticStart::ClosedForm, false);
    }
    if m == 1.0 {
        return run(p.asin(), EllipticStart::ClosedForm, false);
    }

    let mut candidates = Vec::with_capacity(2);
    if m > NEAR_ONE_MODULUS {
        let x0 = (p * problem.complete).clamp(0.0, 1.0).asin();
        candidates.push((x0, EllipticStart::NearOne));
        // The retry goes to the endpoint step on the Ω > 0 side.
        candidates.push((ellip_start_high(m, p)?, EllipticStart::High));
    } else {
        let low = ellip_start_low(m, p)?;
        let high = ellip_start_high(m, p)?;
        match low {
            Some(low) if low < high && p < LOW_START_MAX_P => {
                candidates.push((low, EllipticStart::Low));
                candidates.push((high, EllipticStart::High));
            }
            Some(low) => {
                candidates.push((high, EllipticStart::High));
                candidates.push((low, EllipticStart::Low));
            }
            None => candidates.push((high, EllipticStart::High)),
        }
    }

    let mut first: Option<EllipticInversion> = None;
    for (i, &(x0, start)) in candidates.iter().enumerate() {
        let inv = run(x0, start, i > 0)?;
        if acceptable(&inv.report) {
            return Ok(inv);
        }
        first.get_or_insert(inv);
    }

    let x0 = reseed(&problem)?;
    let inv = run(x0, EllipticStart::Bisection, true)?;
    if inv.report.converged {
        return Ok(inv);
    }
    Ok(first.expect("at least one candidate start"))
}

/// Midpoint of the bracket after a few bisection steps on [0, π/2].
fn reseed(problem: &EllipticProblem) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    if problem.query.m == 1.0 {
        hi = f64::from_bits(FRAC_PI_2.to_bits() - 1);
    }
    for _ in 0..RESEED_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if problem.evaluate(mid)?.f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::snm_step;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(ellip_omega(0.0, 0.7).unwrap(), 0.0);
        let xc = ellip_xc(0.5).unwrap();
        assert!(ellip_omega(0.5, xc).unwrap().abs() <= 1e-12);
        assert!(ellip_omega(0.5, xc - 1e-3).unwrap() < 0.0);
        assert!(ellip_omega(0.5, xc + 1e-3).unwrap() > 0.0);
        for &m in &[0.2, 0.6, 0.9] {
            let xc = ellip_xc(m).unwrap();
            for i in 0..=100 {
                let x = FRAC_PI_2 * i as f64 / 100.0;
                let w = ellip_omega(m, x).unwrap();
                if x < xc - 1e-9 {
                    assert!(w < 0.0, "{m} {x}");
                } else if x > xc + 1e-9 {
                    assert!(w > 0.0, "{m} {x}");
                }
            }
        }
        assert!(ellip_omega(1.0, FRAC_PI_2).is_err());
        assert!(ellip_omega(0.5, 2.0).is_err());
    }

    #[test]
    fn omega_is_half_schwarzian() {
        // Ω = -B²/4 - B'/2 with B = m² sin x cos x / Δ²
        let m: f64 = 0.8;
        let b = |x: f64| {
            let (s, c) = x.sin_cos();
            m * m * s * c / (1.0 - m * m * s * s)
        };
        for &x in &[0.2, 0.9, 1.4] {
            let h = 1e-6;
            let db = (b(x + h) - b(x - h)) / (2.0 * h);
            let want = -0.25 * b(x) * b(x) - 0.5 * db;
            assert!((ellip_omega(m, x).unwrap() - want).abs() <= 1e-8 * want.abs().max(1.0));
        }
    }

    #[test]
    fn omega_derivative_matches_differences() {
        for &m in &[0.3, 0.8, 0.97] {
            for &x in &[0.1, 0.7, 1.3] {
                let h = 1e-6;
                let fd = (ellip_omega(m, x + h).unwrap() - ellip_omega(m, x - h).unwrap()) / (2.0 * h);
                let an = ellip_omega_derivative(m, x).unwrap();
                assert!((fd - an).abs() <= 1e-7 * an.abs().max(1.0), "{m} {x}");
            }
        }
    }

    #[test]
    fn xc_limits_and_growth() {
        assert!((ellip_xc(0.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() <= 1e-12);
        assert!((ellip_xc(1e-9).unwrap() - std::f64::consts::FRAC_PI_4).abs() <= 1e-12);
        assert!((ellip_xc(1.0).unwrap() - FRAC_PI_2).abs() <= 1e-12);
        let mut prev = 0.0;
        for i in 1..=100 {
            let v = ellip_xc(i as f64 / 100.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn xe_properties() {
        let t = ellip_xe_threshold();
        assert!(ellip_xe(t).is_err());
        assert!(ellip_xe(t + 1e-12).unwrap() < 1e-5);
        let xe = ellip_xe(0.9).unwrap();
        let h = 1e-5;
        let d = (ellip_omega_derivative(0.9, xe + h).unwrap() - ellip_omega_derivative(0.9, xe - h).unwrap())
            / (2.0 * h);
        assert!(d > 0.0, "x_e is a minimum");
        assert!(ellip_omega_derivative(0.9, xe).unwrap().abs() <= 1e-8);
        assert!(xe < ellip_xc(0.9).unwrap());
    }

    #[test]
    fn starts_are_endpoint_steps() {
        for &(m, p) in &[(0.5, 0.5), (0.3, 0.1), (0.9, 0.7)] {
            let problem = elliptic_problem(EllipticQuery::new(m, p).unwrap()).unwrap();
            let low = ellip_start_low(m, p).unwrap().unwrap();
            let high = ellip_start_high(m, p).unwrap();
            let from0 = snm_step(&problem.evaluate(0.0).unwrap()).unwrap();
            let from1 = snm_step(&problem.evaluate(FRAC_PI_2).unwrap()).unwrap();
            assert!((low - from0).abs() <= 1e-14);
            assert!((high - from1).abs() <= 1e-14);
            assert!(low > 0.0 && low < FRAC_PI_2);
            assert!(high > 0.0 && high < FRAC_PI_2);
        }
        assert!(ellip_start_low(0.5, 1e-12).unwrap().unwrap() < 1e-11);
        assert!(FRAC_PI_2 - ellip_start_high(0.5, 1.0 - 1e-12).unwrap() < 1e-11);
    }

    #[test]
    fn both_starts_reach_the_same_root() {
        let problem = elliptic_problem(EllipticQuery::new(0.5, 0.5).unwrap()).unwrap();
        let a = solve(&problem, ellip_start_low(0.5, 0.5).unwrap().unwrap(), &opts()).unwrap();
        let b = solve(&problem, ellip_start_high(0.5, 0.5).unwrap(), &opts()).unwrap();
        assert!(a.converged && b.converged);
        assert!((a.root - b.root).abs() <= 1e-15);
    }

    #[test]
    fn examples() {
        let r = invert_ellip_e(EllipticQuery::new(0.0, 0.3).unwrap(), &opts()).unwrap();
        assert_eq!(r.start, EllipticStart::ClosedForm);
        assert!((r.report.root - 0.47123889803846897).abs() <= 1e-16);
        let r = invert_ellip_e(EllipticQuery::new(0.5, 0.5).unwrap(), &opts()).unwrap();
        let e = ellip_e_inc(r.report.root, 0.5).unwrap();
        assert!((e - 0.5 * 1.4674622093394272).abs() <= 1e-13);
        let r = invert_ellip_e(EllipticQuery::new(1.0, 0.4).unwrap(), &opts()).unwrap();
        assert!((r.report.root - 0.4f64.asin()).abs() <= 1e-15);
    }

    #[test]
    fn near_one_modulus() {
        for &p in &[0.05, 0.5, 0.95, 0.999] {
            let q = EllipticQuery::new(0.99, p).unwrap();
            let r = invert_ellip_e(q, &opts()).unwrap();
            assert_eq!(r.retried, r.start != EllipticStart::NearOne);
            if p < 0.5 {
                assert_eq!(r.start, EllipticStart::NearOne);
            }
            assert!(r.report.converged);
            let e = ellip_e_complete(0.99).unwrap();
            assert!((ellip_e_inc(r.report.root, 0.99).unwrap() - p * e).abs() <= 1e-13 * e);
        }
    }
}
