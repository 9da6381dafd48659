//! C ABI for the `snm` crate.
//!
//! Every entry point returns an [`SnmStatus`] and writes its result through
//! an out pointer. Solves produce an opaque [`SnmReport`] that the caller
//! owns and releases with [`snm_report_free`]. Options may be passed as NULL
//! to get the defaults. Panics never cross the boundary; they come back as
//! [`SnmStatus::Panic`].
//!
//! The header `include/snm.h` is generated by the build script.

use std::ffi::{c_char, c_int, c_void};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use snm::beta_quantile::{invert_beta, BetaQuantileQuery};
use snm::elliptic_inverse::{invert_ellip_e, EllipticQuery};
use snm::gamma_quantile::{invert_gamma, GammaQuantileQuery};
use snm::special::{ellip_e_inc, reg_beta, reg_gamma_p, reg_gamma_q, BetaParams};
use snm::{
    solve, Error, FnProblem, Interval, Method, Safeguard, SolveOptions, SolveReport, StopReason,
};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnmStatus {
    Ok = 0,
    /// The solve ran but did not converge; the report is still written.
    NotConverged = 1,
    NullPointer = 2,
    /// An argument is outside the domain of the routine.
    Domain = 3,
    InvalidOptions = 4,
    StartOutsideDomain = 5,
    DegenerateDenominator = 6,
    StepUndefined = 7,
    Pole = 8,
    /// An internal series or continued fraction ran out of budget.
    NoConvergence = 9,
    /// The user callback reported failure.
    Callback = 10,
    IndexOutOfRange = 11,
    Panic = 12,
}

impl From<Error> for SnmStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } => SnmStatus::Domain,
            Error::InvalidOptions(_) => SnmStatus::InvalidOptions,
            Error::StartOutsideDomain { .. } => SnmStatus::StartOutsideDomain,
            Error::DegenerateDenominator { .. } => SnmStatus::DegenerateDenominator,
            Error::StepUndefined { .. } => SnmStatus::StepUndefined,
            Error::Pole { .. } => SnmStatus::Pole,
            Error::NoConvergence { .. } => SnmStatus::NoConvergence,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnmMethod {
    Snm = 0,
    Halley = 1,
    Newton = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnmSafeguard {
    ClampToDomain = 0,
    Fail = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnmStopReason {
    StepTol = 0,
    ResidualTol = 1,
    MaxIter = 2,
    DerivativeVanished = 3,
    DomainExit = 4,
}

/// Solver options. Start from [`snm_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnmOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// |f| threshold; 0 disables the residual test.
    pub residual_tol: f64,
    pub max_iter: u32,
    pub method: SnmMethod,
    pub series_threshold: f64,
    pub safeguard: SnmSafeguard,
}

impl From<SolveOptions> for SnmOptions {
    fn from(o: SolveOptions) -> Self {
        SnmOptions {
            abs_tol: o.abs_tol,
            rel_tol: o.rel_tol,
            residual_tol: o.residual_tol,
            max_iter: u32::try_from(o.max_iter).unwrap_or(u32::MAX),
            method: match o.method {
                Method::Snm => SnmMethod::Snm,
                Method::Halley => SnmMethod::Halley,
                Method::Newton => SnmMethod::Newton,
            },
            series_threshold: o.series_threshold,
            safeguard: match o.safeguard {
                Safeguard::ClampToDomain => SnmSafeguard::ClampToDomain,
                Safeguard::Fail => SnmSafeguard::Fail,
            },
        }
    }
}

impl From<SnmOptions> for SolveOptions {
    fn from(o: SnmOptions) -> Self {
        SolveOptions {
            abs_tol: o.abs_tol,
            rel_tol: o.rel_tol,
            residual_tol: o.residual_tol,
            max_iter: o.max_iter as usize,
            method: match o.method {
                SnmMethod::Snm => Method::Snm,
                SnmMethod::Halley => Method::Halley,
                SnmMethod::Newton => Method::Newton,
            },
            series_threshold: o.series_threshold,
            safeguard: match o.safeguard {
                SnmSafeguard::ClampToDomain => Safeguard::ClampToDomain,
                SnmSafeguard::Fail => Safeguard::Fail,
            },
        }
    }
}

/// One accepted iteration, as stored in a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnmIteration {
    pub n: u32,
    pub x: f64,
    pub f: f64,
    pub h: f64,
    pub omega: f64,
    pub step: f64,
    pub fallback_used: bool,
}

/// Opaque solve report.
pub struct SnmReport {
    inner: SolveReport,
}

/// Evaluates `[f, f', f'', f''']` at `x` into `out`; returns 0 on success.
pub type SnmDerivativesFn = Option<extern "C" fn(x: f64, user_data: *mut c_void, out: *mut f64) -> c_int>;

fn guard(body: impl FnOnce() -> SnmStatus) -> SnmStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(SnmStatus::Panic)
}

/// # Safety
/// `opts` is NULL or points to a valid `SnmOptions`.
unsafe fn read_options(opts: *const SnmOptions) -> SolveOptions {
    match opts.as_ref() {
        Some(o) => (*o).into(),
        None => SolveOptions::default(),
    }
}

/// # Safety
/// `out` is a valid pointer to write a report pointer into.
unsafe fn emit(result: snm::Result<SolveReport>, out: *mut *mut SnmReport) -> SnmStatus {
    match result {
        Ok(inner) => {
            let converged = inner.converged;
            *out = Box::into_raw(Box::new(SnmReport { inner }));
            if converged {
                SnmStatus::Ok
            } else {
                SnmStatus::NotConverged
            }
        }
        Err(e) => e.into(),
    }
}

/// Library defaults.
#[no_mangle]
pub extern "C" fn snm_options_default() -> SnmOptions {
    SolveOptions::default().into()
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn snm_status_message(status: SnmStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SnmStatus::Ok => b"ok\0",
        SnmStatus::NotConverged => b"solver did not converge\0",
        SnmStatus::NullPointer => b"null pointer argument\0",
        SnmStatus::Domain => b"argument outside the domain\0",
        SnmStatus::InvalidOptions => b"invalid solver options\0",
        SnmStatus::StartOutsideDomain => b"starting value outside the problem domain\0",
        SnmStatus::DegenerateDenominator => b"degenerate denominator\0",
        SnmStatus::StepUndefined => b"step undefined\0",
        SnmStatus::Pole => b"pole of the osculating curve\0",
        SnmStatus::NoConvergence => b"internal iteration did not converge\0",
        SnmStatus::Callback => b"callback reported failure\0",
        SnmStatus::IndexOutOfRange => b"index out of range\0",
        SnmStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Gamma quantile: x with P(a, x) = p.
///
/// # Safety
/// `opts` is NULL or valid; `out` is a valid pointer. On `Ok` and
/// `NotConverged` `*out` owns a report to be released with
/// [`snm_report_free`]; otherwise `*out` is set to NULL.
#[no_mangle]
pub unsafe extern "C" fn snm_invert_gamma(
    a: f64,
    p: f64,
    opts: *const SnmOptions,
    out: *mut *mut SnmReport,
) -> SnmStatus {
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guard(|| {
        let opts = read_options(opts);
        let result = GammaQuantileQuery::new(a, p).and_then(|q| invert_gamma(q, &opts)).map(|inv| inv.report);
        emit(result, out)
    })
}

/// Beta quantile: x with I_x(a, b) = p.
///
/// # Safety
/// As for [`snm_invert_gamma`].
#[no_mangle]
pub unsafe extern "C" fn snm_invert_beta(
    a: f64,
    b: f64,
    p: f64,
    opts: *const SnmOptions,
    out: *mut *mut SnmReport,
) -> SnmStatus {
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guard(|| {
        let opts = read_options(opts);
        let result = BetaQuantileQuery::new(a, b, p).and_then(|q| invert_beta(q, &opts)).map(|inv| inv.report);
        emit(result, out)
    })
}

/// Amplitude x ∈ [0, π/2] with E(x | m) = p E(m), m the modulus.
///
/// # Safety
/// As for [`snm_invert_gamma`].
#[no_mangle]
pub unsafe extern "C" fn snm_invert_ellip_e(
    m: f64,
    p: f64,
    opts: *const SnmOptions,
    out: *mut *mut SnmReport,
) -> SnmStatus {
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    guard(|| {
        let opts = read_options(opts);
        let result = EllipticQuery::new(m, p).and_then(|q| invert_ellip_e(q, &opts)).map(|inv| inv.report);
        emit(result, out)
    })
}

/// Solves f(x) = 0 on (lo, hi) from `x0`, with f and its first three
/// derivatives supplied by `derivatives`. Infinite bounds are allowed.
///
/// # Safety
/// `derivatives` must write four doubles to its `out` argument whenever it
/// returns 0, and be safe to call with `user_data`. `opts` and `out` as for
/// [`snm_invert_gamma`].
#[no_mangle]
pub unsafe extern "C" fn snm_solve(
    derivatives: SnmDerivativesFn,
    user_data: *mut c_void,
    lo: f64,
    hi: f64,
    x0: f64,
    opts: *const SnmOptions,
    out: *mut *mut SnmReport,
) -> SnmStatus {
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Some(callback) = derivatives else {
        return SnmStatus::NullPointer;
    };
    guard(|| {
        let opts = read_options(opts);
        let domain = match Interval::new(lo, hi, true, true) {
            Ok(d) => d,
            Err(e) => return e.into(),
        };
        let failed = std::cell::Cell::new(false);
        let problem = FnProblem::new(
            |x: f64| {
                let mut d = [f64::NAN; 4];
                if callback(x, user_data, d.as_mut_ptr()) != 0 {
                    failed.set(true);
                }
                d
            },
            domain,
        );
        let result = solve(&problem, x0, &opts);
        if failed.get() {
            return SnmStatus::Callback;
        }
        emit(result, out)
    })
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `report` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn snm_report_free(report: *mut SnmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` is NULL or a live report; `out` is NULL or valid.
unsafe fn read<T>(report: *const SnmReport, out: *mut T, get: impl FnOnce(&SolveReport) -> T) -> SnmStatus {
    match (report.as_ref(), out.is_null()) {
        (Some(r), false) => {
            *out = get(&r.inner);
            SnmStatus::Ok
        }
        _ => SnmStatus::NullPointer,
    }
}

/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_root(report: *const SnmReport, out: *mut f64) -> SnmStatus {
    read(report, out, |r| r.root)
}

/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_iterations(report: *const SnmReport, out: *mut u32) -> SnmStatus {
    read(report, out, |r| u32::try_from(r.iterations).unwrap_or(u32::MAX))
}

/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_converged(report: *const SnmReport, out: *mut bool) -> SnmStatus {
    read(report, out, |r| r.converged)
}

/// f at the root, in the variable the solve ran in.
///
/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_residual(report: *const SnmReport, out: *mut f64) -> SnmStatus {
    read(report, out, |r| r.residual)
}

/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_reason(report: *const SnmReport, out: *mut SnmStopReason) -> SnmStatus {
    read(report, out, |r| match r.reason {
        StopReason::StepTol => SnmStopReason::StepTol,
        StopReason::ResidualTol => SnmStopReason::ResidualTol,
        StopReason::MaxIter => SnmStopReason::MaxIter,
        StopReason::DerivativeVanished => SnmStopReason::DerivativeVanished,
        StopReason::DomainExit => SnmStopReason::DomainExit,
    })
}

/// Copies iteration `index` (0-based, below the iteration count).
///
/// # Safety
/// `report` is a live report and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_report_iteration(
    report: *const SnmReport,
    index: u32,
    out: *mut SnmIteration,
) -> SnmStatus {
    let Some(r) = report.as_ref() else {
        return SnmStatus::NullPointer;
    };
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    let Some(t) = r.inner.trace.get(index as usize) else {
        return SnmStatus::IndexOutOfRange;
    };
    *out = SnmIteration {
        n: u32::try_from(t.n).unwrap_or(u32::MAX),
        x: t.x,
        f: t.f,
        h: t.h,
        omega: t.omega,
        step: t.step,
        fallback_used: t.fallback_used,
    };
    SnmStatus::Ok
}

unsafe fn scalar(out: *mut f64, value: impl FnOnce() -> snm::Result<f64>) -> SnmStatus {
    if out.is_null() {
        return SnmStatus::NullPointer;
    }
    guard(|| match value() {
        Ok(v) => {
            *out = v;
            SnmStatus::Ok
        }
        Err(e) => e.into(),
    })
}

/// Regularized lower incomplete gamma P(a, x).
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_reg_gamma_p(a: f64, x: f64, out: *mut f64) -> SnmStatus {
    scalar(out, || reg_gamma_p(a, x))
}

/// Regularized upper incomplete gamma Q(a, x).
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_reg_gamma_q(a: f64, x: f64, out: *mut f64) -> SnmStatus {
    scalar(out, || reg_gamma_q(a, x))
}

/// Regularized incomplete beta I_x(a, b).
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_reg_beta(x: f64, a: f64, b: f64, out: *mut f64) -> SnmStatus {
    scalar(out, || reg_beta(x, BetaParams::new(a, b)?))
}

/// E(phi | m) with m the modulus.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snm_ellip_e_inc(phi: f64, m: f64, out: *mut f64) -> SnmStatus {
    scalar(out, || ellip_e_inc(phi, m))
}
