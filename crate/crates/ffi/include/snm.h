#ifndef SNM_H
#define SNM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SnmMethod {
  SNM_METHOD_SNM = 0,
  SNM_METHOD_HALLEY = 1,
  SNM_METHOD_NEWTON = 2,
} SnmMethod;

typedef enum SnmSafeguard {
  SNM_SAFEGUARD_CLAMP_TO_DOMAIN = 0,
  SNM_SAFEGUARD_FAIL = 1,
} SnmSafeguard;

/**
 * Result code of every call.
 */
typedef enum SnmStatus {
  SNM_STATUS_OK = 0,
  /**
   * The solve ran but did not converge; the report is still written.
   */
  SNM_STATUS_NOT_CONVERGED = 1,
  SNM_STATUS_NULL_POINTER = 2,
  /**
   * An argument is outside the domain of the routine.
   */
  SNM_STATUS_DOMAIN = 3,
  SNM_STATUS_INVALID_OPTIONS = 4,
  SNM_STATUS_START_OUTSIDE_DOMAIN = 5,
  SNM_STATUS_DEGENERATE_DENOMINATOR = 6,
  SNM_STATUS_STEP_UNDEFINED = 7,
  SNM_STATUS_POLE = 8,
  /**
   * An internal series or continued fraction ran out of budget.
   */
  SNM_STATUS_NO_CONVERGENCE = 9,
  /**
   * The user callback reported failure.
   */
  SNM_STATUS_CALLBACK = 10,
  SNM_STATUS_INDEX_OUT_OF_RANGE = 11,
  SNM_STATUS_PANIC = 12,
} SnmStatus;

typedef enum SnmStopReason {
  SNM_STOP_REASON_STEP_TOL = 0,
  SNM_STOP_REASON_RESIDUAL_TOL = 1,
  SNM_STOP_REASON_MAX_ITER = 2,
  SNM_STOP_REASON_DERIVATIVE_VANISHED = 3,
  SNM_STOP_REASON_DOMAIN_EXIT = 4,
} SnmStopReason;

/**
 * Opaque solve report.
 */
typedef struct SnmReport SnmReport;

/**
 * Solver options. Start from [`snm_options_default`].
 */
typedef struct SnmOptions {
  double abs_tol;
  double rel_tol;
  /**
   * |f| threshold; 0 disables the residual test.
   */
  double residual_tol;
  uint32_t max_iter;
  enum SnmMethod method;
  double series_threshold;
  enum SnmSafeguard safeguard;
} SnmOptions;

/**
 * Evaluates `[f, f', f'', f''']` at `x` into `out`; returns 0 on success.
 */
typedef int (*SnmDerivativesFn)(double x, void *user_data, double *out);

/**
 * One accepted iteration, as stored in a report.
 */
typedef struct SnmIteration {
  uint32_t n;
  double x;
  double f;
  double h;
  double omega;
  double step;
  bool fallback_used;
} SnmIteration;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library defaults.
 */
struct SnmOptions snm_options_default(void);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *snm_status_message(enum SnmStatus status);

/**
 * Gamma quantile: x with P(a, x) = p.
 *
 * # Safety
 * `opts` is NULL or valid; `out` is a valid pointer. On `Ok` and
 * `NotConverged` `*out` owns a report to be released with
 * [`snm_report_free`]; otherwise `*out` is set to NULL.
 */
enum SnmStatus snm_invert_gamma(double a,
                                double p,
                                const struct SnmOptions *opts,
                                struct SnmReport **out);

/**
 * Beta quantile: x with I_x(a, b) = p.
 *
 * # Safety
 * As for [`snm_invert_gamma`].
 */
enum SnmStatus snm_invert_beta(double a,
                               double b,
                               double p,
                               const struct SnmOptions *opts,
                               struct SnmReport **out);

/**
 * Amplitude x ∈ [0, π/2] with E(x | m) = p E(m), m the modulus.
 *
 * # Safety
 * As for [`snm_invert_gamma`].
 */
enum SnmStatus snm_invert_ellip_e(double m,
                                  double p,
                                  const struct SnmOptions *opts,
                                  struct SnmReport **out);

/**
 * Solves f(x) = 0 on (lo, hi) from `x0`, with f and its first three
 * derivatives supplied by `derivatives`. Infinite bounds are allowed.
 *
 * # Safety
 * `derivatives` must write four doubles to its `out` argument whenever it
 * returns 0, and be safe to call with `user_data`. `opts` and `out` as for
 * [`snm_invert_gamma`].
 */
enum SnmStatus snm_solve(SnmDerivativesFn derivatives,
                         void *user_data,
                         double lo,
                         double hi,
                         double x0,
                         const struct SnmOptions *opts,
                         struct SnmReport **out);

/**
 * Releases a report. NULL is ignored.
 *
 * # Safety
 * `report` is NULL or was returned by this library and not yet freed.
 */
void snm_report_free(struct SnmReport *report);

/**
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_root(const struct SnmReport *report, double *out);

/**
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_iterations(const struct SnmReport *report, uint32_t *out);

/**
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_converged(const struct SnmReport *report, bool *out);

/**
 * f at the root, in the variable the solve ran in.
 *
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_residual(const struct SnmReport *report, double *out);

/**
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_reason(const struct SnmReport *report, enum SnmStopReason *out);

/**
 * Copies iteration `index` (0-based, below the iteration count).
 *
 * # Safety
 * `report` is a live report and `out` a valid pointer.
 */
enum SnmStatus snm_report_iteration(const struct SnmReport *report,
                                    uint32_t index,
                                    struct SnmIteration *out);

/**
 * Regularized lower incomplete gamma P(a, x).
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum SnmStatus snm_reg_gamma_p(double a, double x, double *out);

/**
 * Regularized upper incomplete gamma Q(a, x).
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum SnmStatus snm_reg_gamma_q(double a, double x, double *out);

/**
 * Regularized incomplete beta I_x(a, b).
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum SnmStatus snm_reg_beta(double x, double a, double b, double *out);

/**
 * E(phi | m) with m the modulus.
 *
 * # Safety
 * `out` is a valid pointer.
 */
enum SnmStatus snm_ellip_e_inc(double phi, double m, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SNM_H */
