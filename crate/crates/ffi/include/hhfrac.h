#ifndef HHFRAC_H
#define HHFRAC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. The numeric values match the command-line exit codes.
typedef enum {
  HHF_STATUS_OK = 0,
  // An expression, check name or argument could not be parsed or is out of range.
  HHF_STATUS_PARSE = 1,
  // A hypothesis did not hold (non-monotone `h`, non-differentiable `f`, ...).
  HHF_STATUS_HYPOTHESIS = 2,
  // Evaluation or quadrature failed.
  HHF_STATUS_NUMERIC = 3,
  // A required pointer was null.
  HHF_STATUS_NULL_POINTER = 4,
  // The library panicked; this is a bug.
  HHF_STATUS_PANIC = 5,
} HhfStatus;

// Parsed expression in `x`.
typedef struct HhfExpr HhfExpr;

// Validated problem instance `(f, g, h, [a, b], alpha, q)`.
typedef struct HhfInstance HhfInstance;

// Numbers from one check. Fields that do not apply to the check are NaN.
typedef struct {
  // 1 when the check passed, 0 otherwise.
  int32_t pass;
  // 0 pass, 1 fail, 2 skipped (hypothesis), 3 error.
  int32_t status;
  double lhs;
  double middle;
  double rhs;
  double residual;
  double slack;
  double tol;
  uint64_t evals;
} HhfCheckResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next call.
const char *hhf_last_error(void);

// Library version as a static NUL-terminated string.
const char *hhf_version(void);

// Parses `text` into a new expression handle stored in `*out`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
HhfStatus hhf_expr_parse(const char *text, HhfExpr **out);

// # Safety
// `expr` must come from [`hhf_expr_parse`] and not be used afterwards. Null is ignored.
void hhf_expr_free(HhfExpr *expr);

// Evaluates `expr` at `x`.
//
// # Safety
// `expr` must be a live handle and `out` a valid pointer.
HhfStatus hhf_expr_eval(const HhfExpr *expr, double x, double *out);

// Fractional integral of `f` with respect to `h` on `[a, b]`, evaluated at `at`.
// `side` is 0 for the left-sided operator and 1 for the right-sided one.
//
// # Safety
// `f` and `h` must be live handles and `out` a valid pointer.
HhfStatus hhf_frac_int(const HhfExpr *f,
                       const HhfExpr *h,
                       double a,
                       double b,
                       double alpha,
                       int32_t side,
                       double at,
                       double *out);

// Builds and validates an instance from expression strings.
//
// # Safety
// The strings must be NUL-terminated and `out` a valid pointer.
HhfStatus hhf_instance_new(const char *f,
                           const char *g,
                           const char *h,
                           double a,
                           double b,
                           double alpha,
                           double q,
                           HhfInstance **out);

// # Safety
// `inst` must come from [`hhf_instance_new`] and not be used afterwards. Null is ignored.
void hhf_instance_free(HhfInstance *inst);

// Runs `check` (e.g. `"identity-l1"`, `"bound-t2"`, `"hh-fejer"`) on `inst`.
// `tol <= 0` keeps the default tolerances. A skipped or failed check still returns
// [`HhfStatus::Ok`]; inspect `out.status`.
//
// # Safety
// `inst` must be a live handle, `check` NUL-terminated and `out` a valid pointer.
HhfStatus hhf_check(const HhfInstance *inst, const char *check, double tol, HhfCheckResult *out);

// Runs `check` on `inst` and stores the full report as JSON in `*out`; release it with
// [`hhf_string_free`].
//
// # Safety
// `inst` must be a live handle, `check` NUL-terminated and `out` a valid pointer.
HhfStatus hhf_check_json(const HhfInstance *inst, const char *check, double tol, char **out);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void hhf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HHFRAC_H */
