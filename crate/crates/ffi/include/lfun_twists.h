#ifndef LFUN_TWISTS_H
#define LFUN_TWISTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LftStatus {
  LFT_STATUS_OK = 0,
  LFT_STATUS_NULL_POINTER = 1,
  LFT_STATUS_INVALID_ARGUMENT = 2,
  LFT_STATUS_COEFFICIENT_OVERFLOW = 3,
  LFT_STATUS_PRECISION_UNREACHABLE = 4,
  LFT_STATUS_DOMAIN = 5,
  LFT_STATUS_NOT_FRICKE_EIGENFORM = 6,
  LFT_STATUS_DEGENERATE_TEST_POINT = 7,
  LFT_STATUS_FRICKE_EIGENVALUE_UNSET = 8,
  LFT_STATUS_UNSUPPORTED_CUSP = 9,
  LFT_STATUS_POLE = 10,
  LFT_STATUS_BUDGET_EXCEEDED = 11,
  LFT_STATUS_INVALID_UTF8 = 12,
  LFT_STATUS_PANIC = 13,
} LftStatus;

/**
 * Opaque evaluator handle. Owns a private copy of its form.
 */
typedef struct LftEvaluator LftEvaluator;

/**
 * Opaque cusp form handle.
 */
typedef struct LftForm LftForm;

/**
 * A twisted value `L(f (x) e(a/c), s)` with the truncation actually used.
 */
typedef struct LftValue {
  double re;
  double im;
  size_t n_max_used;
  double tail_bound;
} LftValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string. Valid
 * until the next library call on the same thread.
 */
const char *lft_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void lft_string_free(char *s);

/**
 * Loads a form from `delta`, `11a` or `curve:a1,a2,a3,a4,a6:N[:p=ap,...]`
 * with `n_max` coefficients and computes its Fricke eigenvalue.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum LftStatus lft_form_new(const char *spec, size_t n_max, struct LftForm **out);

/**
 * # Safety
 * `form` must be null or a handle from [`lft_form_new`] not yet freed.
 */
void lft_form_free(struct LftForm *form);

/**
 * Weight of the form, 0 for a null handle.
 *
 * # Safety
 * `form` must be null or a live handle.
 */
uint32_t lft_form_weight(const struct LftForm *form);

/**
 * Level of the form, 0 for a null handle.
 *
 * # Safety
 * `form` must be null or a live handle.
 */
uint64_t lft_form_level(const struct LftForm *form);

/**
 * Exact coefficient `a(n)`, extending the table if needed. Values outside
 * the `int64_t` range give `LFT_STATUS_COEFFICIENT_OVERFLOW`.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum LftStatus lft_form_coefficient(const struct LftForm *form, size_t n, int64_t *out);

/**
 * Creates an evaluator with target accuracy `eps` on a copy of `form`.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum LftStatus lft_evaluator_new(const struct LftForm *form, double eps, struct LftEvaluator **out);

/**
 * # Safety
 * `ev` must be null or a handle from [`lft_evaluator_new`] not yet freed.
 */
void lft_evaluator_free(struct LftEvaluator *ev);

/**
 * `L(f (x) e(a/c), s)`.
 *
 * # Safety
 * `ev` must be a live handle; `out` must be writable.
 */
enum LftStatus lft_twist(const struct LftEvaluator *ev,
                         int64_t a,
                         int64_t c,
                         double s,
                         struct LftValue *out);

/**
 * Functional equation at `a/c` and `s`. Writes a JSON report to `out_json`
 * and, when `out_pass` is non-null, the verdict.
 *
 * # Safety
 * `ev` must be a live handle; `out_json` must be writable.
 */
enum LftStatus lft_verify_fe(const struct LftEvaluator *ev,
                             int64_t a,
                             int64_t c,
                             double s,
                             double tol,
                             char **out_json,
                             bool *out_pass);

/**
 * Period relation for `gamma = (g[0], g[1]; g[2], g[3])` in `Gamma_0(N)` at
 * the cusp `a/c`.
 *
 * # Safety
 * `ev` must be a live handle; `gamma` must point to four values;
 * `out_json` must be writable.
 */
enum LftStatus lft_verify_qmf(const struct LftEvaluator *ev,
                              const int64_t *gamma,
                              int64_t a,
                              int64_t c,
                              double tol,
                              char **out_json,
                              bool *out_pass);

/**
 * Period relation under the Fricke involution at the cusp `a/c`.
 *
 * # Safety
 * `ev` must be a live handle; `out_json` must be writable.
 */
enum LftStatus lft_verify_fricke(const struct LftEvaluator *ev,
                                 int64_t a,
                                 int64_t c,
                                 double tol,
                                 char **out_json,
                                 bool *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LFUN_TWISTS_H */
