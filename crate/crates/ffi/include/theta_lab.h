#ifndef THETA_LAB_H
#define THETA_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThetaLabStatus {
  THETA_LAB_STATUS_OK = 0,
  THETA_LAB_STATUS_NULL_POINTER = 1,
  THETA_LAB_STATUS_DOMAIN = 2,
  THETA_LAB_STATUS_PRECONDITION = 3,
  THETA_LAB_STATUS_CONDITIONING = 4,
  THETA_LAB_STATUS_UNSUPPORTED = 5,
  THETA_LAB_STATUS_INVALID_UTF8 = 6,
  THETA_LAB_STATUS_PANIC = 7,
} ThetaLabStatus;

/**
 * Exact q-expansion of a Hecke theta.
 */
typedef struct ThetaLabQExp ThetaLabQExp;

/**
 * Outcome of a verification suite, with its JSON report.
 */
typedef struct ThetaLabReport ThetaLabReport;

typedef struct ThetaLabComplex {
  double re;
  double im;
} ThetaLabComplex;

/**
 * A truncated series value with its certified tail bound.
 */
typedef struct ThetaLabSeries {
  struct ThetaLabComplex value;
  double tail_bound;
  size_t radius_used;
  bool certified;
} ThetaLabSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf`, NUL-terminated and truncated to `len`.
 * Returns the full message length in bytes, or 0 when there is no pending error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t theta_lab_last_error(char *buf, size_t len);

/**
 * Kronecker symbol (a/b).
 */
int32_t theta_lab_kronecker(int64_t a, int64_t b);

/**
 * Riemann theta at the n×n period matrix `tau` (row-major, πi convention).
 * Passing 0 for both `target_tail` and `max_radius` selects the default truncation.
 *
 * # Safety
 * `tau` must point to n·n values and `result` must be writable.
 */
enum ThetaLabStatus theta_lab_riemann_theta(const struct ThetaLabComplex *tau,
                                            size_t n,
                                            double target_tail,
                                            size_t max_radius,
                                            struct ThetaLabSeries *result);

/**
 * Jacobi theta at (tau, z), with tau n×n row-major and z of length n.
 *
 * # Safety
 * `tau` must point to n·n values, `z` to n values, and `result` must be writable.
 */
enum ThetaLabStatus theta_lab_jacobi_theta(const struct ThetaLabComplex *tau,
                                           const struct ThetaLabComplex *z,
                                           size_t n,
                                           double target_tail,
                                           size_t max_radius,
                                           struct ThetaLabSeries *result);

/**
 * Exact q-expansion of the Hecke theta for α = a + b√d and modulus Q·√(disc),
 * keeping norms up to `max_norm`. `full_mode` selects the full lattice sum instead of μμ′ > 0.
 *
 * # Safety
 * `out_handle` must be writable. The handle is released with [`theta_lab_qexp_free`].
 */
enum ThetaLabStatus theta_lab_hecke_qexp_new(int64_t a,
                                             int64_t b,
                                             int64_t d,
                                             uint64_t q,
                                             bool full_mode,
                                             uint64_t max_norm,
                                             struct ThetaLabQExp **out_handle);

/**
 * Coefficients of η(τ)² through q^n; the handle's exponents are integers.
 *
 * # Safety
 * `out_handle` must be writable.
 */
enum ThetaLabStatus theta_lab_eta_sq_qexp_new(size_t n, struct ThetaLabQExp **out_handle);

/**
 * Number of terms in the expansion; 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t theta_lab_qexp_len(const struct ThetaLabQExp *handle);

/**
 * Term `i` as q^{exp_num/exp_den} with integer coefficient.
 *
 * # Safety
 * `handle` must be a live handle and the three outputs writable.
 */
enum ThetaLabStatus theta_lab_qexp_term(const struct ThetaLabQExp *handle,
                                        size_t i,
                                        int64_t *exp_num,
                                        int64_t *exp_den,
                                        int64_t *coeff);

/**
 * # Safety
 * `handle` must be null or a handle not yet freed.
 */
void theta_lab_qexp_free(struct ThetaLabQExp *handle);

/**
 * Runs a named verification suite (`"all"` runs every suite).
 * `samples` and `tol` of 0 keep the suite defaults.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out_handle` writable.
 * The handle is released with [`theta_lab_report_free`].
 */
enum ThetaLabStatus theta_lab_verify(const char *suite,
                                     uint64_t seed,
                                     size_t samples,
                                     double tol,
                                     struct ThetaLabReport **out_handle);

/**
 * # Safety
 * `handle` must be null or a live handle.
 */
bool theta_lab_report_passed(const struct ThetaLabReport *handle);

/**
 * The report as JSON. The string is owned by the handle and valid until it is freed.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
const char *theta_lab_report_json(const struct ThetaLabReport *handle);

/**
 * # Safety
 * `handle` must be null or a handle not yet freed.
 */
void theta_lab_report_free(struct ThetaLabReport *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THETA_LAB_H */
