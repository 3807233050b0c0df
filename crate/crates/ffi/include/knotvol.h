#ifndef KNOTVOL_H
#define KNOTVOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define KV_KNOT_4_1 0

#define KV_KNOT_5_2 1

#define KV_KNOT_6_1 2

#define KV_MODE_DIRECT 0

#define KV_MODE_LOGSCALE 1

#define KV_MODE_EXACT 2

#define KV_MODEL_LINEAR 0

#define KV_MODEL_LINEAR_PLUS_LOG 1

typedef enum KvStatus {
  KV_STATUS_OK = 0,
  KV_STATUS_NULL_POINTER = 1,
  KV_STATUS_INVALID_ARGUMENT = 2,
  KV_STATUS_INVALID_ORDER = 3,
  KV_STATUS_EXACT_BUDGET = 4,
  KV_STATUS_DIRECT_OVERFLOW = 5,
  KV_STATUS_SINGULAR = 6,
  KV_STATUS_POLE = 7,
  KV_STATUS_NON_CONVERGENCE = 8,
  KV_STATUS_DEGENERATE = 9,
  KV_STATUS_SELECTION = 10,
  KV_STATUS_RANK_DEFICIENT = 11,
  KV_STATUS_INVALID_SERIES = 12,
  KV_STATUS_NOT_REPRESENTABLE = 13,
  KV_STATUS_OUT_OF_RANGE = 14,
  KV_STATUS_PANIC = 15,
} KvStatus;

// Growth-rate fit.
typedef struct KvFit KvFit;

// ⟨L⟩ at one order.
typedef struct KvInvariant KvInvariant;

// Geometric stationary point and hyperbolic volume.
typedef struct KvVolume KvVolume;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on this thread.
const char *kv_last_error_message(void);

// Static name of a status code.
const char *kv_status_name(enum KvStatus status);

// Evaluates ⟨knot⟩ at order `n`. `threads` of 0 or 1 runs on the caller.
//
// # Safety
// `out` must be valid for writes.
enum KvStatus kv_invariant_new(int32_t knot,
                               uint64_t n,
                               int32_t mode,
                               uint32_t threads,
                               struct KvInvariant **out);

// # Safety
// `h` must come from [`kv_invariant_new`] and not be used afterwards.
void kv_invariant_free(struct KvInvariant *h);

// ln|⟨L⟩| and arg ⟨L⟩; always available.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_invariant_log_polar(const struct KvInvariant *h, double *log_abs, double *arg);

// ⟨L⟩ as a complex double; `NotRepresentable` when it overflows.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_invariant_value(const struct KvInvariant *h, double *re, double *im);

// 2π·ln|⟨L⟩|/N, number of summed terms, and the accumulation error estimate.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_invariant_stats(const struct KvInvariant *h,
                                 double *volume_ratio,
                                 uint64_t *term_count,
                                 double *accum_error);

// # Safety
// `out` must be valid for writes.
enum KvStatus kv_volume_new(int32_t knot, struct KvVolume **out);

// # Safety
// `h` must come from [`kv_volume_new`] and not be used afterwards.
void kv_volume_free(struct KvVolume *h);

// Volume, residual of the stationary equations, and number of coordinates.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_volume_summary(const struct KvVolume *h,
                                double *volume,
                                double *residual,
                                size_t *dimension);

// Coordinate `index` (z, u, v order) of the stationary point.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_volume_coordinate(const struct KvVolume *h, size_t index, double *re, double *im);

// Fits the growth of |⟨L⟩| over N = n_min, n_min + step, … ≤ n_max.
//
// # Safety
// `out` must be valid for writes.
enum KvStatus kv_fit_new_range(int32_t knot,
                               uint64_t n_min,
                               uint64_t n_max,
                               uint64_t step,
                               int32_t model,
                               struct KvFit **out);

// Fits caller-supplied (N, ln|⟨L⟩|) pairs.
//
// # Safety
// `ns` and `log_abs` must each point to `len` readable values; `out` must
// be valid for writes.
enum KvStatus kv_fit_new_points(int32_t knot,
                                const uint64_t *ns,
                                const double *log_abs,
                                size_t len,
                                int32_t model,
                                struct KvFit **out);

// # Safety
// `h` must come from a `kv_fit_new_*` call and not be used afterwards.
void kv_fit_free(struct KvFit *h);

// Coefficients of ln|⟨L⟩| ≈ a·N + b·ln N + c (b = 0 for the linear model).
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_fit_coefficients(const struct KvFit *h, double *a, double *b, double *c);

// 2π·a and the rms residual of the fit.
//
// # Safety
// `h` must be a live handle; outputs must be valid for writes.
enum KvStatus kv_fit_summary(const struct KvFit *h, double *volume_estimate, double *rms_residual);

// Li₂(re + i·im) on the principal branch.
//
// # Safety
// Outputs must be valid for writes.
enum KvStatus kv_li2(double re, double im, double *out_re, double *out_im);

// Lobachevsky's function Λ(θ).
double kv_lobachevsky(double theta);

// Faddeev's S_γ(re + i·im) with the default quadrature.
//
// # Safety
// Outputs must be valid for writes.
enum KvStatus kv_faddeev_s(double gamma, double re, double im, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTVOL_H */
