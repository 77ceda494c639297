#ifndef MINLOR_H
#define MINLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `Ok` is zero and every other value is a failure.
 */
typedef enum MlStatus {
  ML_STATUS_OK = 0,
  ML_STATUS_NULL_POINTER = 1,
  ML_STATUS_INVALID_UTF8 = 2,
  ML_STATUS_SYNTAX = 3,
  ML_STATUS_DOMAIN = 4,
  ML_STATUS_DEGENERATE = 5,
  ML_STATUS_PARAMETER = 6,
  ML_STATUS_NOT_SL2 = 7,
  ML_STATUS_POLE = 8,
  ML_STATUS_SINGULAR = 9,
  ML_STATUS_NOT_GENERAL_TYPE = 10,
  ML_STATUS_AUDIT = 11,
  ML_STATUS_GRID = 12,
  ML_STATUS_NUMERICAL = 13,
  ML_STATUS_PANIC = 14,
} MlStatus;

/**
 * Causal type of a surface.
 */
typedef enum MlSurfaceType {
  ML_SURFACE_TYPE_NOT_GENERAL = 0,
  ML_SURFACE_TYPE_FIRST = 1,
  ML_SURFACE_TYPE_SECOND = 2,
  ML_SURFACE_TYPE_THIRD = 3,
} MlSurfaceType;

/**
 * Opaque surface handle.
 */
typedef struct MlSurface MlSurface;

/**
 * Natural-equation residuals of [`ml_surface_verify`].
 */
typedef struct MlResidualReport {
  double r1_max;
  double r1_rms;
  double r2_max;
  double r2_rms;
  /**
   * Sign of E on the grid, or 0 if mixed.
   */
  double delta;
  size_t interior;
  size_t masked;
  bool pass;
} MlResidualReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ml_version(void);

/**
 * Message of the last failure on this thread. Valid until the next failing call on the same thread.
 */
const char *ml_last_error_message(void);

/**
 * Builds one of the example surfaces `"m1"`, `"m2"` or `"m3"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out_surface` a valid pointer.
 */
enum MlStatus ml_surface_example(const char *name, struct MlSurface **out_surface);

/**
 * Surface from two natural-parameter generators `(g, h, ω)` on `[a, b]` domains.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out_surface` must be valid.
 */
enum MlStatus ml_surface_from_pairs(const char *g1,
                                    const char *h1,
                                    int32_t omega1,
                                    const char *g2,
                                    const char *h2,
                                    int32_t omega2,
                                    double dom1_min,
                                    double dom1_max,
                                    double dom2_min,
                                    double dom2_max,
                                    struct MlSurface **out_surface);

/**
 * Surface from two Weierstrass triples `(f, g, h)`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out_surface` must be valid.
 */
enum MlStatus ml_surface_from_triples(const char *f1,
                                      const char *g1,
                                      const char *h1,
                                      const char *f2,
                                      const char *g2,
                                      const char *h2,
                                      double dom1_min,
                                      double dom1_max,
                                      double dom2_min,
                                      double dom2_max,
                                      struct MlSurface **out_surface);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ml_surface_free(struct MlSurface *s);

/**
 * # Safety
 * `s` and `out_type` must be valid pointers.
 */
enum MlStatus ml_surface_type(const struct MlSurface *s, enum MlSurfaceType *out_type);

/**
 * Gauss curvature and normal curvature at isothermal `(u, v)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlStatus ml_surface_curvature(const struct MlSurface *s,
                                   double u,
                                   double v,
                                   double *out_k,
                                   double *out_kappa);

/**
 * Position `x(u, v)`; `out_x` receives four values.
 *
 * # Safety
 * `out_x` must point to at least four doubles.
 */
enum MlStatus ml_surface_position(const struct MlSurface *s, double u, double v, double *out_x);

/**
 * Conformal factor `E(u, v)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlStatus ml_surface_induced_e(const struct MlSurface *s, double u, double v, double *out_e);

/**
 * Natural-equation residuals on `[u0, u1] × [v0, v1]` with step `h`.
 * A residual above `tol` is not an error: it is reported through `pass`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum MlStatus ml_surface_verify(const struct MlSurface *s,
                                double u0,
                                double u1,
                                double v0,
                                double v1,
                                double h,
                                double tol,
                                struct MlResidualReport *out_report);

/**
 * Linear part of the motion induced by `B1, B2 ∈ SL(2)` (row-major `a, b, c, d`),
 * written row-major into `out_a` (16 values).
 *
 * # Safety
 * `b1`, `b2` must point to four doubles and `out_a` to sixteen.
 */
enum MlStatus ml_motion_from_spinors(const double *b1, const double *b2, double *out_a);

/**
 * Compares the curvature fields of two quadruples `(g1, h1, g2, h2)` on an `n × n` grid.
 *
 * # Safety
 * `qa` and `qb` must each point to four NUL-terminated strings; out pointers must be valid.
 */
enum MlStatus ml_same_solution(const char *const *qa,
                               const char *const *qb,
                               double dom1_min,
                               double dom1_max,
                               double dom2_min,
                               double dom2_max,
                               int32_t delta,
                               double u0,
                               double u1,
                               double v0,
                               double v1,
                               size_t n,
                               double tol,
                               bool *out_same,
                               double *out_max_rel_diff);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINLOR_H */
