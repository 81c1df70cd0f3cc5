#ifndef MINIMAL_GAP_LAB_H
#define MINIMAL_GAP_LAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MGL_OK 0

#define MGL_FAILURE 1

#define MGL_INPUT 2

#define MGL_DISTRUST 3

#define MGL_NULL_POINTER -1

#define MGL_INVALID_UTF8 -2

#define MGL_PANIC -3

#define MGL_CHART_SPHERE 0

#define MGL_CHART_TORUS 1

/**
 * A validated minimal immersion.
 */
typedef struct MglSurface MglSurface;

typedef struct MglSurfaceInfo {
  /**
   * `MGL_CHART_SPHERE` or `MGL_CHART_TORUS`.
   */
  int32_t chart;
  uint32_t ambient_dim;
  uint32_t codimension;
  int32_t euler_char;
  double domain_u_min;
  double domain_u_max;
  double domain_v_min;
  double domain_v_max;
} MglSurfaceInfo;

/**
 * Pointwise invariants of a second fundamental form.
 */
typedef struct MglInvariants {
  double s;
  double k;
  double norm_a2;
  double rho0;
  double rho_perp;
  double lambda1;
  double lambda2;
  double u;
  double t;
  double ddvv_slack;
} MglInvariants;

/**
 * One evaluated chart point of a surface.
 */
typedef struct MglNode {
  struct MglInvariants invariants;
  double area_element;
  double laplacian_s;
  double b1_simons;
  double b1_direct;
  /**
   * Nonzero when any numerical trust check failed at this point.
   */
  int32_t flagged;
} MglNode;

typedef struct MglThresholds {
  double tau;
  double t_a;
  double t_b;
  double hat_a;
  double hat_b;
  double sigma;
} MglThresholds;

typedef struct MglPinching {
  double gamma;
  double s0;
  double s0_prime;
  double gamma_bound;
} MglPinching;

typedef struct MglCalabi {
  uint32_t s;
  /**
   * n of the target sphere Sⁿ, that is 2s.
   */
  uint32_t sphere_dim;
  double r;
  double k;
  double s_norm;
  double u;
  double area;
} MglCalabi;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last nonzero status on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *mgl_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void mgl_string_free(char *s);

/**
 * Loads a catalog name or a spec file path and validates it.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
int32_t mgl_surface_load(const char *source, struct MglSurface **out);

/**
 * # Safety
 * `surface` must come from `mgl_surface_load` and not have been freed.
 */
void mgl_surface_free(struct MglSurface *surface);

/**
 * # Safety
 * `surface` must be a live handle; `out` must be writable.
 */
int32_t mgl_surface_info(const struct MglSurface *surface, struct MglSurfaceInfo *out);

/**
 * Invariants of the shape pair a = h₁₁, b = h₁₂, each of length `q`.
 *
 * # Safety
 * `a` and `b` must point to `q` doubles; `out` must be writable.
 */
int32_t mgl_point_invariants(const double *a, const double *b, size_t q, struct MglInvariants *out);

/**
 * Evaluates the surface at chart coordinates (u, v).
 *
 * # Safety
 * `surface` must be a live handle; `out` must be writable.
 */
int32_t mgl_surface_evaluate(const struct MglSurface *surface,
                             double u,
                             double v,
                             struct MglNode *out);

/**
 * Canonical spec text of the surface. Free with `mgl_string_free`.
 *
 * # Safety
 * `surface` must be a live handle; `out` must be writable.
 */
int32_t mgl_surface_canonical(const struct MglSurface *surface, char **out);

/**
 * # Safety
 * `out` must be writable.
 */
int32_t mgl_thresholds(double tau, struct MglThresholds *out);

/**
 * # Safety
 * `out` must be writable.
 */
int32_t mgl_pinching_roots(double gamma, struct MglPinching *out);

/**
 * Constants of the Calabi sphere of harmonic degree `s` and radius `r`.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t mgl_calabi_constants(uint32_t s, double r, struct MglCalabi *out);

/**
 * Runs the exact identity suite for q = 1..=qmax. Returns `MGL_OK` when
 * every identity is proved and `MGL_FAILURE` otherwise.
 *
 * # Safety
 * `proved` and `total` must be writable.
 */
int32_t mgl_identities(uint32_t qmax, uint32_t *proved, uint32_t *total);

/**
 * Runs `verify` over `count` sources at `n_theta`×`n_phi` and writes the JSON
 * report to `json_out`. The status is the verify exit code; the report is
 * written for every status except null or non-UTF-8 input.
 *
 * # Safety
 * `sources` must point to `count` NUL-terminated strings; `json_out` must be
 * writable.
 */
int32_t mgl_verify_json(const char *const *sources,
                        size_t count,
                        uint32_t n_theta,
                        uint32_t n_phi,
                        char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINIMAL_GAP_LAB_H */
