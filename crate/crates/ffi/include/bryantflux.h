#ifndef BRYANTFLUX_H
#define BRYANTFLUX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BfKillingKind {
  BF_KILLING_KIND_TRANSLATION = 0,
  BF_KILLING_KIND_ROTATION = 1,
} BfKillingKind;

typedef enum BfStatus {
  BF_STATUS_OK = 0,
  BF_STATUS_NULL_POINTER = 1,
  BF_STATUS_DOMAIN = 2,
  BF_STATUS_UNBALANCEABLE = 3,
  BF_STATUS_LOG_TERM_REQUIRED = 4,
  BF_STATUS_CONSISTENCY = 5,
  BF_STATUS_DEGENERATE = 6,
  BF_STATUS_PARSE = 7,
  BF_STATUS_IO = 8,
  BF_STATUS_PANIC = 99,
} BfStatus;

/*
 Opaque frame handle.
 */
typedef struct BfFrame BfFrame;

typedef struct BfComplex {
  double re;
  double im;
} BfComplex;

/*
 Flux polynomial coefficients `φ₂X² + 2φ₁X + φ₀`.
 */
typedef struct BfFluxTriple {
  struct BfComplex phi0;
  struct BfComplex phi1;
  struct BfComplex phi2;
} BfFluxTriple;

/*
 A point of the Riemann sphere; `re`, `im` are ignored when `is_infinite` is set.
 */
typedef struct BfPoint {
  double re;
  double im;
  bool is_infinite;
} BfPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null after a success.

 The pointer stays valid until the next call into this library on the same thread.
 */
const char *bf_last_error_message(void);

/*
 # Safety
 `s` is null or a string returned by this library that has not been freed.
 */
void bf_string_free(char *s);

/*
 # Safety
 `frame` is null or a handle from this library that has not been freed.
 */
void bf_frame_free(struct BfFrame *frame);

/*
 Catenoid cousin with growth exponent `mu`, axis `(0, ∞)`.

 # Safety
 `out` is a valid pointer to write a handle into.
 */
enum BfStatus bf_frame_catenoid_cousin(double mu, struct BfFrame **out);

/*
 Canonical catenoidal frame with `h = h(0)(1 + e₁z + e₂z² + …)` and axis `(axis_param, ∞)`.

 # Safety
 `perturbation` points to `len` values (or is null with `len == 0`); `out` is valid.
 */
enum BfStatus bf_frame_canonical_catenoidal(double mu,
                                            const struct BfComplex *perturbation,
                                            size_t len,
                                            struct BfComplex axis_param,
                                            struct BfFrame **out);

/*
 Canonical horospherical frame of order `mu ≥ 2` with `h` given by its coefficients.

 # Safety
 `h` points to `len ≥ 1` values; `out` is valid.
 */
enum BfStatus bf_frame_canonical_horospherical(uint32_t mu,
                                               const struct BfComplex *h,
                                               size_t len,
                                               struct BfFrame **out);

/*
 # Safety
 `out` is valid.
 */
enum BfStatus bf_frame_horosphere(struct BfFrame **out);

/*
 Builds a frame from either an end-spec or a serialized frame.

 # Safety
 `json` is a NUL-terminated UTF-8 string; `out` is valid.
 */
enum BfStatus bf_frame_from_json(const char *json, struct BfFrame **out);

/*
 Serializes a frame; free the result with [`bf_string_free`].

 # Safety
 `frame` is a live handle; `out` is valid.
 */
enum BfStatus bf_frame_to_json(const struct BfFrame *frame, char **out);

/*
 Image of a frame under the isometry `(α, β; γ, δ)`, normalized to determinant 1.

 # Safety
 `frame` is a live handle; `m` points to four values `α, β, γ, δ`; `out` is valid.
 */
enum BfStatus bf_frame_transform(const struct BfFrame *frame,
                                 const struct BfComplex *m,
                                 struct BfFrame **out);

/*
 # Safety
 `frame` is a live handle; `out` is valid.
 */
enum BfStatus bf_flux_triple(const struct BfFrame *frame, struct BfFluxTriple *out);

/*
 Flux of the Killing field along the oriented geodesic `(from, to)`, by residues.

 # Safety
 `frame` is a live handle; `out` is valid.
 */
enum BfStatus bf_flux_for_geodesic(const struct BfFrame *frame,
                                   struct BfPoint from,
                                   struct BfPoint to,
                                   enum BfKillingKind kind,
                                   double *out);

/*
 Flux by quadrature on the circle `|z| = rho` with `samples` points (a power of two).

 # Safety
 `frame` is a live handle; `out` is valid.
 */
enum BfStatus bf_flux_numeric(const struct BfFrame *frame,
                              struct BfPoint from,
                              struct BfPoint to,
                              enum BfKillingKind kind,
                              double rho,
                              size_t samples,
                              double *out);

/*
 # Safety
 `points` points to four values; `out` is valid.
 */
enum BfStatus bf_cross_ratio(const struct BfPoint *points, struct BfComplex *out);

/*
 Axis endpoints `𝒜ⱼ` of three balanced catenoidal ends with boundaries `-1, 0, 1`.

 # Safety
 `sigma` points to three values; `out` points to room for three points.
 */
enum BfStatus bf_three_end_axes(const double *sigma, struct BfPoint *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRYANTFLUX_H */
