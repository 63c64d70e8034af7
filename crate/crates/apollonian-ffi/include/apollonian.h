#ifndef APOLLONIAN_H
#define APOLLONIAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApoStatus {
  APO_STATUS_OK = 0,
  APO_STATUS_INVALID_INPUT = 1,
  APO_STATUS_NOT_DESCARTES = 2,
  APO_STATUS_NOT_REDUCED = 3,
  APO_STATUS_CAP_EXCEEDED = 4,
  APO_STATUS_OVERFLOW = 5,
  APO_STATUS_UNBOUNDED = 6,
  APO_STATUS_UNDEFINED = 7,
  APO_STATUS_NO_SAMPLE = 8,
  APO_STATUS_INCONSISTENT = 9,
  APO_STATUS_NOT_REPRESENTABLE = 10,
  APO_STATUS_INVARIANT = 11,
  APO_STATUS_NULL_POINTER = 12,
  APO_STATUS_PANIC = 13,
} ApoStatus;

// Opaque continued fraction: `a0` followed by the computed quotients.
typedef struct ApoContinuedFraction ApoContinuedFraction;

// Opaque curvature orbit.
typedef struct ApoOrbit ApoOrbit;

// Packing type and characters; `chi4` is 0 where it is undefined.
typedef struct ApoPackingType {
  uint8_t n;
  uint8_t k;
  int8_t chi2;
  int8_t chi4;
} ApoPackingType;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated version string.
const char *apo_version(void);

// Static, NUL-terminated description of a status code.
const char *apo_error_string(enum ApoStatus status);

// Kronecker symbol `(a/n)`.
int32_t apo_kronecker(int64_t a, int64_t n);

// `(Σk)² − 2Σk²` for four curvatures; zero exactly for Descartes quadruples.
//
// # Safety
// `curvatures` must point to 4 readable `int64_t`, `out` to a writable one.
enum ApoStatus apo_descartes_form(const int64_t *curvatures, int64_t *out);

// Root of the packing through a Descartes quadruple, sorted ascending.
//
// # Safety
// `curvatures` must point to 4 readable and `root_out` to 4 writable `int64_t`.
enum ApoStatus apo_reduce_to_root(const int64_t *curvatures, int64_t *root_out);

// Count curvatures `≤ n` in the packing of a root quadruple.
//
// # Safety
// `root` must point to 4 readable `int64_t`; `out` must be writable. On
// success `*out` owns a handle to be released with [`apo_orbit_free`].
enum ApoStatus apo_orbit_enumerate(const int64_t *root, int64_t n, struct ApoOrbit **out);

// Multiplicity of curvature `k` (0 for a null handle).
//
// # Safety
// `orbit` must be null or a live handle.
uint64_t apo_orbit_count(const struct ApoOrbit *orbit, int64_t k);

// Number of circles counted, with multiplicity.
//
// # Safety
// `orbit` must be null or a live handle.
uint64_t apo_orbit_total(const struct ApoOrbit *orbit);

// # Safety
// `orbit` must be null or a handle from [`apo_orbit_enumerate`] not yet freed.
void apo_orbit_free(struct ApoOrbit *orbit);

// Type `(n, k)` mod 24 and the characters of a packing.
//
// # Safety
// `root` must point to 4 readable `int64_t`, `out` to a writable struct.
enum ApoStatus apo_classify(const int64_t *root, struct ApoPackingType *out);

// Fundamental solution of `X² − dY² = 4`.
//
// # Safety
// `x` and `y` must be writable.
enum ApoStatus apo_pell(int64_t d, int64_t *x, int64_t *y);

// Expand a number given as text (`17/5`, `sqrt(7)`, `pi`, ...) to `depth`
// quotients after `a0`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable. Release
// the handle with [`apo_cf_free`].
enum ApoStatus apo_cf_expand(const char *text, uintptr_t depth, struct ApoContinuedFraction **out);

// Number of stored terms, `a0` included.
//
// # Safety
// `cf` must be null or a live handle.
uintptr_t apo_cf_len(const struct ApoContinuedFraction *cf);

// Term `i` (`i = 0` is `a0`).
//
// # Safety
// `cf` must be a live handle and `out` writable.
enum ApoStatus apo_cf_get(const struct ApoContinuedFraction *cf, uintptr_t i, int64_t *out);

// # Safety
// `cf` must be null or a handle from [`apo_cf_expand`] not yet freed.
void apo_cf_free(struct ApoContinuedFraction *cf);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APOLLONIAN_H */
