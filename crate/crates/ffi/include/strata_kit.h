#ifndef STRATA_KIT_H
#define STRATA_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_PARSE = 3,
  SK_STATUS_VALIDATION = 4,
  SK_STATUS_DIMENSION_MISMATCH = 5,
  SK_STATUS_UNKNOWN_SIGNATURE = 6,
  SK_STATUS_OTHER = 7,
  SK_STATUS_PANIC = 8,
} SkStatus;

/**
 * Opaque algebra handle.
 */
typedef struct SkAlgebra SkAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *sk_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call on this thread.
 */
const char *sk_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned through a `char **` output of this library
 * and not yet freed.
 */
void sk_string_free(char *s);

/**
 * Parses and validates an algebra spec (TOML text).
 *
 * # Safety
 * `spec` is a NUL-terminated string; `out` is writable.
 */
enum SkStatus sk_algebra_from_spec(const char *spec, struct SkAlgebra **out);

/**
 * Releases an algebra handle. Null is ignored.
 *
 * # Safety
 * `h` is null or a live handle from [`sk_algebra_from_spec`].
 */
void sk_algebra_free(struct SkAlgebra *h);

/**
 * Dimension of the algebra, or 0 for a null handle.
 *
 * # Safety
 * `h` is null or a live handle.
 */
size_t sk_algebra_dim(const struct SkAlgebra *h);

/**
 * Sum of the weights, or 0 for a null handle.
 *
 * # Safety
 * `h` is null or a live handle.
 */
uint32_t sk_homogeneous_dimension(const struct SkAlgebra *h);

/**
 * `log(exp(a) exp(b))` as a rational list.
 *
 * # Safety
 * `h` is a live handle, `a` and `b` NUL-terminated strings, `out` writable.
 */
enum SkStatus sk_bch(const struct SkAlgebra *h, const char *a, const char *b, char **out);

/**
 * Jump-index signature of a dual point, e.g. `"(∅,∅,{2,3})"` (UTF-8).
 *
 * # Safety
 * `h` is a live handle, `xi` a NUL-terminated string, `out` writable.
 */
enum SkStatus sk_jump_indices(const struct SkAlgebra *h, const char *xi, char **out);

/**
 * Dimension of the coadjoint orbit through `xi`.
 *
 * # Safety
 * `h` is a live handle, `xi` a NUL-terminated string, `out` writable.
 */
enum SkStatus sk_orbit_dimension(const struct SkAlgebra *h, const char *xi, size_t *out);

/**
 * Classifies `xi` against a table enumerated from `samples` seeded points.
 * `stratum_out` receives the 1-based stratum, or 0 at the origin;
 * `signature_out`, if not null, receives the signature string.
 *
 * # Safety
 * `h` is a live handle, `xi` a NUL-terminated string, `stratum_out`
 * writable, `signature_out` null or writable.
 */
enum SkStatus sk_classify(const struct SkAlgebra *h,
                          const char *xi,
                          size_t samples,
                          uint64_t seed,
                          size_t *stratum_out,
                          char **signature_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATA_KIT_H */
