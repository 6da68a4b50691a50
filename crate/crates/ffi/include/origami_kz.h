#ifndef ORIGAMI_KZ_H
#define ORIGAMI_KZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define OKZ_OK 0

/**
 * A required pointer argument was null.
 */
#define OKZ_NULL_POINTER -1

/**
 * An output buffer was too small; the needed length is still reported.
 */
#define OKZ_BUFFER_TOO_SMALL -2

/**
 * A value does not fit the C type.
 */
#define OKZ_OVERFLOW -3

/**
 * The library panicked; this is a bug.
 */
#define OKZ_PANIC -4

/**
 * Opaque surface handle.
 */
typedef struct OrigamiHandle OrigamiHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a surface (JSON or cycle notation) into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
int32_t okz_parse(const char *text, struct OrigamiHandle **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from `okz_parse` and not be used afterwards.
 */
void okz_free(struct OrigamiHandle *h);

/**
 * Number of squares.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
int32_t okz_degree(const struct OrigamiHandle *h, uint32_t *out);

/**
 * Zero orders (descending) into `kappa[0..cap]`, their count into `len`,
 * and the genus.
 *
 * # Safety
 * `kappa` must hold `cap` values (it may be null when `cap` is 0).
 */
int32_t okz_stratum(const struct OrigamiHandle *h,
                    uint32_t *kappa,
                    size_t cap,
                    size_t *len,
                    uint32_t *genus);

/**
 * Exact sum of the non-negative Lyapunov exponents as `num / den`.
 *
 * # Safety
 * `h` must be a live handle; `num` and `den` must be writable.
 */
int32_t okz_exact_sum(const struct OrigamiHandle *h, int64_t *num, int64_t *den);

/**
 * 1 when the spectrum is completely degenerate (exact sum 1), else 0.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
int32_t okz_is_degenerate(const struct OrigamiHandle *h, int32_t *out);

/**
 * Degree of the cover onto the torus of absolute periods.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
int32_t okz_optimal_degree(const struct OrigamiHandle *h, uint64_t *out);

/**
 * Normalized exponents `1 = l_1 >= .. >= l_g` into `out[0..cap]`.
 *
 * # Safety
 * `out` must hold `cap` doubles; `len` must be writable.
 */
int32_t okz_lyapunov(const struct OrigamiHandle *h,
                     uint64_t steps,
                     size_t trials,
                     uint64_t seed,
                     double *out,
                     size_t cap,
                     size_t *len);

/**
 * The surface as a JSON string; release it with `okz_string_free`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
int32_t okz_to_json(const struct OrigamiHandle *h, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void okz_string_free(char *s);

/**
 * Stable name of a status code, as a static string.
 */
const char *okz_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORIGAMI_KZ_H */
