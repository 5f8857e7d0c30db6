#ifndef ENDOK_H
#define ENDOK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum EndokStatus {
  ENDOK_STATUS_OK = 0,
  /**
   * A hypothesis or the checked property fails.
   */
  ENDOK_STATUS_NEGATIVE = 1,
  ENDOK_STATUS_INVALID_INPUT = 2,
  /**
   * A bound or search budget ran out before a decision.
   */
  ENDOK_STATUS_UNDECIDED = 3,
  /**
   * Independent computations disagreed; a bug.
   */
  ENDOK_STATUS_TRIPWIRE = 4,
  ENDOK_STATUS_NULL_ARGUMENT = 10,
  /**
   * A Rust panic was caught at the boundary.
   */
  ENDOK_STATUS_PANIC = 11,
} EndokStatus;

/**
 * Three-valued answer.
 */
typedef enum EndokTri {
  ENDOK_TRI_NO = 0,
  ENDOK_TRI_YES = 1,
  ENDOK_TRI_UNKNOWN = 2,
} EndokTri;

/**
 * Opaque finite-dimensional algebra.
 */
typedef struct EndokAlgebra EndokAlgebra;

/**
 * Computation limits. Obtain defaults from [`endok_settings_default`].
 */
typedef struct EndokSettings {
  /**
   * Resolution length bound; 0 means twice the algebra dimension.
   */
  size_t bound;
  size_t tor_bound;
  size_t retries;
  uint64_t seed;
  size_t search_budget;
} EndokSettings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *endok_version(void);

/**
 * Message for the last failed call on this thread, empty after a success.
 * Valid until the next call on the same thread.
 */
const char *endok_last_error(void);

struct EndokSettings endok_settings_default(void);

/**
 * Builds the algebra `name` from an `endok-spec/1` JSON document, or the
 * document's `main` algebra when `name` is null.
 *
 * # Safety
 * `json` and a non-null `name` must be NUL-terminated strings and `out`
 * must be writable.
 */
enum EndokStatus endok_algebra_from_spec(const char *json,
                                         const char *name,
                                         struct EndokAlgebra **out);

/**
 * A new handle for the opposite algebra.
 *
 * # Safety
 * `a` must come from this library and `out` must be writable.
 */
enum EndokStatus endok_algebra_opposite(const struct EndokAlgebra *a, struct EndokAlgebra **out);

/**
 * Dimension over the ground field, 0 for a null handle.
 *
 * # Safety
 * `a` must be null or come from this library.
 */
size_t endok_algebra_dim(const struct EndokAlgebra *a);

/**
 * # Safety
 * `a` must be null or an unfreed handle from this library.
 */
void endok_algebra_free(struct EndokAlgebra *a);

/**
 * Rank of `K0`: the number of indecomposable projectives up to isomorphism.
 *
 * # Safety
 * `a` must come from this library, `s` may be null, `out` must be writable.
 */
enum EndokStatus endok_k0_rank(const struct EndokAlgebra *a,
                               const struct EndokSettings *s,
                               size_t *out);

/**
 * Whether the algebra is quasi-hereditary. `No` is only reported after an
 * exhaustive search.
 *
 * # Safety
 * `a` must come from this library, `s` may be null, `out` must be writable.
 */
enum EndokStatus endok_is_quasi_hereditary(const struct EndokAlgebra *a,
                                           const struct EndokSettings *s,
                                           enum EndokTri *out);

/**
 * Whether `ReR` is a homological ideal, for the idempotent written as a
 * combination of basis labels such as `"e1"` or `"e11 + e22"`.
 *
 * # Safety
 * `a` must come from this library, `e` a NUL-terminated string, `s` may be
 * null, `out` must be writable.
 */
enum EndokStatus endok_is_homological(const struct EndokAlgebra *a,
                                      const char *e,
                                      const struct EndokSettings *s,
                                      enum EndokTri *out);

/**
 * Checks an ideal statement (`ideal-split`, `ideal-split-projective` or
 * `idempotent-split`) for `ReR`. The verdict is written as JSON to `out`,
 * to be released with [`endok_string_free`]. The status is `Ok` when the
 * theorem is confirmed, `Negative` when a hypothesis fails and `Undecided`
 * when a hypothesis could not be settled.
 *
 * # Safety
 * `a` must come from this library, `e` and `theorem` NUL-terminated
 * strings, `s` may be null, `out` must be writable.
 */
enum EndokStatus endok_verify_ideal(const struct EndokAlgebra *a,
                                    const char *e,
                                    const char *theorem,
                                    const struct EndokSettings *s,
                                    char **out);

/**
 * Runs a command line (without the program name) exactly as the `endok`
 * binary would. The report or usage text goes to `out`; the status is the
 * exit code.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings and `out` must be writable.
 */
enum EndokStatus endok_run(size_t argc, const char *const *argv, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or an unfreed string from this library.
 */
void endok_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ENDOK_H */
