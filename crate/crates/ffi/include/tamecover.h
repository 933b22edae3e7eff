#ifndef TAMECOVER_H
#define TAMECOVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_ARGUMENT = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_INVALID_INPUT = 4,
  TC_STATUS_INTERNAL = 5,
} TcStatus;

/**
 * Numerical admissibility of a ramification profile.
 */
typedef enum TcAdmissibility {
  TC_ADMISSIBILITY_ADMISSIBLE = 0,
  TC_ADMISSIBILITY_INADMISSIBLE = 1,
  TC_ADMISSIBILITY_OUT_OF_SCOPE = 2,
  TC_ADMISSIBILITY_WILD = 3,
} TcAdmissibility;

/**
 * Existence verdict for a ramification profile.
 */
typedef enum TcExistence {
  TC_EXISTENCE_EXISTS = 0,
  TC_EXISTENCE_NOT_EXISTS = 1,
  TC_EXISTENCE_OUT_OF_SCOPE = 2,
  TC_EXISTENCE_INVALID = 3,
} TcExistence;

/**
 * Overall outcome of the block-system analysis.
 */
typedef enum TcAnalysis {
  TC_ANALYSIS_NOT_EXISTS = 0,
  TC_ANALYSIS_INCONCLUSIVE = 1,
} TcAnalysis;

/**
 * Opaque permutation handle.
 */
typedef struct TcPermutation TcPermutation;

/**
 * Opaque handle for a tuple of permutations.
 */
typedef struct TcTuple TcTuple;

/**
 * Opaque handle for an existence verdict.
 */
typedef struct TcVerdict TcVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Library version as a static string.
 */
const char *tc_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void tc_string_free(char *s);

/**
 * Parses cycle notation such as `(1 2 3)(4 5)` on `degree` points.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TcStatus tc_permutation_parse(const char *text, size_t degree, struct TcPermutation **out);

/**
 * # Safety
 * `perm` must be null or a live handle.
 */
void tc_permutation_free(struct TcPermutation *perm);

/**
 * Degree of the permutation; 0 for a null handle.
 *
 * # Safety
 * `perm` must be null or a live handle.
 */
size_t tc_permutation_degree(const struct TcPermutation *perm);

/**
 * Image of the 1-indexed `point`.
 *
 * # Safety
 * `perm` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_permutation_apply(const struct TcPermutation *perm, size_t point, size_t *out);

/**
 * `a ∘ b`: `b` applied first.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum TcStatus tc_permutation_compose(const struct TcPermutation *a,
                                     const struct TcPermutation *b,
                                     struct TcPermutation **out);

/**
 * Cycle notation, `(1)` for the identity.
 *
 * # Safety
 * `perm` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_permutation_to_string(const struct TcPermutation *perm, char **out);

/**
 * Parses the tuple file format: a `d=<int>` line, then one permutation
 * per line; blank lines and `#` comments are skipped.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TcStatus tc_tuple_parse(const char *text, struct TcTuple **out);

/**
 * # Safety
 * `tuple` must be null or a live handle.
 */
void tc_tuple_free(struct TcTuple *tuple);

/**
 * Number of entries; 0 for a null handle.
 *
 * # Safety
 * `tuple` must be null or a live handle.
 */
size_t tc_tuple_len(const struct TcTuple *tuple);

/**
 * Common degree; 0 for a null handle.
 *
 * # Safety
 * `tuple` must be null or a live handle.
 */
size_t tc_tuple_degree(const struct TcTuple *tuple);

/**
 * A copy of entry `index` (0-based).
 *
 * # Safety
 * `tuple` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tuple_get(const struct TcTuple *tuple, size_t index, struct TcPermutation **out);

/**
 * Whether the product is trivial and the group transitive.
 *
 * # Safety
 * `tuple` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tuple_is_valid(const struct TcTuple *tuple, bool *out);

/**
 * Entries concatenated in cycle notation.
 *
 * # Safety
 * `tuple` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_tuple_to_string(const struct TcTuple *tuple, char **out);

/**
 * Numerical admissibility of `indices[0..len]` at the prime `p`.
 *
 * # Safety
 * `indices` must point to `len` values; `out` must be writable.
 */
enum TcStatus tc_admissible(uint64_t p,
                            const uint64_t *indices,
                            size_t len,
                            enum TcAdmissibility *out);

/**
 * Existence decision for `indices[0..len]` at the prime `p`. Malformed
 * profiles give a verdict with status `INVALID`, not an error.
 *
 * # Safety
 * `indices` must point to `len` values; `out` must be writable.
 */
enum TcStatus tc_decide(uint64_t p, const uint64_t *indices, size_t len, struct TcVerdict **out);

/**
 * # Safety
 * `verdict` must be null or a live handle.
 */
void tc_verdict_free(struct TcVerdict *verdict);

/**
 * Status of the verdict; `INVALID` for a null handle.
 *
 * # Safety
 * `verdict` must be null or a live handle.
 */
enum TcExistence tc_verdict_status(const struct TcVerdict *verdict);

/**
 * The certificate tuple, or null in `*out` when there is none.
 *
 * # Safety
 * `verdict` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_verdict_certificate(const struct TcVerdict *verdict, struct TcTuple **out);

/**
 * Human-readable reason for the verdict.
 *
 * # Safety
 * `verdict` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_verdict_reason(const struct TcVerdict *verdict, char **out);

/**
 * The full verdict as JSON.
 *
 * # Safety
 * `verdict` must be a live handle; `out` must be writable.
 */
enum TcStatus tc_verdict_to_json(const struct TcVerdict *verdict, char **out);

/**
 * Block-system non-existence test at the prime `p`. Writes the overall
 * outcome to `status` and, when `json` is not null, the full report.
 *
 * # Safety
 * `tuple` must be a live handle; `status` must be writable; `json` must
 * be null or writable.
 */
enum TcStatus tc_analyze(const struct TcTuple *tuple,
                         uint64_t p,
                         enum TcAnalysis *status,
                         char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAMECOVER_H */
