#ifndef BRAIDCHAIN_H
#define BRAIDCHAIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define BC_FAMILY_SL 0

#define BC_FAMILY_SO 1

#define BC_FAMILY_SP 2

/**
 * Passed as a family filter to mean "any".
 */
#define BC_FAMILY_ANY 4294967295

/**
 * Result codes.
 */
typedef enum {
  BC_STATUS_OK = 0,
  BC_STATUS_NULL_POINTER = 1,
  BC_STATUS_INVALID_ARGUMENT = 2,
  BC_STATUS_INVALID_GROUP = 3,
  BC_STATUS_INADMISSIBLE = 4,
  BC_STATUS_NOT_CONFLUENT = 5,
  BC_STATUS_COMPUTATION = 6,
  BC_STATUS_PANIC = 7,
} BcStatus;

/**
 * A braid matrix together with its inverse and spectral projectors.
 */
typedef struct BcBraidMatrix BcBraidMatrix;

/**
 * Generators and quadratic relations of an algebra.
 */
typedef struct BcPresentation BcPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *bc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bc_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void bc_string_free(char *s);

/**
 * Builds the braid matrix for `family_code` (`BC_FAMILY_*`) with defining
 * dimension `n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BcStatus bc_braid_matrix_new(uint32_t family_code, size_t n, BcBraidMatrix **out);

/**
 * # Safety
 * `m` must come from [`bc_braid_matrix_new`] and not be used afterwards.
 */
void bc_braid_matrix_free(BcBraidMatrix *m);

/**
 * Sparse dump of the matrix (`inverse = false`) or its inverse.
 *
 * # Safety
 * `m` and `out` must be valid pointers.
 */
BcStatus bc_braid_matrix_dump(const BcBraidMatrix *m, bool inverse, char **out);

/**
 * Number of spectral projectors.
 *
 * # Safety
 * `m` and `out` must be valid pointers.
 */
BcStatus bc_braid_matrix_projector_count(const BcBraidMatrix *m, size_t *out);

/**
 * Rank and sparse dump of projector `index`.
 *
 * # Safety
 * `m`, `rank` and `out` must be valid pointers.
 */
BcStatus bc_braid_matrix_projector(const BcBraidMatrix *m, size_t index, size_t *rank, char **out);

/**
 * Checks the braid equation for the matrix and for its inverse.
 *
 * # Safety
 * `m` and `holds` must be valid pointers.
 */
BcStatus bc_braid_matrix_check(const BcBraidMatrix *m, bool *holds);

/**
 * Chain of `copies` copies with per-copy `parities` (0 Weyl, 1 Clifford) and
 * a common `variant` (1 or -1). `generic_couplings` selects non-unit
 * couplings between copies.
 *
 * # Safety
 * `parities` must point to `copies` bytes; `out` must be valid.
 */
BcStatus bc_presentation_chain(uint32_t family_code,
                               size_t n,
                               const uint8_t *parities,
                               size_t copies,
                               int8_t variant,
                               bool generic_couplings,
                               BcPresentation **out);

/**
 * `GL(m) x SL(n)`-covariant algebra.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
BcStatus bc_presentation_glm(size_t m,
                             size_t n,
                             uint8_t parity,
                             bool inverse_variant,
                             BcPresentation **out);

/**
 * # Safety
 * `p` must come from a `bc_presentation_*` constructor and not be used afterwards.
 */
void bc_presentation_free(BcPresentation *p);

/**
 * One relation per line.
 *
 * # Safety
 * `p` and `out` must be valid pointers.
 */
BcStatus bc_presentation_dump(const BcPresentation *p, char **out);

/**
 * Dimensions of the graded pieces in degrees `0..len`, written to `counts`.
 * `matches_classical` reports whether every degree agrees with the
 * undeformed algebra. Returns `BC_STATUS_NOT_CONFLUENT` if the rewriting
 * system has unresolved overlaps.
 *
 * # Safety
 * `counts` must hold `len` elements; `p` and `matches_classical` must be valid.
 */
BcStatus bc_presentation_poincare(const BcPresentation *p,
                                  uint64_t *counts,
                                  size_t len,
                                  bool *matches_classical);

/**
 * Runs a verification suite (`"all"`, `"braid"`, `"lemma1"`, `"chain"`,
 * `"glm"`, `"star"`, `"series"`) and returns the JSON report. Filters use
 * `BC_FAMILY_ANY` / 0 for "unset"; `max_degree` 0 selects the default.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `all_passed` and `out` must be valid.
 */
BcStatus bc_verify(const char *suite,
                   uint32_t family_code,
                   size_t n,
                   size_t m,
                   size_t max_degree,
                   bool *all_passed,
                   char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRAIDCHAIN_H */
