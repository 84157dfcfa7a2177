#ifndef EQDOMAIN_H
#define EQDOMAIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>



typedef enum EqdStatus {
  EQD_STATUS_OK = 0,
  EQD_STATUS_NULL_POINTER = 1,
  /**
   * A table entry outside `0..order`, or a malformed table.
   */
  EQD_STATUS_INVALID_TABLE = 2,
  EQD_STATUS_NOT_ASSOCIATIVE = 3,
  EQD_STATUS_INVALID_ARGUMENT = 4,
  EQD_STATUS_BUDGET_EXCEEDED = 5,
  /**
   * A witness could not be built or verified; indicates a bug.
   */
  EQD_STATUS_INCONSISTENT = 6,
  EQD_STATUS_PANIC = 7,
} EqdStatus;

typedef enum EqdClassTag {
  EQD_CLASS_TAG_TRIVIAL = 0,
  EQD_CLASS_TAG_IDEMPOTENT_NOWHERE_COMMUTATIVE = 1,
  EQD_CLASS_TAG_IDEMPOTENT_COMMUTING_PAIR = 2,
  EQD_CLASS_TAG_BOUNDED_NON_IDEMPOTENT = 3,
  EQD_CLASS_TAG_UNBOUNDED = 4,
} EqdClassTag;

typedef enum EqdMode {
  EQD_MODE_RAW = 0,
  EQD_MODE_UP_TO_ISO = 1,
  EQD_MODE_UP_TO_ISO_AND_ANTI = 2,
} EqdMode;

/**
 * Opaque handle to a validated semigroup.
 */
typedef struct EqdSemigroup EqdSemigroup;

/**
 * Classification with its carried witnesses. Unused slots hold `SIZE_MAX`.
 */
typedef struct EqdClassification {
  enum EqdClassTag tag;
  size_t a;
  size_t b;
} EqdClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *eqd_last_error(void);

/**
 * Validates a row-major `order × order` table.
 *
 * # Safety
 * `cells` must point to `order * order` readable values and `out` must be a
 * valid pointer to write the handle to.
 */
enum EqdStatus eqd_semigroup_new(size_t order, const uint32_t *cells, struct EqdSemigroup **out);

/**
 * Parses the first table of a text corpus (order line, then rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum EqdStatus eqd_semigroup_parse(const char *text, struct EqdSemigroup **out);

/**
 * # Safety
 * `handle` must be NULL or a handle from this library not yet freed.
 */
void eqd_semigroup_free(struct EqdSemigroup *handle);

/**
 * Order of the semigroup, or 0 for NULL.
 *
 * # Safety
 * `handle` must be NULL or a live handle.
 */
size_t eqd_semigroup_order(const struct EqdSemigroup *handle);

/**
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum EqdStatus eqd_classify(const struct EqdSemigroup *handle, struct EqdClassification *out);

/**
 * Index and period of the monogenic subsemigroup generated by `element`.
 *
 * # Safety
 * `handle` must be a live handle; `index` and `period` valid pointers.
 */
enum EqdStatus eqd_element_profile(const struct EqdSemigroup *handle,
                                   size_t element,
                                   size_t *index,
                                   size_t *period);

/**
 * Whether `a^p = a^q` in a monogenic semigroup of the given index and
 * period. Returns false when any argument is zero.
 */
bool eqd_monogenic_equal(uint64_t index, uint64_t period, uint64_t p, uint64_t q);

/**
 * Runs the full check and writes the JSON witness report.
 *
 * Returns [`EqdStatus::Inconsistent`] (with the report still written) when
 * an identity fails or no separating point was found.
 *
 * # Safety
 * `handle` must be a live handle; `report_json` and `is_equational_domain`
 * valid pointers. `*report_json` must be released with [`eqd_string_free`].
 */
enum EqdStatus eqd_check_semigroup(const struct EqdSemigroup *handle,
                                   size_t budget,
                                   char **report_json,
                                   bool *is_equational_domain);

/**
 * Number of distinct term functions in `arity` variables.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum EqdStatus eqd_term_function_count(const struct EqdSemigroup *handle,
                                       size_t arity,
                                       size_t budget,
                                       size_t *out);

/**
 * Decides whether a subset of `S^arity` is algebraic.
 *
 * `membership` holds one byte per point (nonzero = member) in big-endian
 * point order, `len = order^arity`. On success `*separating_code` is the
 * least encoded point of `closure \ set`, or `SIZE_MAX` when algebraic.
 *
 * # Safety
 * `handle` must be a live handle, `membership` must point to `len` readable
 * bytes, and `algebraic`, `separating_code` must be valid pointers.
 */
enum EqdStatus eqd_is_algebraic(const struct EqdSemigroup *handle,
                                size_t arity,
                                const uint8_t *membership,
                                size_t len,
                                size_t budget,
                                bool *algebraic,
                                size_t *separating_code);

/**
 * Number of semigroups of the given order (1..=5) in the given mode.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum EqdStatus eqd_enumerate_count(size_t order, enum EqdMode mode, size_t *out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void eqd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQDOMAIN_H */
