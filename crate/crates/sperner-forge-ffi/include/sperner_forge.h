#ifndef SPERNER_FORGE_H
#define SPERNER_FORGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Rect instance generator.
 */
typedef enum SfKind {
  SF_KIND_TRIVIAL_SPLIT = 0,
  SF_KIND_PLANTED_PATH = 1,
} SfKind;

typedef enum SfMode {
  SF_MODE_WARMUP = 0,
  SF_MODE_SYMMETRIC = 1,
} SfMode;

/**
 * Status code of every fallible call.
 */
typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_ARGUMENT = 2,
  SF_STATUS_ROOT_ORDER_EXCEEDED = 3,
  SF_STATUS_NOT_A_SOLUTION = 4,
  SF_STATUS_INTERNAL = 5,
} SfStatus;

/**
 * A lifted colouring of Δ^k over a base instance.
 */
typedef struct SfLift SfLift;

/**
 * A 2D rectangular Sperner instance with its query counter.
 */
typedef struct SfRect SfRect;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a rect instance of side `2^n`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SfStatus sf_rect_new(enum SfKind kind, uint32_t n, uint64_t seed, struct SfRect **out);

/**
 * Releases a rect handle; null is ignored.
 *
 * # Safety
 * `rect` must come from [`sf_rect_new`] and not be used afterwards.
 */
void sf_rect_free(struct SfRect *rect);

/**
 * Colour of grid node `(x, y)`, `0 ≤ x, y ≤ 2^n`. Counts one query.
 *
 * # Safety
 * `rect` must be a live handle and `out` valid for one write.
 */
enum SfStatus sf_rect_color(const struct SfRect *rect, uint64_t x, uint64_t y, uint8_t *out);

/**
 * Brute-force search for a trichromatic cell; writes its lower-left node.
 *
 * # Safety
 * `rect` must be a live handle; `x` and `y` valid for one write each.
 */
enum SfStatus sf_rect_solve(const struct SfRect *rect, uint64_t *x, uint64_t *y);

/**
 * Number of colour queries made through this handle so far.
 *
 * # Safety
 * `rect` must be a live handle and `out` valid for one write.
 */
enum SfStatus sf_rect_query_count(const struct SfRect *rect, uint64_t *out);

/**
 * Lifts a rect instance to a colouring of Δ^k (`k ≥ 2`). The rect handle
 * is copied and stays owned by the caller.
 *
 * # Safety
 * `rect` must be a live handle and `out` valid for one write.
 */
enum SfStatus sf_lift_new(const struct SfRect *rect,
                          enum SfMode mode,
                          size_t k,
                          struct SfLift **out);

/**
 * Releases a lift handle; null is ignored.
 *
 * # Safety
 * `lift` must come from [`sf_lift_new`] and not be used afterwards.
 */
void sf_lift_free(struct SfLift *lift);

/**
 * Colour (1-based) of the point `numerators[i] / denominator`, `len = k + 1`.
 *
 * # Safety
 * `lift` must be a live handle, `numerators` readable for `len` values and
 * `out` valid for one write.
 */
enum SfStatus sf_lift_eval(const struct SfLift *lift,
                           const int64_t *numerators,
                           size_t len,
                           int64_t denominator,
                           uint32_t *out);

/**
 * Recovers a rect solution from three points of Δ^k carrying three distinct
 * colours. `coords` holds `3·(k+1)` NUL-terminated `"p/q"` strings, point
 * by point. On success writes the rect cell; a triple that does not verify
 * yields [`SfStatus::NotASolution`].
 *
 * # Safety
 * `lift` must be a live handle, `coords` readable for `len` valid C strings
 * and `cell_x`, `cell_y` valid for one write each.
 */
enum SfStatus sf_recover(const struct SfLift *lift,
                         const char *const *coords,
                         size_t len,
                         uint64_t *cell_x,
                         uint64_t *cell_y);

/**
 * Message of the last failed call on this thread (empty after a success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPERNER_FORGE_H */
