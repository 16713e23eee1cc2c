#ifndef PROFIN_H
#define PROFIN_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_PRECISION_EXHAUSTED = 3,
  PF_STATUS_BUDGET_EXCEEDED = 4,
  PF_STATUS_CHECK_FAILED = 5,
  PF_STATUS_INTERNAL = 6,
} PfStatus;

typedef enum PfTreeMode {
  PF_TREE_MODE_DIVISION = 0,
  PF_TREE_MODE_SPLIT = 1,
} PfTreeMode;

typedef enum PfSide {
  PF_SIDE_DELTA = 0,
  PF_SIDE_GAMMA = 1,
} PfSide;

/**
 * Quaternion algebra ramified at {inf, p} with its maximal order.
 */
typedef struct PfAlgebra PfAlgebra;

/**
 * Ball in the lattice tree around the standard vertex.
 */
typedef struct PfTreeBall PfTreeBall;

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next profin call on the same thread.
 */
const char *pf_last_error_message(void);

/**
 * # Safety
 * `s` must come from a profin function returning `char *`, freed once.
 */
void pf_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum PfStatus pf_algebra_new(uint64_t p, struct PfAlgebra **out);

/**
 * # Safety
 * `alg` must be NULL or a handle from `pf_algebra_new`, freed once.
 */
void pf_algebra_free(struct PfAlgebra *alg);

/**
 * Writes the structure constants `a = a_num/a_den`, `b = b_num/b_den`.
 *
 * # Safety
 * `alg` must be a live handle; `out` must point to four writable `int64_t`.
 */
enum PfStatus pf_algebra_constants(const struct PfAlgebra *alg, int64_t *out);

/**
 * # Safety
 * `alg` must be a live handle and `out` writable.
 */
enum PfStatus pf_algebra_discriminant(const struct PfAlgebra *alg, uint64_t *out);

/**
 * Builds the ball of `radius` around the standard vertex. `precision` 0
 * selects the largest supported value.
 *
 * # Safety
 * `out` must be writable.
 */
enum PfStatus pf_tree_ball_new(uint64_t p,
                               enum PfTreeMode mode,
                               uint32_t radius,
                               uint32_t precision,
                               size_t budget,
                               struct PfTreeBall **out);

/**
 * # Safety
 * `ball` must be NULL or a handle from `pf_tree_ball_new`, freed once.
 */
void pf_tree_ball_free(struct PfTreeBall *ball);

/**
 * # Safety
 * `ball` must be a live handle; outputs writable.
 */
enum PfStatus pf_tree_ball_counts(const struct PfTreeBall *ball,
                                  size_t *vertices,
                                  size_t *edges,
                                  size_t *degree);

/**
 * Size of sphere `k` (0 for `k` beyond the radius).
 *
 * # Safety
 * `ball` must be a live handle and `out` writable.
 */
enum PfStatus pf_tree_ball_sphere_size(const struct PfTreeBall *ball, uint32_t k, size_t *out);

/**
 * JSON export; free the result with `pf_string_free`.
 *
 * # Safety
 * `ball` must be a live handle and `out` writable.
 */
enum PfStatus pf_tree_ball_json(const struct PfTreeBall *ball, char **out);

/**
 * DOT export; free the result with `pf_string_free`.
 *
 * # Safety
 * `ball` must be a live handle and `out` writable.
 */
enum PfStatus pf_tree_ball_dot(const struct PfTreeBall *ball, char **out);

/**
 * Translation length of the hyperbolic generator over the radius-3 ball.
 *
 * # Safety
 * `alg` must be a live handle and `out` writable.
 */
enum PfStatus pf_witness(const struct PfAlgebra *alg, size_t budget, uint32_t *out);

/**
 * Certified order of the level-`level` image, as a decimal string.
 *
 * # Safety
 * `alg` must be a live handle and `out` writable.
 */
enum PfStatus pf_fingerprint_order(const struct PfAlgebra *alg,
                                   enum PfSide side,
                                   uint64_t level,
                                   uint64_t seed,
                                   char **out);

#endif  /* PROFIN_H */
