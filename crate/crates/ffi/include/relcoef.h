#ifndef RELCOEF_H
#define RELCOEF_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Return codes.
 */
typedef enum RelcoefStatus {
  RELCOEF_STATUS_OK = 0,
  RELCOEF_STATUS_NULL_POINTER = 1,
  RELCOEF_STATUS_INVALID_UTF8 = 2,
  RELCOEF_STATUS_PARSE = 3,
  RELCOEF_STATUS_DOMAIN = 4,
  RELCOEF_STATUS_DIMENSION = 5,
  RELCOEF_STATUS_UNKNOWN_EVENT = 6,
  RELCOEF_STATUS_NUMERIC_FAILURE = 7,
  RELCOEF_STATUS_UNKNOWN_FEASIBILITY = 8,
  RELCOEF_STATUS_INDEX_OUT_OF_RANGE = 9,
  RELCOEF_STATUS_BUFFER_TOO_SMALL = 10,
  RELCOEF_STATUS_PANIC = 11,
} RelcoefStatus;

/**
 * Range of a coefficient value: probability, odds or symmetric.
 */
typedef enum RelcoefRange {
  RELCOEF_RANGE_P = 0,
  RELCOEF_RANGE_O = 1,
  RELCOEF_RANGE_S = 2,
} RelcoefRange;

/**
 * Coefficient families. `P` and `O` take one event, the rest two.
 */
typedef enum RelcoefFamily {
  RELCOEF_FAMILY_P = 0,
  RELCOEF_FAMILY_O = 1,
  RELCOEF_FAMILY_COND_P = 2,
  RELCOEF_FAMILY_COND_O = 3,
  RELCOEF_FAMILY_Q_ODDS = 4,
  RELCOEF_FAMILY_Q_PROB = 5,
  RELCOEF_FAMILY_F_ODDS = 6,
  RELCOEF_FAMILY_F_PROB = 7,
} RelcoefFamily;

/**
 * Certification of a query interval.
 */
typedef enum RelcoefIntervalStatus {
  RELCOEF_INTERVAL_STATUS_EXACT = 0,
  RELCOEF_INTERVAL_STATUS_INNER_APPROX = 1,
  RELCOEF_INTERVAL_STATUS_INFEASIBLE = 2,
  RELCOEF_INTERVAL_STATUS_UNDEFINED_QUERY = 3,
} RelcoefIntervalStatus;

/**
 * Parsed program.
 */
typedef struct RelcoefProgram RelcoefProgram;

/**
 * Answers to every query of a program, in program order.
 */
typedef struct RelcoefSolution RelcoefSolution;

/**
 * Bounds of one query. `lo`/`hi` are NaN unless the status is exact or
 * inner approximate, and `hi` may be `+inf` for odds-type values.
 */
typedef struct RelcoefInterval {
  double lo;
  double hi;
  enum RelcoefIntervalStatus status;
} RelcoefInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *relcoef_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void relcoef_string_free(char *s);

/**
 * Converts `value` from one range to another. `+inf` is a valid O-type
 * input; NaN passes through as undefined.
 *
 * # Safety
 * `out` must be a valid pointer to a double.
 */
enum RelcoefStatus relcoef_convert(double value,
                                   enum RelcoefRange from,
                                   enum RelcoefRange to,
                                   double *out);

/**
 * Evaluates a coefficient on the 2x2 table `x, y, z, w` =
 * P(A&B), P(A&-B), P(-A&B), P(-A&-B). One-event families use A. Undefined
 * values are NaN.
 *
 * # Safety
 * `table` must point to 4 doubles and `out` to one.
 */
enum RelcoefStatus relcoef_eval_table(const double *table,
                                      enum RelcoefFamily fam,
                                      enum RelcoefRange rng,
                                      double *out);

/**
 * Parses a program. Queries are optional so that declaration-only
 * programs can go to `relcoef_check`.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RelcoefStatus relcoef_program_parse(const char *src, struct RelcoefProgram **out);

/**
 * Frees a program. Null is ignored.
 *
 * # Safety
 * `program` must come from `relcoef_program_parse` and not be freed twice.
 */
void relcoef_program_free(struct RelcoefProgram *program);

/**
 * Number of queries in a program; 0 for null.
 *
 * # Safety
 * `program` must be null or a live program handle.
 */
size_t relcoef_program_num_queries(const struct RelcoefProgram *program);

/**
 * Checks whether the declarations can hold together. `*feasible` is set
 * to 1 or 0.
 *
 * # Safety
 * `program` must be a live handle and `feasible` a valid pointer.
 */
enum RelcoefStatus relcoef_check(const struct RelcoefProgram *program,
                                 uint64_t seed,
                                 int32_t *feasible);

/**
 * Bounds every query. `starts` of 0 keeps the default search budget.
 * Per-query failures are reported by `relcoef_solution_interval`.
 *
 * # Safety
 * `program` must be a live handle and `out` a valid pointer.
 */
enum RelcoefStatus relcoef_solve(const struct RelcoefProgram *program,
                                 uint64_t seed,
                                 size_t starts,
                                 struct RelcoefSolution **out);

/**
 * Frees a solution. Null is ignored.
 *
 * # Safety
 * `solution` must come from `relcoef_solve` and not be freed twice.
 */
void relcoef_solution_free(struct RelcoefSolution *solution);

/**
 * Number of answers; 0 for null.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t relcoef_solution_len(const struct RelcoefSolution *solution);

/**
 * Interval of query `index`. Returns the query's own error if solving it
 * failed.
 *
 * # Safety
 * `solution` must be a live handle and `out` a valid pointer.
 */
enum RelcoefStatus relcoef_solution_interval(const struct RelcoefSolution *solution,
                                             size_t index,
                                             struct RelcoefInterval *out);

/**
 * Canonical text of query `index`, such as `Q(T:A)`. Free the result with
 * `relcoef_string_free`.
 *
 * # Safety
 * `solution` must be a live handle and `out` a valid pointer.
 */
enum RelcoefStatus relcoef_solution_query_text(const struct RelcoefSolution *solution,
                                               size_t index,
                                               char **out);

/**
 * Copies the distribution attaining the lower (`upper` = 0) or upper
 * endpoint of query `index` into `buf`. `*len` is set to the number of
 * atoms, first event most significant. Fails with `BufferTooSmall` when
 * `cap` is short, and with `Domain` when the interval has no witnesses.
 *
 * # Safety
 * `buf` must hold `cap` doubles (or be null with `cap` 0) and `len` must
 * be a valid pointer.
 */
enum RelcoefStatus relcoef_solution_witness(const struct RelcoefSolution *solution,
                                            size_t index,
                                            int32_t upper,
                                            double *buf,
                                            size_t cap,
                                            size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELCOEF_H */
