#ifndef CHORDNET_H
#define CHORDNET_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChordnetStatus {
  CHORDNET_STATUS_OK = 0,
  CHORDNET_STATUS_NULL_ARGUMENT = 1,
  CHORDNET_STATUS_INVALID_UTF8 = 2,
  CHORDNET_STATUS_INVALID_INPUT = 3,
  /**
   * The external solver failed, timed out or gave an unusable answer.
   */
  CHORDNET_STATUS_SOLVER_FAILURE = 4,
  CHORDNET_STATUS_PANIC = 5,
} ChordnetStatus;

typedef struct ChordnetDataset ChordnetDataset;

typedef struct ChordnetResult ChordnetResult;

typedef struct ChordnetScores ChordnetScores;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or "" after a
 * success. Valid until the next call on the same thread.
 */
const char *chordnet_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is ignored.
 */
void chordnet_string_free(char *s);

/**
 * Parses CSV text: a header of names, then integer-coded rows.
 * Arities are inferred.
 *
 * # Safety
 * `csv` must be a NUL-terminated string; `out` must be writable.
 */
enum ChordnetStatus chordnet_dataset_from_csv(const char *csv, struct ChordnetDataset **out);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live dataset handle.
 */
size_t chordnet_dataset_n_vars(const struct ChordnetDataset *d);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live dataset handle.
 */
size_t chordnet_dataset_rows(const struct ChordnetDataset *d);

/**
 * # Safety
 * `d` must be null or a handle not yet freed.
 */
void chordnet_dataset_free(struct ChordnetDataset *d);

/**
 * Scores every candidate clique of up to `max_clique` variables
 * (0 means no cap) with pseudocount `prior` per cell.
 *
 * # Safety
 * `d` must be a live dataset handle; `out` must be writable.
 */
enum ChordnetStatus chordnet_scores_compute(const struct ChordnetDataset *d,
                                            double prior,
                                            size_t max_clique,
                                            struct ChordnetScores **out);

/**
 * Reads a score file.
 *
 * # Safety
 * `s` must be a NUL-terminated string; `out` must be writable.
 */
enum ChordnetStatus chordnet_scores_from_text(const char *s, struct ChordnetScores **out);

/**
 * Writes the score file format to a new string.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable. Free the string
 * with `chordnet_string_free`.
 */
enum ChordnetStatus chordnet_scores_to_text(const struct ChordnetScores *t, char **out);

/**
 * # Safety
 * `t` must be null or a live handle.
 */
size_t chordnet_scores_n_vars(const struct ChordnetScores *t);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void chordnet_scores_free(struct ChordnetScores *t);

/**
 * Builds the weighted MaxSAT instance for scores scaled by `scale`.
 * Either output may be null if not wanted.
 *
 * # Safety
 * `t` must be a live handle; non-null outputs must be writable. Free
 * the strings with `chordnet_string_free`.
 */
enum ChordnetStatus chordnet_encode(const struct ChordnetScores *t,
                                    int64_t scale,
                                    char **wcnf_out,
                                    char **sidecar_out);

/**
 * Exhaustive search. More than 6 variables needs `allow_large`.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum ChordnetStatus chordnet_solve_oracle(const struct ChordnetScores *t,
                                          int64_t scale,
                                          bool allow_large,
                                          struct ChordnetResult **out);

/**
 * Runs an external MaxSAT solver. `command` contains `{}` where the
 * instance path goes; the instance and its sidecar are written to
 * `instance_path`. A `timeout_secs` of 0 or less means no limit.
 *
 * # Safety
 * Strings must be NUL-terminated; `t` must be a live handle; `out`
 * must be writable.
 */
enum ChordnetStatus chordnet_solve_external(const struct ChordnetScores *t,
                                            int64_t scale,
                                            const char *command,
                                            const char *instance_path,
                                            double timeout_secs,
                                            struct ChordnetResult **out);

/**
 * Real-valued log score of the network, or NaN for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double chordnet_result_objective(const struct ChordnetResult *r);

/**
 * Objective on the integer-scaled scores, or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int64_t chordnet_result_objective_int(const struct ChordnetResult *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
size_t chordnet_result_clique_count(const struct ChordnetResult *r);

/**
 * Clique `i` as a bitmask, bit k set for variable k. 0 when out of range.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
uint32_t chordnet_result_clique(const struct ChordnetResult *r, size_t i);

/**
 * Whether every certificate check passed.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool chordnet_result_certified(const struct ChordnetResult *r);

/**
 * The JSON report the command-line `solve` writes.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable. Free the string
 * with `chordnet_string_free`.
 */
enum ChordnetStatus chordnet_result_to_json(const struct ChordnetResult *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void chordnet_result_free(struct ChordnetResult *r);

/**
 * Pointer to the NUL-terminated version string. Do not free.
 */
const char *chordnet_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHORDNET_H */
