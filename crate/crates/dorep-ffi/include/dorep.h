/* C interface to the dorep decision-theory library. */

#ifndef DOREP_H
#define DOREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum DorepStatus {
  /**
   * Success.
   */
  DOREP_STATUS_OK = 0,
  /**
   * The operation ran but a check failed (axiom violation,
   * infeasibility, or verification mismatch); output still holds the
   * report.
   */
  DOREP_STATUS_FAILED = 2,
  /**
   * Bad input: parse errors, richness or cap violations.
   */
  DOREP_STATUS_PRECONDITION = 3,
  /**
   * A required pointer was null.
   */
  DOREP_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  DOREP_STATUS_INVALID_UTF8 = 5,
  /**
   * An internal panic was caught.
   */
  DOREP_STATUS_PANIC = 6,
} DorepStatus;

/**
 * A loaded selection model, optionally with probability and utility.
 */
typedef struct DorepModel DorepModel;

/**
 * A menu plus a preference relation over its compiled acts.
 */
typedef struct DorepPrefs DorepPrefs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Borrowed;
 * valid until the next failing call. Never null.
 */
const char *dorep_last_error(void);

/**
 * Library version as a static string; do not free.
 */
const char *dorep_version(void);

/**
 * Release a string returned through an out-parameter.
 *
 * # Safety
 * `s` must have come from this library and not been freed before.
 */
void dorep_string_free(char *s);

/**
 * Parse a model file (JSON) into a handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DorepStatus dorep_model_from_json(const char *json, struct DorepModel **out);

/**
 * # Safety
 * `model` must come from [`dorep_model_from_json`], freed once.
 */
void dorep_model_free(struct DorepModel *model);

/**
 * Parse a preference file, optionally against a separate menu file.
 * `menu_json` may be null when the preference file is self-contained.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum DorepStatus dorep_prefs_from_json(const char *prefs_json,
                                       const char *menu_json,
                                       struct DorepPrefs **out);

/**
 * # Safety
 * `prefs` must come from [`dorep_prefs_from_json`], freed once.
 */
void dorep_prefs_free(struct DorepPrefs *prefs);

/**
 * Interpret an action in the model. Output JSON:
 * `{"action": "...", "map": {"state": "state", ...},
 *   "expected_utility": "9/2" | null}`.
 *
 * # Safety
 * Pointers must be valid; strings NUL-terminated.
 */
enum DorepStatus dorep_evaluate(const struct DorepModel *model, const char *action, char **out);

/**
 * Run the four axiom checks plus the derived-principle smoke tests.
 * Returns `Ok` when everything passes, `Failed` otherwise; the JSON
 * report lands in `out` either way.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DorepStatus dorep_check_axioms(const struct DorepPrefs *prefs,
                                    uint32_t canc_max_n,
                                    uint64_t canc_budget,
                                    uint64_t seed,
                                    char **out);

/**
 * Synthesize and verify a representation. On success the JSON is the
 * representation file; on a failed stage it is
 * `{"stage": ..., ...}` and the status is `Failed`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DorepStatus dorep_synthesize(const struct DorepPrefs *prefs,
                                  uint64_t seed,
                                  uint64_t pairs,
                                  uint64_t act_space_cap,
                                  char **out);

/**
 * Emit a seeded fixture as one JSON object:
 * `{"model": ..., "menu": ..., "prefs": ...}`.
 *
 * # Safety
 * Pointers must be valid; `props` NUL-terminated, comma-separated.
 */
enum DorepStatus dorep_generate(const char *props, uint64_t seed, char **out);

/**
 * Run the round trip over an inclusive seed range; `Failed` when any
 * seed fails. The JSON summary lands in `out` either way.
 *
 * # Safety
 * Pointers must be valid.
 */
enum DorepStatus dorep_roundtrip(const char *props,
                                 uint64_t seed_lo,
                                 uint64_t seed_hi,
                                 uint64_t pairs,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DOREP_H */
