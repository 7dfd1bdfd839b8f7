#ifndef OTA_LEARN_H
#define OTA_LEARN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which teacher the learner talks to.
 */
typedef enum OtaMode {
  OTA_MODE_SMART = 0,
  OTA_MODE_NORMAL = 1,
} OtaMode;

/**
 * Result of every fallible call.
 */
typedef enum OtaStatus {
  OTA_STATUS_OK = 0,
  OTA_STATUS_NULL_ARGUMENT = 1,
  OTA_STATUS_INVALID_UTF8 = 2,
  OTA_STATUS_PARSE_ERROR = 3,
  OTA_STATUS_INVALID_ARGUMENT = 4,
  OTA_STATUS_RESOURCE_LIMIT = 5,
  OTA_STATUS_LEARN_FAILED = 6,
  OTA_STATUS_PANIC = 7,
} OtaStatus;

/**
 * Opaque automaton handle.
 */
typedef struct OtaAutomaton OtaAutomaton;

/**
 * Figures reported by `ota_learn`.
 */
typedef struct OtaLearnStats {
  uint64_t membership_count;
  uint64_t equivalence_count;
  /**
   * All hypothesis locations, the sink included.
   */
  uint64_t locations_learned;
  /**
   * Zero in smart mode.
   */
  uint64_t explored_instances;
} OtaLearnStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or "" after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ota_last_error(void);

/**
 * Parse an automaton document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum OtaStatus ota_automaton_from_json(const char *json, struct OtaAutomaton **out);

/**
 * Serialize an automaton; free the result with `ota_string_free`.
 *
 * # Safety
 * `a` must be a live handle and `out` a valid pointer.
 */
enum OtaStatus ota_automaton_to_json(const struct OtaAutomaton *a, char **out);

/**
 * Number of locations, or 0 for a null handle.
 *
 * # Safety
 * `a` must be null or a live handle.
 */
size_t ota_automaton_locations(const struct OtaAutomaton *a);

/**
 * # Safety
 * `a` must be null or a handle not freed before.
 */
void ota_automaton_free(struct OtaAutomaton *a);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not freed before.
 */
void ota_string_free(char *s);

/**
 * Classify a word. `kind` is one of "delay", "logical", "reset-delay",
 * "reset-logical"; the verdict is written as '+', '-' or 'x'.
 *
 * # Safety
 * `a` must be a live handle, `word` and `kind` nul-terminated strings,
 * `verdict` a valid pointer.
 */
enum OtaStatus ota_member(const struct OtaAutomaton *a,
                          const char *word,
                          const char *kind,
                          bool trick,
                          char *verdict);

/**
 * Decide timed-language equivalence. When the automata differ and
 * `witness` is non-null, a separating delay word is stored there (free
 * it with `ota_string_free`); otherwise `*witness` is set to null.
 *
 * # Safety
 * `a`, `b` must be live handles, `equal` a valid pointer, `witness` null or valid.
 */
enum OtaStatus ota_equivalent(const struct OtaAutomaton *a,
                              const struct OtaAutomaton *b,
                              bool *equal,
                              char **witness);

/**
 * Learn `target` with a simulated teacher. `stats` may be null.
 *
 * # Safety
 * `target` must be a live handle, `hypothesis` a valid pointer, `stats` null or valid.
 */
enum OtaStatus ota_learn(const struct OtaAutomaton *target,
                         enum OtaMode mode,
                         bool trick,
                         struct OtaAutomaton **hypothesis,
                         struct OtaLearnStats *stats);

/**
 * A random automaton; the same arguments always give the same automaton.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum OtaStatus ota_generate(size_t locations,
                            size_t alphabet,
                            uint64_t kappa,
                            uint64_t seed,
                            double density,
                            struct OtaAutomaton **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OTA_LEARN_H */
