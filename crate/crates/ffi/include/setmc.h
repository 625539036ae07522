/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SETMC_H
#define SETMC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SetmcStatus {
  SETMC_STATUS_OK = 0,
  SETMC_STATUS_NULL_ARGUMENT = 1,
  SETMC_STATUS_INVALID_UTF8 = 2,
  SETMC_STATUS_INVALID_ARGUMENT = 3,
  SETMC_STATUS_MODEL_ERROR = 4,
  SETMC_STATUS_PROPERTY_ERROR = 5,
  SETMC_STATUS_EXPLORE_ERROR = 6,
  SETMC_STATUS_TIMEOUT = 7,
  SETMC_STATUS_STORE_BUDGET = 8,
  SETMC_STATUS_COUNTEREXAMPLE_ERROR = 9,
  SETMC_STATUS_PANIC = 10,
} SetmcStatus;

typedef enum SetmcMode {
  SETMC_MODE_SYM = 0,
  SETMC_MODE_EXP = 1,
} SetmcMode;

typedef enum SetmcAlgorithm {
  SETMC_ALGORITHM_NDFS = 0,
  SETMC_ALGORITHM_OWCTY = 1,
} SetmcAlgorithm;

/**
 * A parsed model.
 */
typedef struct SetmcModel SetmcModel;

/**
 * The result of a completed check.
 */
typedef struct SetmcVerdict SetmcVerdict;

/**
 * Check configuration. Zero in `max_store_bytes`, `max_evals` or
 * `timeout_ms` selects the default (4 GiB, 2^24 evaluations, no timeout).
 * `mode` and `algorithm` hold [`SetmcMode`] and [`SetmcAlgorithm`] values.
 */
typedef struct SetmcOptions {
  uint32_t mode;
  uint32_t algorithm;
  uint64_t max_store_bytes;
  uint64_t max_evals;
  uint64_t timeout_ms;
  bool self_loop_deadlocks;
} SetmcOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next setmc call on the same thread.
 */
const char *setmc_last_error(void);

struct SetmcOptions setmc_default_options(void);

/**
 * Parses model source text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SetmcStatus setmc_model_parse(const char *text, struct SetmcModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`setmc_model_parse`] not yet freed.
 */
void setmc_model_free(struct SetmcModel *model);

/**
 * Name declared by `model <name>;`. Free it with [`setmc_string_free`].
 *
 * # Safety
 * `model` must be a live handle.
 */
enum SetmcStatus setmc_model_name(const struct SetmcModel *model, char **out);

/**
 * Checks the model against a property. `property` names a `#property`
 * block and `ltl` gives a formula over the APs of the model's blocks; either
 * may be NULL, following the same rules as `setmc check`. `options` may be
 * NULL for the defaults. Timeouts and store exhaustion are reported as
 * statuses, not verdicts.
 *
 * # Safety
 * `model` must be a live handle, the strings NULL or NUL-terminated, and
 * `out` a valid pointer.
 */
enum SetmcStatus setmc_check(const struct SetmcModel *model,
                             const char *property,
                             const char *ltl,
                             const struct SetmcOptions *options,
                             struct SetmcVerdict **out);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
bool setmc_verdict_holds(const struct SetmcVerdict *verdict);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
uint64_t setmc_verdict_states(const struct SetmcVerdict *verdict);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
uint64_t setmc_verdict_transitions(const struct SetmcVerdict *verdict);

/**
 * OWCTY rounds; zero for NDFS.
 *
 * # Safety
 * `verdict` must be a live handle.
 */
uint64_t setmc_verdict_iterations(const struct SetmcVerdict *verdict);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
double setmc_verdict_seconds(const struct SetmcVerdict *verdict);

/**
 * Counterexample in the text trace format, or NULL when the property
 * holds. Free the string with [`setmc_string_free`].
 *
 * # Safety
 * `verdict` must be a live handle.
 */
char *setmc_verdict_trace_text(const struct SetmcVerdict *verdict);

/**
 * # Safety
 * `verdict` must be NULL or a handle from [`setmc_check`] not yet freed.
 */
void setmc_verdict_free(struct SetmcVerdict *verdict);

/**
 * Source text of the Peterson benchmark with input domain `0..r`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SetmcStatus setmc_generate_peterson(uint32_t r, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void setmc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SETMC_H */
