#ifndef SATOTATE_H
#define SATOTATE_H

/* Generated by cbindgen from the satotate-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes of every fallible C-ABI call.
 */
typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_ARGUMENT = 1,
  ST_STATUS_INVALID_UTF8 = 2,
  ST_STATUS_UNKNOWN_MODEL = 3,
  ST_STATUS_SINGULAR_CURVE = 4,
  ST_STATUS_BAD_INPUT = 5,
  ST_STATUS_TOO_FEW_SAMPLES = 6,
  ST_STATUS_TEST_FAILED = 7,
  ST_STATUS_INTERNAL_ERROR = 8,
} StStatus;

/**
 * Opaque handle to a group model.
 */
typedef struct StModel StModel;

/**
 * Opaque handle to a sequence of (p, a_p) samples.
 */
typedef struct StSamples StSamples;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model by catalog name (e.g. "SU2", "N_U1", "O3_CANDIDATE").
 * `char_cap` <= 0 selects the model's default character cap.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be non-null.
 */
enum StStatus st_model_new(const char *name, int32_t char_cap, struct StModel **out);

/**
 * Returns the model's metadata as a JSON string (release with
 * `st_string_free`).
 *
 * # Safety
 * `model` must be a handle from `st_model_new`; `out` must be non-null.
 */
enum StStatus st_model_metadata_json(const struct StModel *model, char **out);

/**
 * Releases a model handle.
 *
 * # Safety
 * `model` must be a handle from `st_model_new` or null.
 */
void st_model_free(struct StModel *model);

/**
 * Generates Frobenius traces of y^2 = x^3 + a x + b for good primes
 * 5 <= p <= bound.
 *
 * # Safety
 * `out` must be non-null.
 */
enum StStatus st_samples_generate(int64_t a, int64_t b, uint64_t bound, struct StSamples **out);

/**
 * Parses a `p,ap` CSV (with header) into a sample handle.
 *
 * # Safety
 * `csv` must be a valid NUL-terminated string; `out` must be non-null.
 */
enum StStatus st_samples_from_csv(const char *csv, bool negate_ap, struct StSamples **out);

/**
 * Number of samples in the handle.
 *
 * # Safety
 * `samples` must be a valid handle.
 */
uintptr_t st_samples_len(const struct StSamples *samples);

/**
 * Serializes the samples back to CSV (release with `st_string_free`).
 *
 * # Safety
 * `samples` must be a valid handle; `out` must be non-null.
 */
enum StStatus st_samples_write_csv(const struct StSamples *samples, char **out);

/**
 * Releases a sample handle.
 *
 * # Safety
 * `samples` must be a handle from this library or null.
 */
void st_samples_free(struct StSamples *samples);

/**
 * Runs the full test battery. `model_selection` follows the CLI syntax
 * (`NAME`, `auto`, or `sym2:NAME`). On success `report_out` receives the
 * JSON report (release with `st_string_free`) and `verdict_out` receives
 * 0 = PASS, 1 = FAIL, 3 = INCONCLUSIVE.
 *
 * # Safety
 * All pointer arguments must be valid; strings NUL-terminated.
 */
enum StStatus st_run_test(const struct StSamples *samples,
                          const char *model_selection,
                          int32_t char_cap,
                          double z,
                          char **report_out,
                          int32_t *verdict_out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by this library, or null.
 */
void st_string_free(char *s);

/**
 * Always null-safe: returns a static library version string (do not free).
 */
const char *st_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SATOTATE_H */
