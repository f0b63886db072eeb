#ifndef ENTWINE_H
#define ENTWINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EntwineStatus {
  ENTWINE_STATUS_OK = 0,
  /**
   * A check ran and failed, or a mathematical precondition does not hold.
   */
  ENTWINE_STATUS_MATH_FAILURE = 1,
  ENTWINE_STATUS_PARSE_ERROR = 2,
  ENTWINE_STATUS_INVALID_ARGUMENT = 3,
  ENTWINE_STATUS_NULL_POINTER = 4,
  ENTWINE_STATUS_INTERNAL = 5,
} EntwineStatus;

/**
 * Which subcomplex to take cohomology of.
 */
typedef enum EntwineTheory {
  ENTWINE_THEORY_HOCHSCHILD = 0,
  ENTWINE_THEORY_CYCLIC = 1,
  ENTWINE_THEORY_INVARIANT = 2,
} EntwineTheory;

/**
 * An entwining structure owned by the library.
 */
typedef struct EntwineStructure EntwineStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a structure file. `field` may be null to keep the file's field,
 * or `"q"` / `"fp:P"` to override it.
 *
 * # Safety
 * `json` and a non-null `field` must be nul-terminated strings; `out` must
 * be valid for a pointer write.
 */
enum EntwineStatus entwine_structure_from_json(const char *json,
                                               const char *field,
                                               struct EntwineStructure **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `handle` must come from [`entwine_structure_from_json`] and not be used afterwards.
 */
void entwine_structure_free(struct EntwineStructure *handle);

/**
 * Dimensions of the algebra and the coalgebra.
 *
 * # Safety
 * `handle` must be a live handle; `dim_a` and `dim_c` must be valid for writes.
 */
enum EntwineStatus entwine_structure_dims(const struct EntwineStructure *handle,
                                          size_t *dim_a,
                                          size_t *dim_c);

/**
 * Checks the axioms. Writes 1 to `passed` when all hold and 0 otherwise;
 * the per-axiom report is written to `report_json` when it is non-null.
 *
 * # Safety
 * `handle` must be a live handle; `passed` must be valid for a write;
 * `report_json` must be null or valid for a pointer write.
 */
enum EntwineStatus entwine_validate(const struct EntwineStructure *handle,
                                    int32_t *passed,
                                    char **report_json);

/**
 * Cohomology dimensions in degrees `0..=max_degree`, written to `out`,
 * which must hold at least `max_degree + 1` entries.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid for `out_len` writes.
 */
enum EntwineStatus entwine_cohomology_dims(const struct EntwineStructure *handle,
                                           enum EntwineTheory theory,
                                           size_t max_degree,
                                           size_t *out,
                                           size_t out_len);

/**
 * The structure in canonical file form.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be valid for a pointer write.
 */
enum EntwineStatus entwine_structure_to_json(const struct EntwineStructure *handle, char **out);

/**
 * Runs a command-line invocation such as `{"cohomology", "s.json",
 * "--max-degree", "3"}` (without the program name) and writes its JSON
 * report to `report_json`. A failed check returns
 * [`EntwineStatus::MathFailure`] together with the report.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings; `report_json` must be
 * valid for a pointer write.
 */
enum EntwineStatus entwine_run(size_t argc, const char *const *argv, char **report_json);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void entwine_string_free(char *s);

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *entwine_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *entwine_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTWINE_H */
