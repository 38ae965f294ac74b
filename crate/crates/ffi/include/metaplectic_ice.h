#ifndef METAPLECTIC_ICE_H
#define METAPLECTIC_ICE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define MICE_ROW_GAMMA 0

#define MICE_ROW_DELTA 1

#define MICE_METHOD_ENUMERATE 0

#define MICE_METHOD_TRANSFER 1

#define MICE_ORDER_GAMMA_DELTA 0

#define MICE_ORDER_DELTA_GAMMA 1

// Result of every fallible call.
typedef enum MiceStatus {
  MICE_STATUS_OK = 0,
  // The computation ran and found a counterexample.
  MICE_STATUS_VERIFICATION_FAILED = 1,
  MICE_STATUS_INVALID_ARGUMENT = 2,
  MICE_STATUS_NULL_POINTER = 3,
  // A panic or other internal failure was caught at the boundary.
  MICE_STATUS_INTERNAL = 4,
} MiceStatus;

// An element of the coefficient ring.
typedef struct MiceCoeff MiceCoeff;

// A lattice system: dimensions, row types and boundary.
typedef struct MiceSystem MiceSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *mice_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *mice_version(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void mice_string_free(char *s);

// Standard system for `lambda` (e.g. `"3,2,0"`) with `rows` rows.
// `row_types` is `"gamma"`, `"delta"`, or one letter per row (`"G,D,G"`).
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum MiceStatus mice_system_standard(const char *lambda,
                                     size_t rows,
                                     const char *row_types,
                                     uint32_t n,
                                     struct MiceSystem **out);

// Two-row system with explicit boundary column sets such as `"{4,2,1}"`.
// `columns = 0` picks the smallest width that fits.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum MiceStatus mice_system_two_row(const char *top,
                                    const char *bottom,
                                    size_t columns,
                                    uint32_t order,
                                    uint32_t n,
                                    struct MiceSystem **out);

// # Safety
// `system` must come from this library and not have been freed. Null is ignored.
void mice_system_free(struct MiceSystem *system);

// One-line description of a system.
//
// # Safety
// `system` must be a live handle; `out` must be writable.
enum MiceStatus mice_system_describe(const struct MiceSystem *system, char **out);

// Partition function by enumeration or transfer matrices.
//
// # Safety
// `system` must be a live handle; `out` must be writable.
enum MiceStatus mice_partition_function(const struct MiceSystem *system,
                                        uint32_t method,
                                        struct MiceCoeff **out);

// Parse canonical text into the ring with modulus `n` and `nvars` spectral
// variables.
//
// # Safety
// `text` must be NUL-terminated; `out` must be writable.
enum MiceStatus mice_coeff_parse(const char *text,
                                 uint32_t n,
                                 size_t nvars,
                                 struct MiceCoeff **out);

// Canonical text of an element.
//
// # Safety
// `coeff` must be a live handle; `out` must be writable.
enum MiceStatus mice_coeff_to_string(const struct MiceCoeff *coeff, char **out);

// Exact equality. Elements of different rings compare unequal.
//
// # Safety
// Both handles must be live; `out` must be writable.
enum MiceStatus mice_coeff_equal(const struct MiceCoeff *a, const struct MiceCoeff *b, bool *out);

// # Safety
// `coeff` must come from this library and not have been freed. Null is ignored.
void mice_coeff_free(struct MiceCoeff *coeff);

// Yang-Baxter equation for `R^{XY}` on all `64 n^4` boundaries. Returns
// `VerificationFailed` on a counterexample; `failures` (may be null)
// receives their count.
//
// # Safety
// `failures` must be null or writable.
enum MiceStatus mice_verify_ybe(uint32_t x, uint32_t y, uint32_t n, size_t *failures);

// `Z(ΓΔ) = Z(ΔΓ)` with swapped parameters for one boundary.
//
// # Safety
// String arguments must be NUL-terminated.
enum MiceStatus mice_verify_two_row(const char *top,
                                    const char *bottom,
                                    size_t columns,
                                    uint32_t n);

// `Z(S^Γ_λ) = Z(S^Δ_λ)` with reversed parameters.
//
// # Safety
// `lambda` must be NUL-terminated.
enum MiceStatus mice_verify_duality(const char *lambda, size_t rows, uint32_t n);

// Run a JSON config, as accepted by `mice --config`, and return the
// rendered report. The status mirrors the CLI exit code (0, 1 or 2); on
// status 2 the report is an object with an `error` field.
//
// # Safety
// `config_json` must be NUL-terminated; `report` must be writable.
enum MiceStatus mice_run_json(const char *config_json, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAPLECTIC_ICE_H */
