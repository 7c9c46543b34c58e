/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GMS_H
#define GMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GmsAlgorithm {
  GMS_ALGORITHM_BACKWARD = 0,
  GMS_ALGORITHM_FORWARD = 1,
  GMS_ALGORITHM_ORACLE = 2,
} GmsAlgorithm;

// Result of a call. Non-negative values are answers, negative ones errors.
typedef enum GmsStatus {
  // Success; for solve and verify calls also "yes" / "accepted".
  GMS_STATUS_OK = 0,
  // The instance has no solution, or the solution was rejected.
  GMS_STATUS_NO = 1,
  GMS_STATUS_NULL_ARGUMENT = -1,
  GMS_STATUS_INVALID_UTF8 = -2,
  GMS_STATUS_PARSE = -3,
  GMS_STATUS_UNSUPPORTED = -4,
  GMS_STATUS_SOLVE = -5,
  GMS_STATUS_PANIC = -6,
} GmsStatus;

// Opaque parsed instance.
typedef struct GmsInstance GmsInstance;

// Opaque solution sequence.
typedef struct GmsSolution GmsSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last negative status on this thread, or NULL. Valid
// until the next failing call on the same thread.
const char *gms_last_error(void);

// Library version as a static string.
const char *gms_version(void);

// Parses instance text into `*out`.
enum GmsStatus gms_instance_parse(const char *text, struct GmsInstance **out);

void gms_instance_free(struct GmsInstance *instance);

// Number of layers, or 0 for NULL.
uintptr_t gms_instance_tau(const struct GmsInstance *instance);

uintptr_t gms_instance_vertex_count(const struct GmsInstance *instance);

uintptr_t gms_instance_k(const struct GmsInstance *instance);

uintptr_t gms_instance_ell(const struct GmsInstance *instance);

// Solves `instance`. Returns `Ok` and stores a solution in `*out` when
// one exists, `No` (leaving `*out` NULL) otherwise. `threads` of 0 means 1.
enum GmsStatus gms_solve(const struct GmsInstance *instance,
                         enum GmsAlgorithm algorithm,
                         uint32_t threads,
                         struct GmsSolution **out);

// Parses solution text (`S <layer> <elements>` lines) for `tau` layers.
enum GmsStatus gms_solution_parse(const char *text, uintptr_t tau, struct GmsSolution **out);

void gms_solution_free(struct GmsSolution *solution);

// Total insertions of the sequence, or 0 for NULL.
uintptr_t gms_solution_insertions(const struct GmsSolution *solution);

// Solution text; free with [`gms_string_free`]. NULL for a NULL handle.
char *gms_solution_to_string(const struct GmsSolution *solution);

// `Ok` if `solution` is accepted for `instance`, `No` if rejected.
enum GmsStatus gms_verify(const struct GmsInstance *instance, const struct GmsSolution *solution);

void gms_string_free(char *text);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GMS_H */
