#ifndef FREELAB_H
#define FREELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_UTF8 = 2,
  FL_STATUS_DOMAIN = 3,
  FL_STATUS_RESOURCE = 4,
  FL_STATUS_NUMERIC = 5,
  FL_STATUS_UNSUPPORTED = 6,
  FL_STATUS_IO = 7,
  FL_STATUS_PANIC = 8,
} FlStatus;

// Seeded random stream (ChaCha8, one independent stream per index).
typedef struct FlRng FlRng;

// Semicircle law with a center and radius.
typedef struct FlSemicircle FlSemicircle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the next
// failing call on the same thread; do not free.
const char *fl_last_error(void);

// Static description of a status code.
const char *fl_status_str(enum FlStatus status);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void fl_string_free(char *s);

// # Safety
// `out` must be a valid pointer to writable storage.
enum FlStatus fl_rng_new(uint64_t seed, uint64_t stream, struct FlRng **out);

// # Safety
// `rng` must be NULL or a live handle from [`fl_rng_new`].
void fl_rng_free(struct FlRng *rng);

// # Safety
// `rng` and `out` must be valid.
enum FlStatus fl_rng_next_u64(struct FlRng *rng, uint64_t *out);

// # Safety
// `out` must be valid.
enum FlStatus fl_semicircle_new(double center, double radius, struct FlSemicircle **out);

// # Safety
// `law` must be NULL or a live handle.
void fl_semicircle_free(struct FlSemicircle *law);

// m-th moment in closed form.
//
// # Safety
// `law` and `out` must be valid.
enum FlStatus fl_semicircle_moment(const struct FlSemicircle *law, uint32_t m, double *out);

// # Safety
// `law` and `out` must be valid.
enum FlStatus fl_semicircle_cdf(const struct FlSemicircle *law, double t, double *out);

// # Safety
// `law` and `out` must be valid.
enum FlStatus fl_semicircle_quantile(const struct FlSemicircle *law, double s, double *out);

// Fills `buf[0..len]` with draws from the law.
//
// # Safety
// `law` and `rng` must be live handles; `buf` must hold `len` doubles.
enum FlStatus fl_semicircle_sample(const struct FlSemicircle *law,
                                   struct FlRng *rng,
                                   double *buf,
                                   size_t len);

// Runs a command line (without the program name), e.g.
// `{"rmt", "--n", "4", "--seed", "7"}`. The process-style exit code always
// goes to `exit_code`. On `FL_STATUS_OK` the rendered report (JSON or CSV)
// goes to `out`, which the caller frees with [`fl_string_free`]; a report
// whose checks fail still returns `FL_STATUS_OK` with exit code 1. When no
// report is produced the status names the failure and the message is in
// [`fl_last_error`].
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `exit_code` and `out`
// must be valid.
enum FlStatus fl_run(const char *const *argv, size_t argc, int32_t *exit_code, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FREELAB_H */
