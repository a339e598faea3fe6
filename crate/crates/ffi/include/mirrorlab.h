#ifndef MIRRORLAB_H
#define MIRRORLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlClass {
  ML_CLASS_A1 = 0,
  ML_CLASS_A2 = 1,
  ML_CLASS_A3 = 2,
  ML_CLASS_EXCEPTIONAL = 3,
  ML_CLASS_UNDECIDED = 4,
} MlClass;

typedef enum MlStatus {
  ML_STATUS_OK = 0,
  ML_STATUS_NULL_POINTER = 1,
  // A number string did not parse.
  ML_STATUS_PARSE = 2,
  // Parameters outside the domain of the operation.
  ML_STATUS_INVALID_ARGUMENT = 3,
  // A level index beyond what the handle holds.
  ML_STATUS_OUT_OF_RANGE = 4,
  // An internal panic was caught at the boundary.
  ML_STATUS_INTERNAL = 5,
} MlStatus;

// Opaque double rotation.
typedef struct MlDoubleRotation MlDoubleRotation;

// Opaque language L(0..=n_max) of a double rotation.
typedef struct MlLanguage MlLanguage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failed call on this thread ("" after a
// success). Valid until the next call on the same thread.
const char *ml_last_error(void);

// Library version string (static).
const char *ml_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ml_string_free(char *s);

// T(y) = y + alpha on [0, c), y + beta on [c, 1), mod 1.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum MlStatus ml_rotation_new(const char *alpha,
                              const char *beta,
                              const char *c,
                              struct MlDoubleRotation **out);

// Section return map of the table with mirror at x = a, height b, slope t.
//
// # Safety
// As for `ml_rotation_new`.
enum MlStatus ml_rotation_from_billiard(const char *a,
                                        const char *b,
                                        const char *t,
                                        struct MlDoubleRotation **out);

// # Safety
// `h` must come from `ml_rotation_new`/`ml_rotation_from_billiard` and not
// have been freed. Null is ignored.
void ml_rotation_free(struct MlDoubleRotation *h);

// Writes the parameters as newly allocated strings.
//
// # Safety
// `h` must be a live handle; out-pointers must be writable.
enum MlStatus ml_rotation_params(const struct MlDoubleRotation *h,
                                 char **alpha,
                                 char **beta,
                                 char **c);

// T(y) as a newly allocated string; y must lie in [0, 1).
//
// # Safety
// `h` must be a live handle, `y` NUL-terminated, `out` writable.
enum MlStatus ml_rotation_apply(const struct MlDoubleRotation *h, const char *y, char **out);

// The first `n` letters (0 or 1) of the coding of y, written to `word`.
//
// # Safety
// `word` must have room for `n` bytes.
enum MlStatus ml_rotation_encode(const struct MlDoubleRotation *h,
                                 const char *y,
                                 size_t n,
                                 uint8_t *word);

// Builds L(0..=n_max) of the coded map.
//
// # Safety
// `h` must be a live handle; `out` writable.
enum MlStatus ml_language_build(const struct MlDoubleRotation *h,
                                size_t n_max,
                                struct MlLanguage **out);

// # Safety
// `h` must come from `ml_language_build` and not have been freed.
void ml_language_free(struct MlLanguage *h);

// # Safety
// `h` must be a live handle; `out` writable.
enum MlStatus ml_language_n_max(const struct MlLanguage *h, size_t *out);

// p(n), the number of words of length n.
//
// # Safety
// `h` must be a live handle; `out` writable.
enum MlStatus ml_language_complexity(const struct MlLanguage *h, size_t n, size_t *out);

// [s(n+1) − s(n)] minus the bispecial / non-prolongable sum; needs
// n + 2 <= n_max.
//
// # Safety
// `h` must be a live handle; `out` writable.
enum MlStatus ml_language_cassaigne_residual(const struct MlLanguage *h, size_t n, int64_t *out);

// Class of the direction t at a = 1/4 with mirror height b. Doubling times
// are written as -1 when the chain does not double.
//
// # Safety
// Strings NUL-terminated; out-pointers writable.
enum MlStatus ml_classify_quarter(const char *b,
                                  const char *t,
                                  size_t cap,
                                  enum MlClass *class_,
                                  int64_t *n0_e,
                                  int64_t *n0_f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIRRORLAB_H */
