#ifndef MPLKIT_H
#define MPLKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum MplStatus {
  MPL_STATUS_OK = 0,
  MPL_STATUS_NULL_POINTER = 1,
  MPL_STATUS_INVALID_UTF8 = 2,
  MPL_STATUS_PARSE = 3,
  MPL_STATUS_INVALID_ARGUMENT = 4,
  MPL_STATUS_DOMAIN = 5,
  MPL_STATUS_PRECISION = 6,
  MPL_STATUS_CONFIG = 7,
  MPL_STATUS_PANIC = 8,
} MplStatus;

// Opaque index handle.
typedef struct MplIndex MplIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *mpl_last_error(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void mpl_string_free(char *s);

// Parse `"1,2"` (or `"-"` for the empty index) into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum MplStatus mpl_index_parse(const char *text, struct MplIndex **out);

// Release an index handle. Null is ignored.
//
// # Safety
// `h` must come from this library and not have been freed.
void mpl_index_free(struct MplIndex *h);

// Weight of the index, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
uint32_t mpl_index_weight(const struct MplIndex *h);

// Depth of the index, or 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
size_t mpl_index_depth(const struct MplIndex *h);

// Text form, e.g. `"1,2"`. Free with [`mpl_string_free`].
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum MplStatus mpl_index_to_string(const struct MplIndex *h, char **out);

// The dual index of an admissible index, as a new handle.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum MplStatus mpl_index_dagger(const struct MplIndex *h, struct MplIndex **out);

// The vee-dual of a nonempty index, as a new handle.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum MplStatus mpl_index_vee(const struct MplIndex *h, struct MplIndex **out);

// `ζ(k)` of an admissible index as a decimal string with `digits` digits after the point.
// Free the result with [`mpl_string_free`].
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum MplStatus mpl_mzv(const struct MplIndex *h, uint32_t digits, char **out);

// `Σ_{n<m} ζ*_{<p}(k, {1}^n) p^n` modulo `p^m`, as a residue in `[0, p^m)`.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum MplStatus mpl_fmzv_star_series(const struct MplIndex *h,
                                    uint64_t p,
                                    uint32_t m,
                                    uint64_t *out);

// Run a named suite. `config_toml` may be null. On success `*out_jsonl` holds one
// JSON report per line (free with [`mpl_string_free`]) and `*failures` the number of
// FAIL reports.
//
// # Safety
// `suite` must be a NUL-terminated string, `config_toml` null or NUL-terminated;
// both output pointers must be writable.
enum MplStatus mpl_run_suite(const char *suite,
                             const char *config_toml,
                             char **out_jsonl,
                             size_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MPLKIT_H */
