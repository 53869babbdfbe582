/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef FFBIAS_H
#define FFBIAS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FfbStatus {
  FFB_STATUS_OK = 0,
  FFB_STATUS_NULL_POINTER = 1,
  FFB_STATUS_INVALID_UTF8 = 2,
  FFB_STATUS_PARSE = 3,
  FFB_STATUS_UNSUPPORTED = 4,
  /**
   * an internal consistency check failed (Hasse, functional equation, ...)
   */
  FFB_STATUS_CONSISTENCY = 5,
  FFB_STATUS_BUFFER_TOO_SMALL = 6,
  FFB_STATUS_PANIC = 7,
} FfbStatus;

/**
 * A parsed, non-constant elliptic curve over `F_q(T)`.
 */
typedef struct FfbCurve FfbCurve;

/**
 * Local data of one curve, extended by degree on demand.
 */
typedef struct FfbTable FfbTable;

/**
 * Summary of an `L`-polynomial.
 */
typedef struct FfbLPolyInfo {
  size_t degree;
  int32_t epsilon;
  uint32_t rank;
  size_t trunc;
} FfbLPolyInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ffb_last_error(void);

/**
 * Static name of a status code.
 */
const char *ffb_status_name(enum FfbStatus status);

/**
 * Parse a curve file (`q = 5` / `a = [a1, a2, a3, a4, a6]` lines) and reject
 * constant `j`. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FfbStatus ffb_curve_parse(const char *text, struct FfbCurve **out);

/**
 * # Safety
 * `curve` must come from [`ffb_curve_parse`] and not be used afterwards. Null is ignored.
 */
void ffb_curve_free(struct FfbCurve *curve);

/**
 * Field size `q` of the constant field, or 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uint64_t ffb_curve_q(const struct FfbCurve *curve);

/**
 * New local table for `curve`. `seed` only steers the random points used
 * while counting; results do not depend on it.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum FfbStatus ffb_table_new(const struct FfbCurve *curve, uint64_t seed, struct FfbTable **out);

/**
 * # Safety
 * `table` must come from [`ffb_table_new`] and not be used afterwards. Null is ignored.
 */
void ffb_table_free(struct FfbTable *table);

/**
 * Compute local data for all places of degree `<= d_max`.
 *
 * # Safety
 * `table` must be a live handle not used concurrently.
 */
enum FfbStatus ffb_table_extend(struct FfbTable *table, size_t d_max);

/**
 * Exact `L`-polynomial of `Sym^n` (`n` is 1 or 2). `trunc = 0` picks the
 * default truncation. Coefficients are not returned here; see
 * [`ffb_lpoly_json`].
 *
 * # Safety
 * `table` must be a live handle and `info` a valid pointer.
 */
enum FfbStatus ffb_lpoly_info(struct FfbTable *table,
                              uint32_t n,
                              size_t trunc,
                              bool include_infinite,
                              struct FfbLPolyInfo *info);

/**
 * The `L`-polynomial as a JSON object with decimal-string coefficients.
 * Release the string with [`ffb_string_free`].
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum FfbStatus ffb_lpoly_json(struct FfbTable *table,
                              uint32_t n,
                              size_t trunc,
                              bool include_infinite,
                              char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void ffb_string_free(char *s);

/**
 * Cumulative bias series of `kind` (`a_weighted`, `mertens_II`, ...) for
 * degrees `1..=d_max`, written to `values[0..d_max]`. The fitted predicted
 * slope goes to `predicted_slope` when it is not null.
 *
 * # Safety
 * `table` must be a live handle, `kind` a NUL-terminated string and
 * `values` writable for `len` doubles.
 */
enum FfbStatus ffb_bias_series(struct FfbTable *table,
                               const char *kind,
                               size_t d_max,
                               bool include_infinite,
                               double *values,
                               size_t len,
                               double *predicted_slope);

/**
 * Ratios of the rescaled partial Euler product to its predicted limit for
 * degrees `1..=d_max`, written to `ratios[0..d_max]`. The centre order and
 * the limit go to `m` and `rhs` when those are not null.
 *
 * # Safety
 * `table` must be a live handle and `ratios` writable for `len` doubles.
 */
enum FfbStatus ffb_drh_ratios(struct FfbTable *table,
                              size_t d_max,
                              bool include_infinite,
                              double *ratios,
                              size_t len,
                              uint32_t *m,
                              double *rhs);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFBIAS_H */
