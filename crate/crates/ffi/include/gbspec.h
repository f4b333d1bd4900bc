#ifndef GBSPEC_H
#define GBSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GbsStatus {
  GBS_STATUS_OK = 0,
  GBS_STATUS_NULL_POINTER = 1,
  GBS_STATUS_USAGE = 2,
  GBS_STATUS_CONSTRAINT = 3,
  GBS_STATUS_VALIDATION = 4,
  GBS_STATUS_UNSUPPORTED = 5,
  GBS_STATUS_SYNTAX = 6,
  GBS_STATUS_EVAL = 7,
  GBS_STATUS_NUMERICAL = 8,
  GBS_STATUS_NO_CONVERGENCE = 9,
  GBS_STATUS_IO = 10,
  GBS_STATUS_JSON = 11,
  GBS_STATUS_BUFFER_TOO_SMALL = 12,
  GBS_STATUS_PANIC = 13,
} GbsStatus;

typedef enum GbsSymbolKind {
  GBS_SYMBOL_KIND_H = 0,
  GBS_SYMBOL_KIND_G = 1,
  GBS_SYMBOL_KIND_F = 2,
} GbsSymbolKind;

typedef enum GbsFamily {
  GBS_FAMILY_POLYNOMIAL = 0,
  GBS_FAMILY_HYPERBOLIC = 1,
  GBS_FAMILY_TRIGONOMETRIC = 2,
} GbsFamily;

/**
 * An assembled collocation matrix (1D or multi-dimensional).
 */
typedef struct GbsCollocationSystem GbsCollocationSystem;

/**
 * A spectral symbol h_p, g_p or f_p.
 */
typedef struct GbsSymbol GbsSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *gbs_last_error_message(void);

/**
 * Builds a symbol; `alpha` is ignored for the polynomial family.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum GbsStatus gbs_symbol_new(enum GbsSymbolKind kind,
                              size_t p,
                              enum GbsFamily fam,
                              double alpha,
                              struct GbsSymbol **out);

/**
 * # Safety
 * `sym` must come from [`gbs_symbol_new`]; `out` must be writable.
 */
enum GbsStatus gbs_symbol_eval(const struct GbsSymbol *sym, double theta, double *out);

/**
 * Fourier coefficients c_k for k = −b..b, split into real and imaginary
 * parts. `len` receives 2b+1; if `capacity` is smaller the call fails with
 * `BufferTooSmall` and nothing is written to the buffers.
 *
 * # Safety
 * `sym` must come from [`gbs_symbol_new`]; `re` and `im` must hold
 * `capacity` values; `len` must be writable.
 */
enum GbsStatus gbs_symbol_coefficients(const struct GbsSymbol *sym,
                                       double *re,
                                       double *im,
                                       size_t capacity,
                                       size_t *len);

/**
 * # Safety
 * `sym` must come from [`gbs_symbol_new`] and not be used afterwards.
 */
void gbs_symbol_free(struct GbsSymbol *sym);

/**
 * Value of the cardinal GB-spline φ_p at `t`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GbsStatus gbs_cardinal_eval(enum GbsFamily fam, double alpha, size_t p, double t, double *out);

/**
 * Assembles the collocation matrix for a JSON problem description (the
 * same format the command-line tool reads) with `n` intervals per direction.
 *
 * # Safety
 * `config_json` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum GbsStatus gbs_collocation_new(const char *config_json,
                                   size_t n,
                                   struct GbsCollocationSystem **out);

/**
 * Matrix order, or 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or come from [`gbs_collocation_new`].
 */
size_t gbs_collocation_order(const struct GbsCollocationSystem *sys);

/**
 * Copies the matrix, row-major, into `buf` (order² values). With
 * `normalized` non-zero the matrix is divided by n².
 *
 * # Safety
 * `sys` must come from [`gbs_collocation_new`]; `buf` must hold `capacity` values.
 */
enum GbsStatus gbs_collocation_matrix(const struct GbsCollocationSystem *sys,
                                      int32_t normalized,
                                      double *buf,
                                      size_t capacity);

/**
 * Eigenvalues of the normalized matrix, sorted by real part.
 *
 * # Safety
 * `sys` must come from [`gbs_collocation_new`]; `re` and `im` must hold
 * `capacity` values.
 */
enum GbsStatus gbs_collocation_eigenvalues(const struct GbsCollocationSystem *sys,
                                           double *re,
                                           double *im,
                                           size_t capacity);

/**
 * # Safety
 * `sys` must come from [`gbs_collocation_new`] and not be used afterwards.
 */
void gbs_collocation_free(struct GbsCollocationSystem *sys);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GBSPEC_H */
