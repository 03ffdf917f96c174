#ifndef LPADIC_H
#define LPADIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
enum LpadicStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  LPADIC_STATUS_OK = 0,
  LPADIC_STATUS_NULL_POINTER = 1,
  LPADIC_STATUS_INVALID_ARGUMENT = 2,
  LPADIC_STATUS_NOT_A_UNIT = 3,
  LPADIC_STATUS_DIVISION_BY_ZERO = 4,
  LPADIC_STATUS_PRECISION_EXHAUSTED = 5,
  LPADIC_STATUS_PRIME_MISMATCH = 6,
  LPADIC_STATUS_MATH_ERROR = 7,
  LPADIC_STATUS_BUFFER_TOO_SMALL = 8,
  LPADIC_STATUS_PANIC = 9,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum LpadicStatus LpadicStatus;
#else
typedef int32_t LpadicStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque p-adic number.
 */
typedef struct LpadicNumber LpadicNumber;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates `n` at absolute precision `prec`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
LpadicStatus lpadic_number_from_int(uint64_t p,
                                    int64_t n,
                                    uint32_t prec,
                                    struct LpadicNumber **out);

/**
 * Creates `num / den`; the precision is relative to the valuation.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
LpadicStatus lpadic_number_from_rational(uint64_t p,
                                         int64_t num,
                                         int64_t den,
                                         uint32_t prec,
                                         struct LpadicNumber **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `x` must be null or a handle from this library not yet freed.
 */
void lpadic_number_free(struct LpadicNumber *x);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
LpadicStatus lpadic_number_add(const struct LpadicNumber *a,
                               const struct LpadicNumber *b,
                               struct LpadicNumber **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
LpadicStatus lpadic_number_sub(const struct LpadicNumber *a,
                               const struct LpadicNumber *b,
                               struct LpadicNumber **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
LpadicStatus lpadic_number_mul(const struct LpadicNumber *a,
                               const struct LpadicNumber *b,
                               struct LpadicNumber **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
LpadicStatus lpadic_number_div(const struct LpadicNumber *a,
                               const struct LpadicNumber *b,
                               struct LpadicNumber **out);

/**
 * Logarithm of a unit.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
LpadicStatus lpadic_number_log(const struct LpadicNumber *a, struct LpadicNumber **out);

/**
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
LpadicStatus lpadic_number_teichmuller(const struct LpadicNumber *a, struct LpadicNumber **out);

/**
 * Writes the valuation, or sets `*is_zero` when the number is zero to
 * its precision.
 *
 * # Safety
 * `a` must be a live handle; `val` and `is_zero` writable.
 */
LpadicStatus lpadic_number_valuation(const struct LpadicNumber *a, int64_t *val, bool *is_zero);

/**
 * Absolute precision: the number is known modulo `p^abs`.
 *
 * # Safety
 * `a` must be a live handle and `abs` writable.
 */
LpadicStatus lpadic_number_precision(const struct LpadicNumber *a, int64_t *abs);

/**
 * Writes `unit*p^v + O(p^N)` as a NUL-terminated string. `needed`, if not
 * null, receives the required buffer size including the terminator.
 *
 * # Safety
 * `a` must be a live handle; `buf` must hold `len` bytes.
 */
LpadicStatus lpadic_number_to_string(const struct LpadicNumber *a,
                                     char *buf,
                                     size_t len,
                                     size_t *needed);

/**
 * `L_p(ω^k, 1 - n)` at precision `prec`.
 *
 * # Safety
 * `out` must be writable.
 */
LpadicStatus lpadic_kl_special_omega(uint64_t p,
                                     int64_t k,
                                     uint32_t n,
                                     uint32_t prec,
                                     struct LpadicNumber **out);

/**
 * Copies the message for the last failure on this thread.
 *
 * # Safety
 * `buf` must hold `len` bytes; `needed` may be null.
 */
LpadicStatus lpadic_last_error(char *buf, size_t len, size_t *needed);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lpadic_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPADIC_H */
