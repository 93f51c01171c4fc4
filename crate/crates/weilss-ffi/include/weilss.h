#ifndef WEILSS_H
#define WEILSS_H

/* Generated by cbindgen from the weilss-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  /**
   * Success.
   */
  WeilssStatus_Ok = 0,
  /**
   * A pointer argument was null or a scalar argument malformed.
   */
  WeilssStatus_InvalidArgument = 1,
  /**
   * Parameters describe no valid object (bad prime, bad family, ...).
   */
  WeilssStatus_BadParameters = 2,
  /**
   * The computation exceeds the configured size caps.
   */
  WeilssStatus_TooLarge = 3,
  /**
   * Internal error; details via weilss_last_error.
   */
  WeilssStatus_Internal = 4,
} WeilssStatus;

/**
 * Opaque handle to an F_{p^k} arithmetic context.
 */
typedef struct WeilssField WeilssField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *weilss_last_error(void);

/**
 * Release a string allocated by this library.
 *
 * # Safety
 * `s` must have been returned through a `char **` out-parameter of this
 * library and not freed before.
 */
void weilss_string_free(char *s);

/**
 * Build the context for F_{p^k} (default size cap 2^24 elements).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
WeilssStatus weilss_field_new(uint64_t p, uint32_t k, WeilssField **out);

/**
 * Release a field handle.
 *
 * # Safety
 * `field` must come from [`weilss_field_new`] and not be used afterwards.
 */
void weilss_field_free(WeilssField *field);

/**
 * Number of elements p^k of the field.
 *
 * # Safety
 * `field` must be a live handle.
 */
uint64_t weilss_field_order(const WeilssField *field);

/**
 * Discrete logarithm of the element with the given index with respect to
 * the context generator. Fails on the zero element.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
WeilssStatus weilss_field_dlog(const WeilssField *field, uint64_t elem_index, uint64_t *out);

/**
 * Absolute trace (to the prime field) of the element with the given index.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
WeilssStatus weilss_field_trace(const WeilssField *field, uint64_t elem_index, uint64_t *out);

/**
 * Does some power of q hit -1 mod n? On success `*out_holds` is 1 or 0 and
 * `*out_witness` the minimal exponent s (0 when the condition fails).
 *
 * # Safety
 * `out_holds` and `out_witness` must be valid pointers.
 */
WeilssStatus weilss_minus_one_power(uint64_t q,
                                    uint64_t n,
                                    int32_t *out_holds,
                                    uint64_t *out_witness);

/**
 * Supersingularity verdict for an explicit L-polynomial with coefficients
 * a_0..a_2g (a_0 = 1) over F_q, as a JSON document.
 *
 * # Safety
 * `coeffs` must point to `len` readable values and `out_json` must be valid.
 */
WeilssStatus weilss_sstest_json(const int64_t *coeffs, uintptr_t len, uint64_t q, char **out_json);

/**
 * Criterion-side prediction for a curve family instance, as JSON. `family`
 * is "artin-schreier", "fermat" or "three-point"; `qas`, `a`, `b` are only
 * read for the families that use them (pass 0 otherwise).
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out_json` a valid pointer.
 */
WeilssStatus weilss_predict_json(const char *family,
                                 uint64_t p,
                                 uint32_t r,
                                 uint64_t n,
                                 uint64_t qas,
                                 uint64_t a,
                                 uint64_t b,
                                 char **out_json);

/**
 * Point counts, L-polynomial and verdict for a curve instance, as JSON.
 * `cap_points` of 0 selects the default cap on q^genus.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out_json` a valid pointer.
 */
WeilssStatus weilss_zeta_json(const char *family,
                              uint64_t p,
                              uint32_t r,
                              uint64_t n,
                              uint64_t qas,
                              uint64_t a,
                              uint64_t b,
                              uint64_t cap_points,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEILSS_H */
