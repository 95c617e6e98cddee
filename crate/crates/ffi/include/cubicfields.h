#ifndef CUBICFIELDS_H
#define CUBICFIELDS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which signatures a count covers; passed as a plain u32.
 */
typedef enum CfInf {
  CF_INF_BOTH = 0,
  CF_INF_REAL = 1,
  CF_INF_COMPLEX = 2,
} CfInf;

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_DOMAIN = 2,
  CF_STATUS_CAPACITY = 3,
  CF_STATUS_INTEGRITY = 4,
  CF_STATUS_LOAD = 5,
  CF_STATUS_ACCURACY = 6,
  CF_STATUS_LOCKED = 7,
  CF_STATUS_IO = 8,
  CF_STATUS_BUFFER_TOO_SMALL = 9,
  CF_STATUS_PANIC = 10,
} CfStatus;

/**
 * Opaque census handle.
 */
typedef struct CfCensus CfCensus;

typedef struct CfField {
  /**
   * Canonical form a x³ + b x²y + c xy² + d y³.
   */
  int64_t a;
  int64_t b;
  int64_t c;
  int64_t d;
  int64_t disc;
  int64_t resolvent_d;
  uint64_t conductor_f;
} CfField;

typedef struct CfCount {
  uint64_t count;
  double predicted;
  double predicted_err;
  uint64_t borderline;
  bool unreliable;
} CfCount;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * Valid until the next call on the same thread.
 */
const char *cf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Discriminant of a x³ + b x²y + c xy² + d y³.
 *
 * # Safety
 * `disc` must be a valid pointer.
 */
enum CfStatus cf_form_disc(int64_t a, int64_t b, int64_t c, int64_t d, int64_t *disc);

/**
 * Disc = D·F² with D a fundamental discriminant (or 1).
 *
 * # Safety
 * `d` and `f` must be valid pointers.
 */
enum CfStatus cf_resolvent_decompose(int64_t disc, int64_t *d, uint64_t *f);

/**
 * Product of the primes dividing a field discriminant; 0 for disc = 0.
 */
uint64_t cf_radical(int64_t disc);

/**
 * All cubic fields with 0 < |Disc| < ceiling.
 *
 * # Safety
 * `census` must be a valid pointer; on success it receives a handle for `cf_census_free`.
 */
enum CfStatus cf_census_enumerate(uint64_t ceiling, struct CfCensus **census);

/**
 * Load a checksummed cache directory written by `cubicfields enumerate`.
 *
 * # Safety
 * `dir` must be a NUL-terminated UTF-8 path and `census` a valid pointer.
 */
enum CfStatus cf_census_load(const char *dir, struct CfCensus **census);

/**
 * # Safety
 * `census` must come from this library and not be used afterwards; NULL is ignored.
 */
void cf_census_free(struct CfCensus *census);

/**
 * # Safety
 * `census` must be a live handle or NULL (returns 0).
 */
uint64_t cf_census_len(const struct CfCensus *census);

/**
 * # Safety
 * `census` must be a live handle or NULL (returns 0).
 */
uint64_t cf_census_ceiling(const struct CfCensus *census);

/**
 * Field `index` in |Disc| order.
 *
 * # Safety
 * `census` must be a live handle and `field_out` a valid pointer.
 */
enum CfStatus cf_census_get(const struct CfCensus *census,
                            uint64_t index,
                            struct CfField *field_out);

/**
 * Count of fields with |D|^alpha F^beta < x and its predicted main term.
 *
 * # Safety
 * `census` must be a live handle and `result` a valid pointer.
 */
enum CfStatus cf_count_generalized(const struct CfCensus *census,
                                   double alpha,
                                   double beta,
                                   double x,
                                   uint32_t inf,
                                   uint64_t pmax,
                                   struct CfCount *result);

/**
 * Coefficients 0..=zmax of the resolvent-d series with no local conditions.
 * `buf` needs room for zmax + 1 entries.
 *
 * # Safety
 * `census` must be a live handle; `buf` must point to `buf_len` writable u64s.
 */
enum CfStatus cf_phi_coefficients(const struct CfCensus *census,
                                  int64_t d,
                                  uint64_t zmax,
                                  uint64_t *buf,
                                  size_t buf_len);

/**
 * L₁(s) = Σ_f C₁(f) f^{−s} with no local conditions.
 * With s = β/α it is the X^{1/α} constant of the generalized count when α < β.
 *
 * # Safety
 * `value` and `err` must be valid pointers.
 */
enum CfStatus cf_l1(double s, uint32_t inf, uint64_t pmax, double *value, double *err);

/**
 * Constant of the X log X law for counts by radical; `real` picks the signature.
 *
 * # Safety
 * `value` and `err` must be valid pointers.
 */
enum CfStatus cf_radical_constant(bool real, uint64_t pmax, double *value, double *err);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBICFIELDS_H */
