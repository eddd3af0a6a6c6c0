#ifndef SNUMBERS_H
#define SNUMBERS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SnBoundary {
  SN_BOUNDARY_NONE = 0,
  SN_BOUNDARY_COMPACTNESS = 1,
  SN_BOUNDARY_B_OVER_P2 = 2,
  SN_BOUNDARY_B_OVER_P = 3,
  SN_BOUNDARY_B_LAMBDA = 4,
  SN_BOUNDARY_B_THETA_OVER_P1_CONJ = 5,
  SN_BOUNDARY_B_OVER_P1_CONJ = 6,
  SN_BOUNDARY_B_THETA_PRIME_OVER_P2 = 7,
} SnBoundary;

typedef enum SnCompactness {
  SN_COMPACTNESS_COMPACT = 0,
  SN_COMPACTNESS_NOT_COMPACT = 1,
  SN_COMPACTNESS_INDETERMINATE = 2,
} SnCompactness;

typedef enum SnExponentStatus {
  SN_EXPONENT_STATUS_EXACT = 0,
  SN_EXPONENT_STATUS_SANDWICH = 1,
  SN_EXPONENT_STATUS_LIMITING = 2,
  SN_EXPONENT_STATUS_NOT_COMPACT = 3,
  SN_EXPONENT_STATUS_NOT_COVERED = 4,
} SnExponentStatus;

typedef enum SnKind {
  SN_KIND_APPROXIMATION = 0,
  SN_KIND_GELFAND = 1,
  SN_KIND_KOLMOGOROV = 2,
  SN_KIND_WEYL = 3,
} SnKind;

typedef enum SnStatus {
  SN_STATUS_OK = 0,
  SN_STATUS_NULL_POINTER = 1,
  SN_STATUS_INVALID_ARGUMENT = 2,
  SN_STATUS_NOT_COMPACT = 3,
  SN_STATUS_UNTESTABLE = 4,
  SN_STATUS_TABLE_MISMATCH = 5,
  SN_STATUS_OVERFLOW = 6,
  SN_STATUS_FAILED = 7,
  SN_STATUS_PANIC = 8,
} SnStatus;

/**
 * Opaque function-space embedding.
 */
typedef struct SnEmbedding SnEmbedding;

/**
 * Opaque sequence-space embedding.
 */
typedef struct SnSeqSpec SnSeqSpec;

/**
 * `num/den`; `den == 0` (with `num > 0`) stands for infinity.
 */
typedef struct SnExtReal {
  int64_t num;
  int64_t den;
} SnExtReal;

/**
 * `num/den` with `den > 0`.
 */
typedef struct SnRational {
  int64_t num;
  int64_t den;
} SnRational;

/**
 * `lower` and `upper` are the exponents bounding `s_k` from below and
 * above (equal for exact results, `0/1` when there is no rate).
 */
typedef struct SnExponent {
  enum SnExponentStatus status;
  struct SnRational lower;
  struct SnRational upper;
  enum SnBoundary boundary;
} SnExponent;

typedef struct SnVerifyReport {
  bool pass;
  double upper_slope;
  double lower_slope;
} SnVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sn_version(void);

/**
 * Message for the last failed call on this thread, or null.
 */
const char *sn_last_error_message(void);

/**
 * Sequence-space embedding with `M_j = 2^{jb}` (floored for fractional `jb`).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SnStatus sn_seq_spec_new(struct SnExtReal p1,
                              struct SnExtReal q1,
                              struct SnExtReal p2,
                              struct SnExtReal q2,
                              struct SnRational delta,
                              struct SnRational b,
                              struct SnSeqSpec **out);

/**
 * # Safety
 * `spec` must come from [`sn_seq_spec_new`] and not be used afterwards.
 */
void sn_seq_spec_free(struct SnSeqSpec *spec);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SnStatus sn_embedding_new(struct SnExtReal p1,
                               struct SnExtReal q1,
                               struct SnRational s1,
                               struct SnExtReal p2,
                               struct SnExtReal q2,
                               struct SnRational s2,
                               uint32_t d,
                               struct SnEmbedding **out);

/**
 * # Safety
 * `emb` must come from [`sn_embedding_new`] and not be used afterwards.
 */
void sn_embedding_free(struct SnEmbedding *emb);

/**
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum SnStatus sn_seq_exponent(const struct SnSeqSpec *spec, enum SnKind k, struct SnExponent *out);

/**
 * # Safety
 * `emb` must be a live handle and `out` writable.
 */
enum SnStatus sn_func_exponent(const struct SnEmbedding *emb,
                               struct SnRational b,
                               enum SnKind k,
                               struct SnExponent *out);

/**
 * Exponent on a domain of finite measure (`b = d`).
 *
 * # Safety
 * `emb` must be a live handle and `out` writable.
 */
enum SnStatus sn_finite_measure_exponent(const struct SnEmbedding *emb,
                                         enum SnKind k,
                                         struct SnExponent *out);

/**
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum SnStatus sn_seq_compact(const struct SnSeqSpec *spec, enum SnCompactness *out);

/**
 * # Safety
 * `emb` must be a live handle and `out` writable.
 */
enum SnStatus sn_func_compact(const struct SnEmbedding *emb,
                              struct SnRational b,
                              enum SnCompactness *out);

/**
 * `c_k(id: ℓ_{p1}^n → ℓ_{p2}^n)` for `p2 ≤ p1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SnStatus sn_gelfand_exact(uint64_t n,
                               uint64_t k,
                               struct SnExtReal p1,
                               struct SnExtReal p2,
                               double *out);

/**
 * Certified upper bound on the tail `E_n`.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum SnStatus sn_tail_e(const struct SnSeqSpec *spec, uint32_t n, double *out);

/**
 * Envelope slope check over levels `l_min..=l_max` with the default allocation.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum SnStatus sn_verify_exponent(const struct SnSeqSpec *spec,
                                 enum SnKind k,
                                 uint32_t l_min,
                                 uint32_t l_max,
                                 double tol,
                                 struct SnVerifyReport *out);

/**
 * Parses `"3/2"`, `"0.25"` or `"inf"` into an extended real.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SnStatus sn_parse_ext_real(const char *text, struct SnExtReal *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SNUMBERS_H */
