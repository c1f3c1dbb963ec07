#ifndef SEPKIT_H
#define SEPKIT_H

/* Generated by cbindgen from sepkit-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Classification reported by [`sk_state_analyze`].
typedef enum SkClassification {
  SK_CLASSIFICATION_SEPARABLE_CERTIFIED = 0,
  SK_CLASSIFICATION_ENTANGLED_CERTIFIED = 1,
  SK_CLASSIFICATION_UNDETERMINED = 2,
} SkClassification;

// Status code returned by every fallible call.
typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_DIM_MISMATCH = 2,
  SK_STATUS_NOT_HERMITIAN = 3,
  SK_STATUS_INVALID_DENSITY = 4,
  SK_STATUS_NOT_COMPLETELY_POSITIVE = 5,
  SK_STATUS_BAD_RANK = 6,
  SK_STATUS_WITNESS_IS_PSD = 7,
  SK_STATUS_DIM_CAP = 8,
  SK_STATUS_NUMERIC_FAILURE = 9,
} SkStatus;

// Three-valued outcome of a numeric positivity search.
typedef enum SkVerdict {
  SK_VERDICT_NOT_POSITIVE = 0,
  SK_VERDICT_POSITIVE = 1,
  SK_VERDICT_INCONCLUSIVE = 2,
} SkVerdict;

// Opaque linear map in Choi form.
typedef struct SkMap SkMap;

// Opaque dense complex matrix.
typedef struct SkMatrix SkMatrix;

// Opaque bipartite density matrix.
typedef struct SkState SkState;

// Opaque entanglement witness.
typedef struct SkWitness SkWitness;

// Flat analysis report; `distance` is NaN when the dimension exceeds
// the optimizer cap.
typedef struct SkReport {
  enum SkClassification classification;
  double ppt_min_eigenvalue;
  double block_residual;
  double distance;
  uint64_t runtime_ms;
} SkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message for this thread into `buf` (truncated,
// always NUL-terminated when `len > 0`). Returns the full message
// length in bytes, excluding the terminator.
//
// # Safety
// `buf` must point to `len` writable bytes, or be NULL (then only the
// length is returned).
uintptr_t sk_last_error_message(char *buf, uintptr_t len);

// Library version as a static NUL-terminated string.
const char *sk_version(void);

// Create a rows x cols matrix from row-major real and imaginary parts.
// `im` may be NULL for a real matrix. Returns NULL on bad input.
//
// # Safety
// `re` (and `im` when non-NULL) must point to rows*cols doubles.
struct SkMatrix *sk_matrix_new(uintptr_t rows, uintptr_t cols, const double *re, const double *im);

// # Safety
// `m` must come from this library and not have been freed.
void sk_matrix_free(struct SkMatrix *m);

// # Safety
// `m` must be a live handle.
uintptr_t sk_matrix_rows(const struct SkMatrix *m);

// # Safety
// `m` must be a live handle.
uintptr_t sk_matrix_cols(const struct SkMatrix *m);

// Read one entry.
//
// # Safety
// All pointers must be valid; `m` must be a live handle.
enum SkStatus sk_matrix_get(const struct SkMatrix *m,
                            uintptr_t row,
                            uintptr_t col,
                            double *re_out,
                            double *im_out);

// Validate and wrap a density matrix with factor dimensions dA, dB.
//
// # Safety
// `matrix` must be a live handle and `out` a valid pointer.
enum SkStatus sk_state_new(const struct SkMatrix *matrix,
                           uintptr_t d_a,
                           uintptr_t d_b,
                           struct SkState **out);

// # Safety
// `s` must come from this library and not have been freed.
void sk_state_free(struct SkState *s);

// Peres partial-transpose test.
//
// # Safety
// `s` must be a live handle; out-pointers may be NULL to skip.
enum SkStatus sk_state_ppt(const struct SkState *s,
                           double *min_eigenvalue_out,
                           int32_t *is_ppt_out);

// Frank-Wolfe distance to the separable set.
//
// # Safety
// `s` must be a live handle; `distance_out` may be NULL.
enum SkStatus sk_state_distance_to_separable(const struct SkState *s,
                                             uintptr_t iterations,
                                             uint64_t seed,
                                             double *distance_out);

// Full analysis battery; see [`SkReport`].
//
// # Safety
// `s` must be a live handle and `report_out` a valid pointer.
enum SkStatus sk_state_analyze(const struct SkState *s,
                               uintptr_t iterations,
                               uint64_t seed,
                               struct SkReport *report_out);

// Wrap a Hermitian matrix as a witness on C^dA (x) C^dB.
//
// # Safety
// `matrix` must be a live handle and `out` a valid pointer.
enum SkStatus sk_witness_new(const struct SkMatrix *matrix,
                             uintptr_t d_a,
                             uintptr_t d_b,
                             struct SkWitness **out);

// # Safety
// `w` must come from this library and not have been freed.
void sk_witness_free(struct SkWitness *w);

// Numeric block-positivity verdict; `value_out` receives the search
// minimum (for BlockPositive) or the certified negative value.
//
// # Safety
// `w` must be a live handle; out-pointers may be NULL.
enum SkStatus sk_witness_check(const struct SkWitness *w,
                               uintptr_t restarts,
                               uint64_t seed,
                               enum SkVerdict *verdict_out,
                               double *value_out);

// Tr(H rho) and the detection flag.
//
// # Safety
// `w` and `s` must be live handles; out-pointers may be NULL.
enum SkStatus sk_witness_detect(const struct SkWitness *w,
                                const struct SkState *s,
                                double *value_out,
                                int32_t *detected_out);

// Convert a witness into its map (Choi form shares the matrix).
//
// # Safety
// `w` must be a live handle and `out` a valid pointer.
enum SkStatus sk_witness_to_map(const struct SkWitness *w, struct SkMap **out);

// Convert a Hermiticity-preserving map into its witness.
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum SkStatus sk_map_to_witness(const struct SkMap *m, struct SkWitness **out);

// Wrap a Choi matrix as a map M_dIn -> M_dOut.
//
// # Safety
// `matrix` must be a live handle and `out` a valid pointer.
enum SkStatus sk_map_new_from_choi(const struct SkMatrix *matrix,
                                   uintptr_t d_in,
                                   uintptr_t d_out,
                                   struct SkMap **out);

// The transposition map on M_d.
struct SkMap *sk_map_transposition(uintptr_t d);

// # Safety
// `m` must come from this library and not have been freed.
void sk_map_free(struct SkMap *m);

// Apply the map to a dIn x dIn matrix; writes a new matrix handle.
//
// # Safety
// `m` and `x` must be live handles and `out` a valid pointer.
enum SkStatus sk_map_apply(const struct SkMap *m, const struct SkMatrix *x, struct SkMatrix **out);

// Spectral complete-positivity test on the Choi matrix.
//
// # Safety
// `m` must be a live handle; out-pointers may be NULL.
enum SkStatus sk_map_is_completely_positive(const struct SkMap *m,
                                            double *min_eigenvalue_out,
                                            int32_t *is_cp_out);

// Numeric positivity verdict (restarts = 0 means the default budget).
//
// # Safety
// `m` must be a live handle; out-pointers may be NULL.
enum SkStatus sk_map_is_positive(const struct SkMap *m,
                                 uintptr_t restarts,
                                 uint64_t seed,
                                 enum SkVerdict *verdict_out,
                                 double *value_out);

// Numeric k-positivity verdict (restarts = 0 means the default).
//
// # Safety
// `m` must be a live handle; out-pointers may be NULL.
enum SkStatus sk_map_is_k_positive(const struct SkMap *m,
                                   uintptr_t k,
                                   uintptr_t restarts,
                                   uint64_t seed,
                                   enum SkVerdict *verdict_out,
                                   double *value_out);

// Run the Bell distance bound experiment.
//
// # Safety
// Out-pointers may be NULL.
enum SkStatus sk_bell_bound_check(uintptr_t samples,
                                  uint64_t seed,
                                  double *min_distance_out,
                                  int32_t *pass_out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SEPKIT_H */
