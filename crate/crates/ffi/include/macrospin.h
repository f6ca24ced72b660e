#ifndef MACROSPIN_H
#define MACROSPIN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of every call.
 */
typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_QUANTUM_NUMBER = 2,
  MS_STATUS_DOMAIN = 3,
  MS_STATUS_DENSE_LIMIT_EXCEEDED = 4,
  MS_STATUS_ENSEMBLE_MISMATCH = 5,
  MS_STATUS_REPRESENTATION_MISMATCH = 6,
  MS_STATUS_INVALID_DIRECTION = 7,
  MS_STATUS_INVALID_OUTCOME = 8,
  MS_STATUS_ASSIGNMENT_LIMIT_EXCEEDED = 9,
  MS_STATUS_INVALID_SCENARIO = 10,
  MS_STATUS_INCONSISTENT_MARGINALS = 11,
  MS_STATUS_PARSE = 12,
  MS_STATUS_BUFFER_TOO_SMALL = 13,
  MS_STATUS_INVALID_UTF8 = 14,
  MS_STATUS_PANIC = 15,
} MsStatus;

/**
 * N spin-s particles.
 */
typedef struct MsEnsemble MsEnsemble;

/**
 * An operator on an ensemble, dense or block-diagonal.
 */
typedef struct MsOperator MsOperator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ms_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void ms_string_free(char *text);

/**
 * Legendre polynomial `P_l(x)` for `x` in `[-1, 1]`.
 */
enum MsStatus ms_legendre(uint32_t l, double x, double *result);

/**
 * Wigner small-d element `d^j_{m,m'}(beta)`.
 */
enum MsStatus ms_wigner_d_element(int32_t twice_j,
                                  int32_t twice_m,
                                  int32_t twice_m_prime,
                                  double beta,
                                  double *result);

/**
 * Full `(2j+1) x (2j+1)` matrix, row-major, labels descending from `j`.
 * `capacity` is the number of doubles `matrix` can hold.
 */
enum MsStatus ms_wigner_d_matrix(int32_t twice_j, double beta, double *matrix, size_t capacity);

/**
 * Creates an ensemble of `spin_count` particles of spin `twice_spin / 2`.
 */
enum MsStatus ms_ensemble_new(uint32_t spin_count,
                              int32_t twice_spin,
                              struct MsEnsemble **ensemble);

void ms_ensemble_free(struct MsEnsemble *ensemble);

/**
 * Caps the tensor-product dimension used by dense constructions.
 */
enum MsStatus ms_ensemble_set_dense_limit(struct MsEnsemble *ensemble, size_t limit);

/**
 * `(2s+1)^N` as a double (exact below 2^53).
 */
enum MsStatus ms_ensemble_dimension(const struct MsEnsemble *ensemble, double *dimension);

/**
 * Number of copies of total spin `twice_j / 2`; `Domain` if it exceeds 2^64 - 1.
 */
enum MsStatus ms_ensemble_multiplicity(const struct MsEnsemble *ensemble,
                                       int32_t twice_j,
                                       uint64_t *multiplicity);

/**
 * Block-diagonal projector onto magnetization `twice_m / 2` along z.
 */
enum MsStatus ms_block_projector(const struct MsEnsemble *ensemble,
                                 int32_t twice_m,
                                 struct MsOperator **operator_);

/**
 * Block-diagonal projector onto magnetization `twice_m / 2` along the
 * direction at angle `beta` from z in the XZ plane.
 */
enum MsStatus ms_rotated_block_projector(const struct MsEnsemble *ensemble,
                                         int32_t twice_m,
                                         double beta,
                                         struct MsOperator **operator_);

/**
 * Dense tensor-product projector along `direction` (three doubles, unit
 * norm to 1e-12).
 */
enum MsStatus ms_dense_projector(const struct MsEnsemble *ensemble,
                                 const double *direction,
                                 int32_t twice_m,
                                 struct MsOperator **operator_);

void ms_operator_free(struct MsOperator *operator_);

/**
 * `[a, b]`; both operands must share ensemble and representation.
 */
enum MsStatus ms_operator_commutator(const struct MsOperator *a,
                                     const struct MsOperator *b,
                                     struct MsOperator **result);

enum MsStatus ms_operator_frobenius_norm(const struct MsOperator *operator_, double *norm);

enum MsStatus ms_operator_trace(const struct MsOperator *operator_, double *trace);

/**
 * `Gamma^j_{k,k'}` for the commutator of `P_m` and the rotated `P_n`.
 */
enum MsStatus ms_gamma_element(int32_t twice_j,
                               int32_t twice_m,
                               int32_t twice_n,
                               int32_t twice_k,
                               int32_t twice_k_prime,
                               double beta,
                               double *result);

/**
 * Searches `twice_j_values` for a witness of non-commutation. `found` is
 * set to 1 with `twice_j`, `twice_k` and `product` filled, or to 0.
 */
enum MsStatus ms_witness(int32_t twice_m,
                         int32_t twice_n,
                         double beta,
                         const int32_t *twice_j_values,
                         size_t count,
                         int32_t *found,
                         int32_t *twice_j,
                         int32_t *twice_k,
                         double *product);

/**
 * `norms[i] = ||[P_m(z), P_{m'}(n(betas[i]))]||_F` via the block path.
 */
enum MsStatus ms_theorem_scan(const struct MsEnsemble *ensemble,
                              int32_t twice_m,
                              int32_t twice_m_prime,
                              const double *betas,
                              size_t count,
                              double *norms);

/**
 * Compatibility graph in DOT for `count` directions packed as `x, y, z`
 * triples (each normalized if within 1e-6 of unit norm).
 */
enum MsStatus ms_context_graph_dot(const struct MsEnsemble *ensemble,
                                   const double *directions,
                                   size_t count,
                                   double tolerance,
                                   char **dot);

/**
 * Joint-distribution feasibility for a scenario document; the result
 * (verdict, method and certificate) is returned as JSON.
 */
enum MsStatus ms_feasibility_json(const char *scenario_json, double tolerance, char **result_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MACROSPIN_H */
