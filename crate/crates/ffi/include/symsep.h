#ifndef SYMSEP_H
#define SYMSEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum SymsepStatus {
  SYMSEP_STATUS_OK = 0,
  SYMSEP_STATUS_NULL_POINTER = 1,
  SYMSEP_STATUS_INVALID_ARGUMENT = 2,
  SYMSEP_STATUS_PARSE = 3,
  SYMSEP_STATUS_VALIDATION = 4,
  SYMSEP_STATUS_NOT_SYMMETRIC = 5,
  SYMSEP_STATUS_NOT_PERMUTATIONALLY_INVARIANT = 6,
  SYMSEP_STATUS_DIMENSION_TOO_LARGE = 7,
  SYMSEP_STATUS_DIMENSION_MISMATCH = 8,
  SYMSEP_STATUS_BAD_PARTITION = 9,
  SYMSEP_STATUS_NUMERICAL = 10,
  SYMSEP_STATUS_UNSUPPORTED = 11,
  SYMSEP_STATUS_BUFFER_TOO_SMALL = 12,
  SYMSEP_STATUS_IO = 13,
  SYMSEP_STATUS_PANIC = 14,
} SymsepStatus;

// Opaque state handle, bipartite or multi-qubit.
typedef struct SymsepState SymsepState;

// Opaque witness handle.
typedef struct SymsepWitness SymsepWitness;

// Criteria values for a bipartite state. Verdict fields are 1 when the
// criterion detects entanglement.
typedef struct SymsepCriteria {
  double ppt_min_eigenvalue;
  double ccnr_trace_norm;
  double observable_min_value;
  double eta_min_eigenvalue;
  double corr_min_eigenvalue;
  double covariance_lhs;
  double covariance_rhs;
  uint8_t ppt_violated;
  uint8_t ccnr_violated;
  uint8_t observable_violated;
  uint8_t eta_violated;
  uint8_t corr_violated;
  uint8_t covariance_violated;
  uint8_t symmetric;
  uint8_t permutationally_invariant;
} SymsepCriteria;

// PPT and CCNR values across one multi-qubit bipartition.
typedef struct SymsepBipartition {
  double pt_min_eigenvalue;
  double realigned_trace_norm;
} SymsepBipartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *symsep_version(void);

// Static description of a status code, or of an unknown code.
const char *symsep_status_message(int32_t status);

// Copies the calling thread's last error message into `buf`.
//
// # Safety
// `buf` must be valid for `len` bytes or null; `needed` may be null.
enum SymsepStatus symsep_last_error(char *buf, size_t len, size_t *needed);

// Parses a state from JSON and validates it at `tol`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SymsepStatus symsep_state_from_json(const char *json, double tol, struct SymsepState **out);

// The built-in 3x3 PPT entangled state.
//
// # Safety
// `out` must be a valid pointer.
enum SymsepStatus symsep_state_rho33(struct SymsepState **out);

// Smolin state on `2n` qubits.
//
// # Safety
// `out` must be a valid pointer.
enum SymsepStatus symsep_state_smolin(size_t n, struct SymsepState **out);

// Random symmetric state of local dimension `d`.
//
// # Safety
// `out` must be a valid pointer.
enum SymsepStatus symsep_state_random_symmetric(size_t d, uint64_t seed, struct SymsepState **out);

// Random separable symmetric state with `terms` product terms.
//
// # Safety
// `out` must be a valid pointer.
enum SymsepStatus symsep_state_random_separable(size_t d,
                                                size_t terms,
                                                uint64_t seed,
                                                struct SymsepState **out);

// Releases a state. Null is ignored.
//
// # Safety
// `s` must come from a `symsep_state_*` constructor and not be freed twice.
void symsep_state_free(struct SymsepState *s);

// Local dimension of a bipartite state, or the qubit count of a multi-qubit
// one. `is_multiqubit` receives 0 or 1.
//
// # Safety
// All pointers must be valid.
enum SymsepStatus symsep_state_shape(const struct SymsepState *s,
                                     size_t *size,
                                     uint8_t *is_multiqubit);

// Serializes a state to JSON as a NUL-terminated string.
//
// # Safety
// `s` must be valid; `buf` valid for `len` bytes or null.
enum SymsepStatus symsep_state_to_json(const struct SymsepState *s,
                                       char *buf,
                                       size_t len,
                                       size_t *needed);

// Runs the six separability criteria on a bipartite state.
//
// # Safety
// `s` and `out` must be valid.
enum SymsepStatus symsep_criteria(const struct SymsepState *s,
                                  double tol,
                                  struct SymsepCriteria *out);

// Writes the `d*d` Schmidt coefficients of a permutationally invariant
// state, largest first. `count` always receives `d*d`.
//
// # Safety
// `s` must be valid; `buf` valid for `len` doubles or null.
enum SymsepStatus symsep_schmidt_coefficients(const struct SymsepState *s,
                                              double *buf,
                                              size_t len,
                                              size_t *count);

// Builds the Schmidt witness of a symmetric state keeping the `keep`
// largest coefficients (0 selects the default).
//
// # Safety
// `s` and `out` must be valid.
enum SymsepStatus symsep_witness_build(const struct SymsepState *s,
                                       size_t keep,
                                       size_t restarts,
                                       uint64_t seed,
                                       struct SymsepWitness **out);

// The reference witness for the built-in 3x3 state.
//
// # Safety
// `out` must be a valid pointer.
enum SymsepStatus symsep_witness_rho33(struct SymsepWitness **out);

// Separable bound of a witness.
//
// # Safety
// Both pointers must be valid.
enum SymsepStatus symsep_witness_constant(const struct SymsepWitness *w, double *out);

// Witness value on a bipartite state; negative means entangled.
//
// # Safety
// All pointers must be valid.
enum SymsepStatus symsep_witness_evaluate(const struct SymsepWitness *w,
                                          const struct SymsepState *s,
                                          double *out);

// Releases a witness. Null is ignored.
//
// # Safety
// `w` must come from a `symsep_witness_*` constructor and not be freed
// twice.
void symsep_witness_free(struct SymsepWitness *w);

// PPT and CCNR values of a multi-qubit state across the cut that puts the
// qubits in `left` on one side.
//
// # Safety
// `s` and `out` must be valid; `left` valid for `n_left` entries.
enum SymsepStatus symsep_bipartition(const struct SymsepState *s,
                                     const size_t *left,
                                     size_t n_left,
                                     struct SymsepBipartition *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMSEP_H */
