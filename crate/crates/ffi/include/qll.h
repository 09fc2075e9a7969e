#ifndef QLL_H
#define QLL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. The first three values match the
 * command-line exit codes.
 */
typedef enum QllStatus {
  QLL_STATUS_OK = 0,
  /**
   * A contract or precondition of the computation failed.
   */
  QLL_STATUS_VIOLATION = 1,
  /**
   * Invalid configuration, descriptor or parameter.
   */
  QLL_STATUS_CONFIG = 2,
  QLL_STATUS_NULL_ARGUMENT = 3,
  QLL_STATUS_INVALID_UTF8 = 4,
  /**
   * Internal panic caught at the boundary.
   */
  QLL_STATUS_PANIC = 5,
} QllStatus;

typedef struct QllFFunction QllFFunction;

typedef struct QllGraph QllGraph;

typedef struct QllInteraction QllInteraction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *qll_version(void);

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library.
 */
const char *qll_last_error_message(void);

/**
 * Releases a string returned through an out-parameter. Null is ignored.
 */
void qll_string_free(char *s);

/**
 * Graph from a lattice descriptor such as `{"kind": "chain", "n": 8}`.
 */
enum QllStatus qll_graph_from_json(const char *json, struct QllGraph **out);

/**
 * Number of sites, 0 for a null handle.
 */
size_t qll_graph_n_sites(const struct QllGraph *g);

void qll_graph_free(struct QllGraph *g);

/**
 * F-function from a descriptor such as
 * `{"family": "weighted", "a": 1, "theta": 1, "nu": 1, "eps": 1}`.
 */
enum QllStatus qll_ffunction_from_json(const char *json, struct QllFFunction **out);

void qll_ffunction_free(struct QllFFunction *f);

/**
 * `‖F‖₁` and `C_F` of `f` on `g`.
 */
enum QllStatus qll_ffunction_certify(const struct QllFFunction *f,
                                     const struct QllGraph *g,
                                     double *norm1,
                                     double *c_f);

/**
 * Preset interaction on `g` from a model descriptor such as
 * `{"model": "tfim", "J": 1, "g": 1}`.
 */
enum QllStatus qll_interaction_from_json(const struct QllGraph *g,
                                         const char *json,
                                         struct QllInteraction **out);

void qll_interaction_free(struct QllInteraction *phi);

/**
 * `‖Φ‖_F` on `g`.
 */
enum QllStatus qll_interaction_norm_f(const struct QllInteraction *phi,
                                      const struct QllFFunction *f,
                                      const struct QllGraph *g,
                                      double *out);

/**
 * Ground energy and spectral gap of `H_Λ` with Λ the whole graph.
 */
enum QllStatus qll_ground_gap(const struct QllInteraction *phi,
                              const struct QllGraph *g,
                              double *e0,
                              double *gap);

/**
 * `‖[τ_t(P_a), Q_b]‖` on the whole graph for single-site Paulis given as
 * `'X'`, `'Y'` or `'Z'`.
 */
enum QllStatus qll_commutator_norm(const struct QllInteraction *phi,
                                   const struct QllGraph *g,
                                   size_t site_a,
                                   char pauli_a,
                                   size_t site_b,
                                   char pauli_b,
                                   double t,
                                   double *out);

/**
 * Runs one command-line command (`"lr-scan"`, `"flow"`, ...) on a scenario
 * file. The run report JSON is returned through `report` (free it with
 * [`qll_string_free`]); the status mirrors the report's exit code.
 * `csv_path` may be null and `jobs = 0` uses every core.
 */
enum QllStatus qll_run(const char *command,
                       const char *config_path,
                       const char *out_path,
                       const char *csv_path,
                       size_t jobs,
                       char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLL_H */
