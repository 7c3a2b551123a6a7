/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CONDMED_H
#define CONDMED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_UTF8 = 2,
  CM_STATUS_INVALID_INSTANCE = 3,
  CM_STATUS_INVALID_ARGUMENT = 4,
  CM_STATUS_UNKNOWN_MECHANISM = 5,
  CM_STATUS_PANIC = 6,
} CmStatus;

typedef enum CmCaseTag {
  CM_CASE_TAG_CASE1_NO_COLLISION = 0,
  CM_CASE_TAG_CASE1_COLLISION = 1,
  CM_CASE_TAG_CASE2 = 2,
  CM_CASE_TAG_BASELINE_INTERSECT = 3,
  CM_CASE_TAG_BASELINE_DISJOINT = 4,
  CM_CASE_TAG_STRAWMAN = 5,
} CmCaseTag;

typedef enum CmObjective {
  CM_OBJECTIVE_SOCIAL = 0,
  CM_OBJECTIVE_MAX = 1,
} CmObjective;

typedef enum CmRatioFlag {
  CM_RATIO_FLAG_OK = 0,
  CM_RATIO_FLAG_UNIT = 1,
  CM_RATIO_FLAG_VIOLATION = 2,
} CmRatioFlag;

// Opaque handle to a validated instance.
typedef struct CmInstance CmInstance;

typedef struct CmSolution {
  double y1;
  double y2;
} CmSolution;

typedef struct CmOutcome {
  struct CmSolution solution;
  enum CmCaseTag case_tag;
  bool swapped;
} CmOutcome;

// `ratio` is NaN unless `flag` is `CM_RATIO_FLAG_OK`.
typedef struct CmRatio {
  double mech_cost;
  double opt_cost;
  double ratio;
  enum CmRatioFlag flag;
  struct CmSolution optimal;
} CmRatio;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last non-OK status on this thread. Valid until the next
// call into this library from the same thread. Never null.
const char *cm_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *cm_version(void);

// Parses an instance from its JSON form
// `{"candidates": [...], "agents": [{"x": .., "f1": .., "f2": ..}, ...]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum CmStatus cm_instance_from_json(const char *json, struct CmInstance **out);

// Builds an instance from parallel arrays: `n_candidates` coordinates, and
// for each of `n_agents` agents a position and two approval flags.
//
// # Safety
// Each array pointer must reference at least the stated number of elements.
enum CmStatus cm_instance_new(const double *candidates,
                              size_t n_candidates,
                              const double *positions,
                              const bool *approves_f1,
                              const bool *approves_f2,
                              size_t n_agents,
                              struct CmInstance **out);

// Releases an instance. Null is ignored.
//
// # Safety
// `instance` must come from this library and not be used afterwards.
void cm_instance_free(struct CmInstance *instance);

// Number of agents, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t cm_instance_agent_count(const struct CmInstance *instance);

// Number of candidate locations, or 0 for a null handle.
//
// # Safety
// `instance` must be null or a live handle.
size_t cm_instance_candidate_count(const struct CmInstance *instance);

// Runs a mechanism (`conditional-median`, `zhao-sc`, `zhao-mc`,
// `mean-strawman`).
//
// # Safety
// Pointers must be valid; `mechanism` NUL-terminated.
enum CmStatus cm_run_mechanism(const struct CmInstance *instance,
                               const char *mechanism,
                               struct CmOutcome *out);

// Cost of one agent for the solution `(y1, y2)`.
//
// # Safety
// Pointers must be valid.
enum CmStatus cm_agent_cost(const struct CmInstance *instance,
                            size_t agent_index,
                            double y1,
                            double y2,
                            double *out);

// Social or max cost of the solution `(y1, y2)`.
//
// # Safety
// Pointers must be valid.
enum CmStatus cm_objective_value(const struct CmInstance *instance,
                                 enum CmObjective objective,
                                 double y1,
                                 double y2,
                                 double *out);

// Exact optimum by enumeration of all candidate pairs.
//
// # Safety
// Pointers must be valid.
enum CmStatus cm_optimal_solution(const struct CmInstance *instance,
                                  enum CmObjective objective,
                                  struct CmSolution *out_solution,
                                  double *out_cost);

// Approximation ratio of a mechanism against the exact optimum.
//
// # Safety
// Pointers must be valid; `mechanism` NUL-terminated.
enum CmStatus cm_approximation_ratio(const struct CmInstance *instance,
                                     const char *mechanism,
                                     enum CmObjective objective,
                                     struct CmRatio *out);

// Exhaustive single-agent deviation search. Writes the number of
// profitable misreports found (0 means strategyproof on this instance) and
// the number of probes evaluated. `out_probes` may be null.
//
// # Safety
// Pointers must be valid; `mechanism` NUL-terminated.
enum CmStatus cm_verify_strategyproof(const struct CmInstance *instance,
                                      const char *mechanism,
                                      size_t *out_deviations,
                                      size_t *out_probes);

// Same search as `cm_verify_strategyproof`, returning the full report as
// JSON (`{"deviations": [{"agent", "true_cost", "report", "new_cost"}],
// "probe_count"}`). Free the string with `cm_string_free`.
//
// # Safety
// Pointers must be valid; `mechanism` NUL-terminated.
enum CmStatus cm_verify_strategyproof_json(const struct CmInstance *instance,
                                           const char *mechanism,
                                           char **out_json);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void cm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONDMED_H */
