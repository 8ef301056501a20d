/* C interface to the netcov library. All functions are thread safe as long
 * as handles are not shared between threads without synchronisation.
 * Strings returned through char** out-parameters are owned by the caller
 * and released with netcov_string_free. */
#ifndef NETCOV_NETCOV_H
#define NETCOV_NETCOV_H

#include <stdint.h>

#if defined(NETCOV_BUILDING_LIBRARY)
#define NETCOV_API __attribute__((visibility("default")))
#else
#define NETCOV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  NETCOV_OK = 0,
  NETCOV_ERR_PARSE = 1,
  NETCOV_ERR_IO = 2,
  NETCOV_ERR_INVALID_ARGUMENT = 3,
  NETCOV_ERR_INVALID_INPUT = 4,
  NETCOV_ERR_DIMENSION = 5,
  NETCOV_ERR_INTERNAL = 6
} netcov_status;

typedef enum {
  NETCOV_COMPATIBLE = 0,
  NETCOV_INCOMPATIBLE = 1,
  NETCOV_INCONCLUSIVE = 2
} netcov_verdict_kind;

typedef struct netcov_topology netcov_topology;
typedef struct netcov_distribution netcov_distribution;
typedef struct netcov_verdict netcov_verdict;

/* Message of the last failing call on this thread; never NULL. */
NETCOV_API const char* netcov_last_error(void);
NETCOV_API void netcov_string_free(char* s);

NETCOV_API netcov_status netcov_topology_parse(const char* json, netcov_topology** out);
NETCOV_API netcov_status netcov_topology_load(const char* path, netcov_topology** out);
/* "triangle", "star-3", "ring-4", "all-bipartite-4", "all-3-partite-5", ... */
NETCOV_API netcov_status netcov_topology_builtin(const char* name, netcov_topology** out);
NETCOV_API netcov_status netcov_topology_to_json(const netcov_topology* t, char** out);
NETCOV_API void netcov_topology_free(netcov_topology* t);

NETCOV_API netcov_status netcov_distribution_parse(const char* json, netcov_distribution** out);
NETCOV_API netcov_status netcov_distribution_load(const char* path, netcov_distribution** out);
NETCOV_API netcov_status netcov_distribution_to_json(const netcov_distribution* d, char** out);
NETCOV_API void netcov_distribution_free(netcov_distribution* d);

/* Joint tables run the primal test, conditional ones the inputs test.
 * tau <= 0 selects the default margin. */
NETCOV_API netcov_status netcov_test(const netcov_distribution* d, const netcov_topology* t,
                                     double tau, netcov_verdict** out);
NETCOV_API netcov_verdict_kind netcov_verdict_get_kind(const netcov_verdict* v);
NETCOV_API double netcov_verdict_get_value(const netcov_verdict* v);
NETCOV_API netcov_status netcov_verdict_to_json(const netcov_verdict* v, int include_certificate,
                                                char** out);
NETCOV_API void netcov_verdict_free(netcov_verdict* v);

/* name: "ghz" or "w2n" (parties 3..16). */
NETCOV_API netcov_status netcov_witness_emit(const char* name, int parties, char** out_json);
/* Writes 1 to *valid when every constraint block is negative semidefinite
 * within tol, and the largest block eigenvalue to *violation. */
NETCOV_API netcov_status netcov_witness_validate(const char* witness_json, double tol, int* valid,
                                                 double* violation);
/* Tr(W C) with C built from the distribution in the witness's convention. */
NETCOV_API netcov_status netcov_witness_evaluate(const char* witness_json,
                                                 const netcov_distribution* d, double* value);

/* scenario_json: {"scenario": "ghz" | "singlet" | "w-state" | "pr-mixture" |
 * "random-realization", "visibility": v, "topology": ..., "seed": n, ...} */
NETCOV_API netcov_status netcov_simulate(const char* scenario_json, netcov_distribution** out);

/* name: "finner", "finner-opt", "entropic", "inflation". */
NETCOV_API netcov_status netcov_baseline(const char* name, const netcov_distribution* d,
                                         uint64_t seed, char** out_json, int* rejected);

/* Runs a scan described by spec_json and returns the CSV text. */
NETCOV_API netcov_status netcov_scan(const char* spec_json, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* NETCOV_NETCOV_H */
