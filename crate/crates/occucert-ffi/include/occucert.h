#ifndef OCCUCERT_H
#define OCCUCERT_H

/* Generated by cbindgen. Do not edit by hand; regenerate via cargo build. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this interface.
 */
typedef enum OccStatus {
  OCC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  OCC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  OCC_STATUS_UTF8 = 2,
  OCC_STATUS_INVALID_GRAPH = 3,
  OCC_STATUS_INVALID_FUGACITY = 4,
  OCC_STATUS_INVALID_DEMAND = 5,
  /**
   * A component or basis enumeration exceeded the size cap.
   */
  OCC_STATUS_CAP_EXCEEDED = 6,
  /**
   * A floating-point argument was outside the function's domain.
   */
  OCC_STATUS_DOMAIN_ERROR = 7,
  /**
   * Internal failure; inputs were accepted but the computation gave up.
   */
  OCC_STATUS_COMPUTATION = 8,
} OccStatus;

/**
 * Opaque graph handle.
 */
typedef struct OccGraph OccGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph from a flat array of `edge_count` vertex pairs
 * `[u0, v0, u1, v1, ...]`. Vertices are `0..n`; parallel edges collapse,
 * self-loops are rejected. On success writes a handle that must be
 * released with `occ_graph_free`.
 */
enum OccStatus occ_graph_new(uint32_t n,
                             const uint32_t *edges,
                             size_t edge_count,
                             struct OccGraph **out);

/**
 * Releases a handle from `occ_graph_new`. Null is a no-op.
 */
void occ_graph_free(struct OccGraph *g);

/**
 * Number of vertices, or 0 for a null handle.
 */
uint32_t occ_graph_vertex_count(const struct OccGraph *g);

/**
 * Number of edges, or 0 for a null handle.
 */
uint32_t occ_graph_edge_count(const struct OccGraph *g);

/**
 * Maximum degree, or 0 for a null handle.
 */
uint32_t occ_graph_max_degree(const struct OccGraph *g);

/**
 * Average occupied-set size under the hard-core measure, written as an
 * exact rational string. `cap` limits the per-component enumeration size.
 */
enum OccStatus occ_expected_size_str(const struct OccGraph *g,
                                     const char *lambda,
                                     size_t cap,
                                     char **out);

/**
 * Per-vertex degree-weighted lower bound on the average occupied-set
 * size, written as an exact rational string. Valid for any positive
 * fugacities; it is a true lower bound whenever every fugacity is below
 * one over the maximum degree.
 */
enum OccStatus occ_degree_bound_str(const struct OccGraph *g, const char *lambda, char **out);

/**
 * Full analysis report as pretty-printed JSON: degrees, density
 * statistics, exact partition function summary, bound, and gap.
 */
enum OccStatus occ_analyze_json(const struct OccGraph *g,
                                const char *lambda,
                                size_t cap,
                                char **out);

/**
 * Certification report as pretty-printed JSON. The `certificate` field is
 * JSON null when the dual feasibility conditions fail; that is a verdict,
 * not an error.
 */
enum OccStatus occ_certify_json(const struct OccGraph *g,
                                const char *lambda,
                                size_t cap,
                                char **out);

/**
 * Writes whether an exact dual certificate exists at these fugacities.
 * A failed feasibility condition yields `false` with `OCC_STATUS_OK`.
 */
enum OccStatus occ_has_certificate(const struct OccGraph *g, const char *lambda, bool *out);

/**
 * Runs the weight process for the demand vector `q` (same text form as
 * `lambda`) and writes the membership report as pretty-printed JSON.
 * `strict` re-verifies the local occupancy inequality on every induced
 * subgraph the process visits.
 */
enum OccStatus occ_demand_json(const struct OccGraph *g,
                               const char *lambda,
                               const char *q,
                               size_t cap,
                               bool strict,
                               char **out);

/**
 * The three-vertex star instance separating the linear program from the
 * degree-weighted bound, as pretty-printed JSON.
 */
enum OccStatus occ_counterexample_json(size_t cap, char **out);

/**
 * The two threshold constants with solver residuals, as pretty-printed
 * JSON.
 */
enum OccStatus occ_constants_json(char **out);

/**
 * Principal branch of the Lambert W function on (0, inf).
 */
enum OccStatus occ_lambert_w(double x, double *out);

/**
 * Static name for a status code; never free this pointer.
 */
const char *occ_status_name(enum OccStatus status);

/**
 * Releases a string returned by this library. Null is a no-op.
 */
void occ_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCCUCERT_H */
