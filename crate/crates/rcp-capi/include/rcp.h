/* C interface for the rcp domain-composition library. */

#ifndef RCP_CAPI_H
#define RCP_CAPI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum RcpStatus {
  RcpStatus_Ok = 0,
  RcpStatus_NullPointer = 1,
  RcpStatus_InvalidUtf8 = 2,
  RcpStatus_IoError = 3,
  RcpStatus_ParseError = 4,
  RcpStatus_InvalidArgument = 5,
  RcpStatus_NotFound = 6,
  RcpStatus_OutOfRange = 7,
  RcpStatus_BufferTooSmall = 8,
  RcpStatus_InternalError = 9,
} RcpStatus;

/**
 * Opaque undirected social graph.
 */
typedef struct RcpGraph RcpGraph;

/**
 * Opaque immutable list of node indices.
 */
typedef struct RcpNodeSet RcpNodeSet;

/**
 * Opaque whole-graph pipeline result: the supercore partition with
 * per-supercore backbone and domain sizes.
 */
typedef struct RcpSupercores RcpSupercores;

/**
 * Graph statistics mirroring the `stats` CLI output.
 */
typedef struct RcpGraphStats {
  uint64_t nodes;
  uint64_t links;
  double avg_degree;
  double clustering_coefficient;
} RcpGraphStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *rcp_status_message(enum RcpStatus status);

/**
 * Load an edge list from a file path.
 *
 * `mode`: 0 undirected, 1 mutual-only. On success writes a graph handle
 * that must be released with [`rcp_graph_free`].
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out_graph` must be a
 * valid writable pointer.
 */
enum RcpStatus rcp_graph_load_path(const char *path,
                                   uint32_t mode,
                                   uint32_t retain_isolated,
                                   struct RcpGraph **out_graph);

/**
 * Load an edge list from an in-memory buffer.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out_graph` must be valid.
 */
enum RcpStatus rcp_graph_load_bytes(const uint8_t *data,
                                    uintptr_t len,
                                    uint32_t mode,
                                    uint32_t retain_isolated,
                                    struct RcpGraph **out_graph);

/**
 * Release a graph handle. Null is tolerated.
 *
 * # Safety
 * `graph` must be null or a pointer returned by a load function, not yet
 * freed.
 */
void rcp_graph_free(struct RcpGraph *graph);

/**
 * # Safety
 * `graph` must be a live graph handle; `out` must be writable.
 */
enum RcpStatus rcp_graph_node_count(const struct RcpGraph *graph, uint64_t *out);

/**
 * # Safety
 * `graph` must be a live graph handle; `out` must be writable.
 */
enum RcpStatus rcp_graph_edge_count(const struct RcpGraph *graph, uint64_t *out);

/**
 * Node/link counts, average degree, average local clustering.
 *
 * # Safety
 * `graph` must be a live graph handle; `out` must be writable.
 */
enum RcpStatus rcp_graph_stats(const struct RcpGraph *graph, struct RcpGraphStats *out);

/**
 * Resolve an external label to its dense node index.
 *
 * # Safety
 * `graph` must be a live graph handle; `label` a valid NUL-terminated
 * string; `out` writable.
 */
enum RcpStatus rcp_graph_node_index(const struct RcpGraph *graph, const char *label, uint32_t *out);

/**
 * Copy a node's label into `buf` (NUL-terminated). `out_len` always
 * receives the required buffer size including the terminator.
 *
 * # Safety
 * `graph` must be a live graph handle; `buf` must hold `buf_len` writable
 * bytes; `out_len` must be writable.
 */
enum RcpStatus rcp_graph_node_label(const struct RcpGraph *graph,
                                    uint32_t node,
                                    char *buf,
                                    uintptr_t buf_len,
                                    uintptr_t *out_len);

/**
 * Number of common neighbors of two distinct nodes.
 *
 * # Safety
 * `graph` must be a live graph handle; `out` must be writable.
 */
enum RcpStatus rcp_graph_tie_strength(const struct RcpGraph *graph,
                                      uint32_t i,
                                      uint32_t j,
                                      uint32_t *out);

/**
 * Compose the largest policy-compliant backbone for one center.
 *
 * # Safety
 * `graph` must be a live graph handle; `out_set` must be writable. The
 * result must be released with [`rcp_node_set_free`].
 */
enum RcpStatus rcp_backbone_compose(const struct RcpGraph *graph,
                                    uint32_t alpha,
                                    uint32_t beta,
                                    uint32_t center,
                                    struct RcpNodeSet **out_set);

/**
 * Compose the complete domain (backbone plus friend circles) for one
 * center.
 *
 * # Safety
 * As [`rcp_backbone_compose`].
 */
enum RcpStatus rcp_domain_compose(const struct RcpGraph *graph,
                                  uint32_t alpha,
                                  uint32_t beta,
                                  uint32_t center,
                                  struct RcpNodeSet **out_set);

/**
 * # Safety
 * `set` must be a live node-set handle; `out` must be writable.
 */
enum RcpStatus rcp_node_set_len(const struct RcpNodeSet *set, uint64_t *out);

/**
 * # Safety
 * `set` must be a live node-set handle; `out` must be writable.
 */
enum RcpStatus rcp_node_set_get(const struct RcpNodeSet *set, uint64_t index, uint32_t *out);

/**
 * # Safety
 * `set` must be null or a pointer returned by a compose function, not yet
 * freed.
 */
void rcp_node_set_free(struct RcpNodeSet *set);

/**
 * Run the whole-graph pipeline. The handle owns its data and may outlive
 * the graph.
 *
 * # Safety
 * `graph` must be a live graph handle; `out` must be writable. The result
 * must be released with [`rcp_supercores_free`].
 */
enum RcpStatus rcp_supercores_compute(const struct RcpGraph *graph,
                                      uint32_t alpha,
                                      uint32_t beta,
                                      struct RcpSupercores **out);

/**
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_count(const struct RcpSupercores *sc, uint64_t *out);

/**
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_dag_edge_count(const struct RcpSupercores *sc, uint64_t *out);

/**
 * Supercore index owning `node`.
 *
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_of_node(const struct RcpSupercores *sc, uint32_t node, uint32_t *out);

/**
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_size(const struct RcpSupercores *sc,
                                   uint32_t supercore,
                                   uint64_t *out);

/**
 * Size of the largest compliant backbone shared by the supercore's nodes.
 *
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_backbone_size(const struct RcpSupercores *sc,
                                            uint32_t supercore,
                                            uint64_t *out);

/**
 * Size of the complete domain shared by the supercore's nodes.
 *
 * # Safety
 * `sc` must be a live supercores handle; `out` must be writable.
 */
enum RcpStatus rcp_supercores_domain_size(const struct RcpSupercores *sc,
                                          uint32_t supercore,
                                          uint64_t *out);

/**
 * # Safety
 * `sc` must be null or a pointer returned by [`rcp_supercores_compute`],
 * not yet freed.
 */
void rcp_supercores_free(struct RcpSupercores *sc);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCP_CAPI_H */
