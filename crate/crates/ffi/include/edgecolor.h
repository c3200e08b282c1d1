#ifndef EDGECOLOR_H
#define EDGECOLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of every `ec_*` call.
 */
typedef enum EcStatus {
  EC_STATUS_OK = 0,
  EC_STATUS_NULL_POINTER = 1,
  EC_STATUS_PARSE = 2,
  EC_STATUS_INVALID_ARGUMENT = 3,
  /*
   The palette is too small and escalation was off; the result still
   carries the certificate when one exists.
   */
  EC_STATUS_INFEASIBLE = 4,
  EC_STATUS_TOO_LARGE = 5,
  EC_STATUS_INVALID_COLORING = 6,
  EC_STATUS_ENGINE = 7,
  EC_STATUS_PANIC = 8,
} EcStatus;

/*
 Opaque multigraph.
 */
typedef struct EcGraph EcGraph;

/*
 Opaque outcome of a coloring run.
 */
typedef struct EcResult EcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *ec_last_error(void);

/*
 Parses the `p edge n m` / `e u v` text format (1-based ids in the text).

 # Safety
 `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum EcStatus ec_graph_parse(const char *text, struct EcGraph **out);

/*
 Builds a graph on `n` vertices from `m` pairs stored as `ends[2i], ends[2i+1]` (0-based).

 # Safety
 `ends` must point to `2 * m` readable values (or be null when `m` is 0).
 */
enum EcStatus ec_graph_from_edges(uint32_t n,
                                  const uint32_t *ends,
                                  uint32_t m,
                                  struct EcGraph **out);

/*
 # Safety
 `g` must come from `ec_graph_parse`/`ec_graph_from_edges` and not be used afterwards.
 */
void ec_graph_free(struct EcGraph *g);

/*
 # Safety
 `g` must be a live graph handle or null.
 */
uint32_t ec_graph_vertex_count(const struct EcGraph *g);

/*
 # Safety
 `g` must be a live graph handle or null.
 */
uint32_t ec_graph_edge_count(const struct EcGraph *g);

/*
 # Safety
 `g` must be a live graph handle or null.
 */
uint32_t ec_graph_max_degree(const struct EcGraph *g);

/*
 Colors the graph. `initial_k = 0` starts at Δ+1. With `escalate = 0` a
 too-small palette yields `Infeasible` and a result holding the certificate.

 # Safety
 `g` must be a live graph handle and `out` a writable pointer.
 */
enum EcStatus ec_color(const struct EcGraph *g,
                       uint32_t initial_k,
                       int32_t escalate,
                       struct EcResult **out);

/*
 # Safety
 `r` must come from `ec_color` and not be used afterwards.
 */
void ec_result_free(struct EcResult *r);

/*
 Palette size used, or the failed palette size for an infeasible result.

 # Safety
 `r` must be a live result handle or null.
 */
uint32_t ec_result_k(const struct EcResult *r);

/*
 # Safety
 `r` must be a live result handle or null.
 */
uint64_t ec_result_swaps(const struct EcResult *r);

/*
 Copies edge colors into `buf` (capacity `len`); returns the edge count,
 which is 0 for an infeasible result.

 # Safety
 `r` must be a live result handle; `buf` must hold `len` values or be null.
 */
uint32_t ec_result_colors(const struct EcResult *r, uint32_t *buf, uint32_t len);

/*
 # Safety
 `r` must be a live result handle or null.
 */
uint32_t ec_result_certificate_count(const struct EcResult *r);

/*
 Summary of certificate `i`: the failed palette, induced edge count, the
 density bound it proves, and its vertex count.

 # Safety
 `r` must be a live result handle; the out pointers must be writable or null.
 */
enum EcStatus ec_result_certificate(const struct EcResult *r,
                                    uint32_t i,
                                    uint32_t *k_failed,
                                    uint32_t *edge_count,
                                    uint32_t *bound,
                                    uint32_t *vertex_count);

/*
 Copies the vertices of certificate `i` into `buf`; returns how many it has.

 # Safety
 `r` must be a live result handle; `buf` must hold `len` values or be null.
 */
uint32_t ec_result_certificate_vertices(const struct EcResult *r,
                                        uint32_t i,
                                        uint32_t *buf,
                                        uint32_t len);

/*
 Checks that `colors` (one per edge, 0 for uncolored) is a proper total `k`-coloring.

 # Safety
 `g` must be a live graph handle and `colors` must hold `len` values.
 */
enum EcStatus ec_verify(const struct EcGraph *g, const uint32_t *colors, uint32_t len, uint32_t k);

/*
 Exact density Γ by subset enumeration (at most 20 vertices).

 # Safety
 `g` must be a live graph handle and `out` writable.
 */
enum EcStatus ec_gamma(const struct EcGraph *g, uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDGECOLOR_H */
