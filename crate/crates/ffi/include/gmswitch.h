#ifndef GMSWITCH_H
#define GMSWITCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible entry point.
 */
typedef enum GmStatus {
  GM_STATUS_OK = 0,
  /**
   * Invalid argument, e.g. `q` not a supported prime power.
   */
  GM_STATUS_PARAMETER = 1,
  /**
   * Valid arguments outside the operation's domain, e.g. `e < 2` for the twisted graph.
   */
  GM_STATUS_DOMAIN = 2,
  /**
   * A size or enumeration budget was exceeded.
   */
  GM_STATUS_BUDGET = 3,
  /**
   * The switching hypothesis failed.
   */
  GM_STATUS_HYPOTHESIS = 4,
  /**
   * A construction contradicted its own definition.
   */
  GM_STATUS_CONSISTENCY = 5,
  GM_STATUS_PARSE = 6,
  GM_STATUS_IO = 7,
  GM_STATUS_NULL_POINTER = 8,
  /**
   * A Rust panic was caught at the boundary.
   */
  GM_STATUS_PANIC = 9,
} GmStatus;

/**
 * The result of the certification pipeline.
 */
typedef struct GmCertificate GmCertificate;

/**
 * A simple undirected graph.
 */
typedef struct GmGraph GmGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *gm_last_error(void);

/**
 * `J_q(2e+1, e+1)` with vertices in canonical subspace order.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum GmStatus gm_grassmann(uint32_t q, size_t e, struct GmGraph **out);

/**
 * The twisted Grassmann graph; needs `e >= 2`.
 *
 * # Safety
 * As [`gm_grassmann`].
 */
enum GmStatus gm_twisted(uint32_t q, size_t e, struct GmGraph **out);

/**
 * `J_q(2e+1, e+1)` switched with the symplectic polarity partition; needs `e >= 2`.
 *
 * # Safety
 * As [`gm_grassmann`].
 */
enum GmStatus gm_switched(uint32_t q, size_t e, struct GmGraph **out);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t gm_graph_vertex_count(const struct GmGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum GmStatus gm_graph_is_adjacent(const struct GmGraph *g, size_t i, size_t j, bool *out);

/**
 * graph6 encoding (with trailing newline). Free the string with [`gm_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum GmStatus gm_graph_to_graph6(const struct GmGraph *g, char **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum GmStatus gm_graph_from_graph6(const char *text, struct GmGraph **out);

/**
 * Exact characteristic polynomial comparison. `budget` bounds the order.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum GmStatus gm_cospectral(const struct GmGraph *a,
                            const struct GmGraph *b,
                            size_t budget,
                            bool *out);

/**
 * Runs the full pipeline. A certificate with failed checks is still returned
 * with status `Ok`; inspect it with [`gm_certificate_passed`].
 *
 * # Safety
 * `out` must be writable.
 */
enum GmStatus gm_certify(uint32_t q,
                         size_t e,
                         bool skip_charpoly,
                         size_t spectral_budget,
                         struct GmCertificate **out);

/**
 * False for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
bool gm_certificate_passed(const struct GmCertificate *c);

/**
 * Pretty-printed certificate JSON. Free with [`gm_string_free`].
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum GmStatus gm_certificate_to_json(const struct GmCertificate *c, char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void gm_graph_free(struct GmGraph *g);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void gm_certificate_free(struct GmCertificate *c);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void gm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMSWITCH_H */
