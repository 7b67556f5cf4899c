#ifndef WEAKLABEL_H
#define WEAKLABEL_H

#include <stdbool.h>
#include <stddef.h>

typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_NULL_POINTER = 1,
  WL_STATUS_INVALID_UTF8 = 2,
  WL_STATUS_PARSE_ERROR = 3,
  WL_STATUS_NOT_VERIFIED = 4,
  WL_STATUS_AXIOMS_FAILED = 5,
  WL_STATUS_INVALID_ARGUMENT = 6,
  WL_STATUS_OUT_OF_RANGE = 7,
  WL_STATUS_PANIC = 8,
} WlStatus;

/**
 * The result of an enumeration, in canonical order.
 */
typedef struct WlCatalog WlCatalog;

/**
 * A collection of harmonic (multi)sets.
 */
typedef struct WlCollection WlCollection;

/**
 * A labeled graph or multigraph.
 */
typedef struct WlGraph WlGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the
 * next call into this library from the same thread.
 */
const char *wl_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void wl_string_free(char *s);

/**
 * Parses graph JSON: `{"n": .., "edges": [[a, b], ...]}`, or
 * `[[a, b, m], ...]` for multiplicities.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum WlStatus wl_graph_from_json(const char *json, struct WlGraph **out);

/**
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_graph_to_json(const struct WlGraph *graph, char **out);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t wl_graph_vertex_count(const struct WlGraph *graph);

/**
 * Writes whether every non-leaf balances.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_graph_verify(const struct WlGraph *graph, bool *out);

/**
 * # Safety
 * `graph` must be null or a handle not yet freed.
 */
void wl_graph_free(struct WlGraph *graph);

/**
 * Parses collection notation such as `"123;02346;345"` or `"0^6,1,2,3,4"`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum WlStatus wl_collection_parse(const char *text, struct WlCollection **out);

/**
 * Canonical notation of a collection.
 *
 * # Safety
 * `collection` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_collection_format(const struct WlCollection *collection, char **out);

/**
 * # Safety
 * `collection` must be null or a handle not yet freed.
 */
void wl_collection_free(struct WlCollection *collection);

/**
 * Closed neighborhoods of the non-leaves of a weakly labeled graph.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_extract(const struct WlGraph *graph, struct WlCollection **out);

/**
 * The connected graph encoded by a collection.
 *
 * # Safety
 * `collection` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_build(const struct WlCollection *collection, struct WlGraph **out);

/**
 * Every connected weakly labeled simple graph on `n` vertices. `threads`
 * of 0 uses the default pool; the result does not depend on it.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum WlStatus wl_enumerate(size_t n, size_t threads, struct WlCatalog **out);

/**
 * Number of entries, or 0 for a null handle.
 *
 * # Safety
 * `catalog` must be null or a live handle.
 */
size_t wl_catalog_len(const struct WlCatalog *catalog);

/**
 * Copies entry `index` into a new collection handle.
 *
 * # Safety
 * `catalog` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_catalog_get(const struct WlCatalog *catalog,
                             size_t index,
                             struct WlCollection **out);

/**
 * The catalog as pretty JSON.
 *
 * # Safety
 * `catalog` must be a live handle and `out` a valid pointer.
 */
enum WlStatus wl_catalog_to_json(const struct WlCatalog *catalog, char **out);

/**
 * # Safety
 * `catalog` must be null or a handle not yet freed.
 */
void wl_catalog_free(struct WlCatalog *catalog);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WEAKLABEL_H */
