#ifndef RIBVOL_H
#define RIBVOL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible call.
 */
typedef enum RibvolStatus {
  RIBVOL_STATUS_OK = 0,
  RIBVOL_STATUS_INTERNAL = 1,
  RIBVOL_STATUS_INVALID_INPUT = 2,
  RIBVOL_STATUS_NULL_POINTER = 4,
  RIBVOL_STATUS_INVALID_UTF8 = 5,
} RibvolStatus;

/*
 Opaque labelled oriented ribbon graph.
 */
typedef struct RibvolGraph RibvolGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the next failing call.
 */
const char *ribvol_last_error(void);

/*
 Library version as a static string.
 */
const char *ribvol_version(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void ribvol_string_free(char *s);

/*
 Parses a graph in the JSON graph format.

 # Safety
 `json` must be a NUL-terminated string; `out` a writable pointer.
 */
enum RibvolStatus ribvol_graph_from_json(const char *json, struct RibvolGraph **out);

/*
 Releases a graph handle.

 # Safety
 `g` must come from [`ribvol_graph_from_json`] and not be freed twice.
 */
void ribvol_graph_free(struct RibvolGraph *g);

/*
 Directed type `(g, n+, n-)` of a graph.

 # Safety
 `g` must be a live handle; the outputs writable.
 */
enum RibvolStatus ribvol_graph_type(const struct RibvolGraph *g,
                                    uint32_t *genus,
                                    uintptr_t *n_plus,
                                    uintptr_t *n_minus);

/*
 Number of sign- and label-preserving automorphisms.

 # Safety
 `g` must be a live handle; `out` writable.
 */
enum RibvolStatus ribvol_graph_automorphisms(const struct RibvolGraph *g, uintptr_t *out);

/*
 Acyclic decomposition along a vertex order; writes the stable graph as JSON.

 # Safety
 `g` must be a live handle, `order` point to `len` indices, `out` be writable.
 */
enum RibvolStatus ribvol_graph_decompose(const struct RibvolGraph *g,
                                         const uintptr_t *order,
                                         uintptr_t len,
                                         char **out);

/*
 `F_{g,n}` in the polynomial JSON format.

 # Safety
 `out` must be writable.
 */
enum RibvolStatus ribvol_fpoly_json(uint32_t g, uintptr_t n, char **out);

/*
 `F_{g,n}` in human-readable form.

 # Safety
 `out` must be writable.
 */
enum RibvolStatus ribvol_fpoly_string(uint32_t g, uintptr_t n, char **out);

/*
 `Z_{g,n+,n-}` at comma-separated rational lengths; writes `"num/den"`.

 # Safety
 `l_plus`, `l_minus` must be NUL-terminated strings; `out` writable.
 */
enum RibvolStatus ribvol_zeval(uint32_t g, const char *l_plus, const char *l_minus, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIBVOL_H */
