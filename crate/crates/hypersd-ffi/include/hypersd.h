/* C interface for the hypersd library. */

#ifndef HYPERSD_H
#define HYPERSD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every C entry point.
typedef enum HsdStatus {
  // The call succeeded.
  HSD_STATUS_OK = 0,
  // A required pointer argument was null.
  HSD_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  HSD_STATUS_INVALID_UTF8 = 2,
  // The input could not be parsed or an argument was out of range.
  HSD_STATUS_INVALID_INPUT = 3,
  // Subdivision stopped because the edge cap was exceeded.
  HSD_STATUS_CAP_EXCEEDED = 4,
  // The library hit an internal error; the process state is still sound.
  HSD_STATUS_INTERNAL = 5,
} HsdStatus;

// Opaque hypergraph handle.
typedef struct HsdHypergraph HsdHypergraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a hypergraph from JSON and returns a new handle through `out`.
//
// The JSON shape matches the CLI: an object with `"vertices"` (array of
// strings) and `"edges"` (array of arrays of vertex indices).
//
// # Safety
//
// `json` must be null or a valid NUL-terminated string, and `out` must be
// null or valid for writing one pointer.
enum HsdStatus hsd_hypergraph_from_json(const char *json, struct HsdHypergraph **out);

// Serializes a hypergraph handle back to its canonical JSON form.
//
// # Safety
//
// `hypergraph` must be null or a live handle from this library, and `out`
// must be null or valid for writing one pointer.
enum HsdStatus hsd_hypergraph_to_json(const struct HsdHypergraph *hypergraph, char **out);

// Computes the simplicial closure and returns it as a new handle.
//
// # Safety
//
// `hypergraph` must be null or a live handle from this library, and `out`
// must be null or valid for writing one pointer.
enum HsdStatus hsd_closure(const struct HsdHypergraph *hypergraph, struct HsdHypergraph **out);

// Subdivides a hypergraph `iterations` times and returns the result.
//
// `cap` bounds the edge count of every intermediate round and must be
// positive; exceeding it yields the cap-exceeded status.
//
// # Safety
//
// `hypergraph` must be null or a live handle from this library, and `out`
// must be null or valid for writing one pointer.
enum HsdStatus hsd_subdivide(const struct HsdHypergraph *hypergraph,
                             uintptr_t iterations,
                             uintptr_t cap,
                             struct HsdHypergraph **out);

// Computes embedded homology and returns the report as JSON.
//
// `ring` selects the coefficients: `"z"`, `"q"`, or `"gf<p>"` with `p`
// prime, case-insensitive.
//
// # Safety
//
// `hypergraph` must be null or a live handle from this library, `ring` must
// be null or a valid NUL-terminated string, and `out` must be null or valid
// for writing one pointer.
enum HsdStatus hsd_homology_json(const struct HsdHypergraph *hypergraph,
                                 const char *ring,
                                 char **out);

// Verifies that subdivision preserves embedded homology.
//
// Writes the full check report as JSON and stores the overall outcome in
// `all_pass`.  A failed check is a result, not an error: the status stays
// `Ok` whenever the report was produced.
//
// # Safety
//
// `hypergraph` must be null or a live handle from this library, `ring` must
// be null or a valid NUL-terminated string, and `all_pass` and `out` must
// each be null or valid for one write.
enum HsdStatus hsd_verify_json(const struct HsdHypergraph *hypergraph,
                               const char *ring,
                               bool *all_pass,
                               char **out);

// Returns the message recorded by the last failing call on this thread.
//
// The caller owns the returned string and releases it with
// [`hsd_string_free`].  Returns null when the last call succeeded.
char *hsd_last_error_message(void);

// Releases a hypergraph handle.  Null is ignored.
//
// # Safety
//
// `hypergraph` must be null or a handle returned by this library that has
// not been freed before.
void hsd_hypergraph_free(struct HsdHypergraph *hypergraph);

// Releases a string returned by this library.  Null is ignored.
//
// # Safety
//
// `text` must be null or a string returned by this library that has not
// been freed before.
void hsd_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERSD_H */
