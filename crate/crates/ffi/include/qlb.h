#ifndef QLB_H
#define QLB_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlbQueryKind {
  QLB_QUERY_KIND_DEGREE = 0,
  QLB_QUERY_KIND_NEIGHBOR = 1,
  QLB_QUERY_KIND_PAIR = 2,
  QLB_QUERY_KIND_RANDOM_EDGE = 3,
} QlbQueryKind;

typedef enum QlbStatus {
  QLB_STATUS_OK = 0,
  QLB_STATUS_NULL_POINTER = 1,
  QLB_STATUS_INVALID_UTF8 = 2,
  QLB_STATUS_PARSE_ERROR = 3,
  QLB_STATUS_INVALID_PARAMS = 4,
  QLB_STATUS_VERTEX_OUT_OF_RANGE = 5,
  QLB_STATUS_NEIGHBOR_INDEX_OUT_OF_RANGE = 6,
  QLB_STATUS_NO_EDGES = 7,
  QLB_STATUS_UNSUPPORTED = 8,
  QLB_STATUS_BUDGET_EXCEEDED = 9,
  QLB_STATUS_CAP_EXCEEDED = 10,
  QLB_STATUS_CAPABILITY_VIOLATION = 11,
  QLB_STATUS_PANIC = 12,
} QlbStatus;

/**
 * An embedding instance plus the randomness for its random-edge queries.
 */
typedef struct QlbInstance QlbInstance;

/**
 * A two-party session bound to one instance.
 */
typedef struct QlbSession QlbSession;

/**
 * Answer to a simulated query.
 *
 * Degree: `first` is the degree. Neighbor: `flag` says whether a neighbor
 * exists and `first` is it. Pair: `flag`. RandomEdge: `first < second`.
 */
typedef struct QlbAnswer {
  uint64_t first;
  uint64_t second;
  bool flag;
} QlbAnswer;

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *qlb_last_error_message(void);

/**
 * Parses an instance JSON document as written by `qlb gen`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum QlbStatus qlb_instance_from_json(const char *json, struct QlbInstance **out);

/**
 * # Safety
 * `inst` must come from [`qlb_instance_from_json`] and not be used again.
 */
void qlb_instance_free(struct QlbInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_vertex_count(const struct QlbInstance *inst, uint64_t *out);

/**
 * Direct (non-simulated) query. Random edges draw from the handle's own
 * stream, seeded from the instance seed.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_query(struct QlbInstance *inst,
                                  enum QlbQueryKind kind,
                                  uint64_t a,
                                  uint64_t b,
                                  struct QlbAnswer *out);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_degree(struct QlbInstance *inst, uint64_t v, uint64_t *out);

/**
 * The `i`-th (1-based) neighbor of `v`; `found` is false past the degree.
 *
 * # Safety
 * `inst` must be a live handle; `found` and `out` must be writable.
 */
enum QlbStatus qlb_instance_neighbor(struct QlbInstance *inst,
                                     uint64_t v,
                                     uint64_t i,
                                     bool *found,
                                     uint64_t *out);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_pair(struct QlbInstance *inst, uint64_t u, uint64_t v, bool *out);

/**
 * # Safety
 * `inst` must be a live handle; `u` and `v` must be writable.
 */
enum QlbStatus qlb_instance_random_edge(struct QlbInstance *inst, uint64_t *u, uint64_t *v);

/**
 * The value of the underlying two-party function on the instance's inputs.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_gap_label(const struct QlbInstance *inst, bool *out);

/**
 * The materialized graph in the text edge-list format. Free the result with
 * [`qlb_string_free`].
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_instance_to_edge_list(const struct QlbInstance *inst, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used again.
 */
void qlb_string_free(char *s);

/**
 * Starts a two-party session on a copy of `inst`; `seed` drives the shared
 * randomness.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_session_new(const struct QlbInstance *inst,
                               uint64_t seed,
                               struct QlbSession **out);

/**
 * # Safety
 * `session` must come from [`qlb_session_new`] and not be used again.
 */
void qlb_session_free(struct QlbSession *session);

/**
 * Answers one query through the parties; `bits` receives its cost.
 *
 * # Safety
 * `session` must be a live handle; `out` and `bits` must be writable.
 */
enum QlbStatus qlb_session_query(struct QlbSession *session,
                                 enum QlbQueryKind kind,
                                 uint64_t a,
                                 uint64_t b,
                                 struct QlbAnswer *out,
                                 uint64_t *bits);

/**
 * # Safety
 * `session` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_session_total_bits(const struct QlbSession *session, uint64_t *out);

/**
 * # Safety
 * `session` must be a live handle; `out` must be writable.
 */
enum QlbStatus qlb_session_query_count(const struct QlbSession *session, uint64_t *out);

#endif  /* QLB_H */
