#ifndef RRG_H
#define RRG_H

/* C interface to the random-regular-graph toolkit.
 *
 * Conventions:
 *   - Every fallible function returns an int status: 0 on success, otherwise
 *     a stable nonzero code (see RRG_E_* below). rrg_last_error() returns a
 *     thread-local message for the most recent failure on this thread.
 *   - Strings returned through char** are heap-allocated; release them with
 *     rrg_string_free(). Graphs returned through rrg_graph** are opaque
 *     handles; release them with rrg_graph_free().
 *   - All sampling is deterministic in (seed, stream): the same pair always
 *     reproduces the same draw, independent of threading or call order.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  RRG_OK = 0,
  RRG_E_INVALID_ARGUMENT = 1,
  RRG_E_PARITY_VIOLATION = 2,
  RRG_E_ODD_N = 3,
  RRG_E_SHARED_EDGE = 4,
  RRG_E_EDGE_ALREADY_PRESENT = 5,
  RRG_E_DEGREE_EXCEEDED = 6,
  RRG_E_NOT_A_PERMUTATION = 7,
  RRG_E_CAP_EXCEEDED = 8,
  RRG_E_REJECTION_BUDGET_EXCEEDED = 9,
  RRG_E_NON_TERMINATION = 10,
  RRG_E_HYPOTHESIS_VIOLATED = 11,
  RRG_E_DEGENERATE_X = 12,
  RRG_E_SPARSE_CELLS = 13,
  RRG_E_EMPTY_SUPPORT = 14,
  RRG_E_INFEASIBLE_FLOW = 15,
  RRG_E_NOT_REGULAR = 16,
  RRG_E_PARSE = 17,
  RRG_E_IO = 18,
  RRG_E_UNKNOWN = 100
};

typedef struct rrg_graph rrg_graph;

/* ---- diagnostics ---- */

/* Message for the last failure on the calling thread; never NULL. */
const char* rrg_last_error(void);

/* Stable name of a status code ("ok", "cap_exceeded", ...). */
const char* rrg_errc_name(int code);

void rrg_string_free(char* s);
void rrg_graph_free(rrg_graph* g);

/* ---- graphs ---- */

/* Parses the text format: "n m" header, then one "u v" line per edge,
 * 1-based endpoints, u < v, edges sorted. */
int rrg_graph_parse(const char* text, rrg_graph** out);
int rrg_graph_create(int n, rrg_graph** out);
int rrg_graph_add_edge(rrg_graph* g, int u, int v); /* 0-based here */
int rrg_graph_format(const rrg_graph* g, char** out);

int rrg_graph_n(const rrg_graph* g);
int64_t rrg_graph_edge_count(const rrg_graph* g);
int rrg_graph_has_edge(const rrg_graph* g, int u, int v); /* 1/0, or <0 */
int rrg_graph_degree(const rrg_graph* g, int v);          /* or <0 */

/* Canonical-form key: equal strings iff the graphs are isomorphic. */
int rrg_canonical_key(const rrg_graph* g, char** out);

/* ---- exact counting ---- */

int rrg_count_perfect_matchings(const rrg_graph* g, int64_t* out);
int rrg_count_triangles(const rrg_graph* g, int64_t* out);
int rrg_count_ordered_one_factorisations(const rrg_graph* g, int64_t* out);

/* ---- sampling ---- */

/* Uniform d-regular graph on n labelled vertices. */
int rrg_sample_regular(int n, int d, uint64_t seed, uint64_t stream,
                       rrg_graph** out);

/* ---- oracle ---- */

/* Exact total variation between two measure expressions ("mu_3",
 * "mu_2+mu_1", "nu_2", ...) at size n, as a rational string "p/q". */
int rrg_exact_tv(const char* measure_p, const char* measure_q, int n,
                 char** out_rational);

/* ---- experiment engine ---- */

/* Runs one experiment described by a JSON config:
 *   {"command": "sample|count|tv|couple|experiment|suite",
 *    "params": {...}, "seed": 1729, "workers": 1}
 * and returns the full JSON report. This is the single entry point the CLI
 * uses; see the README for the per-command parameter lists. */
int rrg_run_json(const char* config_json, char** out_report_json);

/* ---- suites ---- */

/* Called once per finished criterion with a JSON object:
 *   {"id": 3, "name": "strassen", "pass": true, "detail": "...",
 *    "seconds": 1.2}. */
typedef void (*rrg_criterion_cb)(const char* criterion_json, void* user);

/* Runs the "acceptance" or "calibration" suite. `only` selects a single
 * criterion by token (NULL or "" runs all). Returns RRG_OK with
 * *failures_out = number of failed criteria; nonzero status only on
 * invalid input or internal error. */
int rrg_suite_run(const char* name, const char* only, uint64_t seed,
                  rrg_criterion_cb cb, void* user, int* failures_out);

/* Seed used when a config supplies none. */
uint64_t rrg_default_seed(void);

#ifdef __cplusplus
}
#endif

#endif /* RRG_H */
