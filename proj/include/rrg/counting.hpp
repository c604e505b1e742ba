#pragma once

#include <cstdint>
#include <vector>

#include "rrg/graph.hpp"

namespace rrg {

// Exact number of perfect matchings; n <= 28. Memoized recursion on the
// covered-vertex mask, always matching the least uncovered vertex, so each
// matching is counted along exactly one branch order.
std::int64_t count_perfect_matchings(const Graph& g);

// Independent cross-check: PM(G) = PM(G-e) + PM(G-u-v) on a pivot edge.
// Slower; used by tests.
std::int64_t count_perfect_matchings_edge_deletion(const Graph& g);

// Raw-row fast path for enumeration loops (single-word rows, n <= 28).
// Skips memoization on small n where plain recursion wins.
std::int64_t count_perfect_matchings_rows(const std::uint64_t* rows, int n);

std::int64_t count_triangles(const Graph& g);

// Ordered sequences of pairwise edge-disjoint perfect matchings whose union
// is exactly g; g must be regular, n <= 16.
std::int64_t count_one_factorisations_ordered(const Graph& g);

// Asymptotic count of labeled graphs with degree sequence g_deg avoiding
// every edge of x (McKay's estimate). All terms are reported; error terms
// of the underlying formula are diagnostics, not guarantees.
struct MckayEstimate {
  double e_edges = 0;        // half the degree sum
  double lambda = 0;
  double mu = 0;
  double delta_hat = 0;
  double error_scale = 0;    // delta_hat^2 / e
  double log_leading = 0;    // log of (2e)! / (e! 2^e prod g_i!)
  double leading = 0;
  double log_estimate = 0;   // log_leading - lambda - lambda^2 - mu
  double estimate = 0;
  bool hypothesis_ok = false;
};

// enforce=true re-raises a failed hypothesis as an error; enforce=false
// returns the evaluation with hypothesis_ok=false for diagnostic use.
MckayEstimate mckay_count(const Graph& x, const std::vector<int>& g_deg,
                          double eps, bool enforce = true);

// One-edge conditional probability estimate for uniform d-regular graphs:
// P(uv in G | h subseteq G) up to the formula's error term.
struct EdgeProbEstimate {
  double value = 0;
  double base = 0;   // (d - deg_h(u))(d - deg_h(v)) / (dn)
  double phi = 0;
  bool dense_h = false;  // set when |E(h)| > dn/2 and flagging is enabled
};

EdgeProbEstimate conditional_edge_probability(const Graph& h, int u, int v,
                                              int d);

}  // namespace rrg
