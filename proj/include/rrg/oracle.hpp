#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rrg/config.hpp"
#include "rrg/counting.hpp"
#include "rrg/graph.hpp"
#include "rrg/rational.hpp"

namespace rrg::oracle {

// A measure on graphs over a fixed vertex count: either the uniform law on
// d-regular graphs ("mu_d"), the one-factorisation-weighted law ("nu_d"),
// or an edge-disjoint composition of such parts joined with '+'.
struct MeasureExpr {
  struct Part {
    bool factorised = false;  // true: nu_d, false: mu_d
    int d = 0;
  };
  std::vector<Part> parts;

  int total_degree() const {
    int s = 0;
    for (const auto& p : parts) s += p.d;
    return s;
  }
};

MeasureExpr parse_measure(const std::string& text);
std::string format_measure(const MeasureExpr& expr);

void check_oracle_caps(int n, int degree_sum);

namespace detail {

template <typename F>
struct VertexwiseEnum {
  int n = 0;
  F& fn;
  std::array<std::uint64_t, 32> rows{};
  std::array<int, 32> res{};

  explicit VertexwiseEnum(F& f) : fn(f) {}

  bool feasible_beyond(int v) const {
    int active = 0, mx = 0;
    for (int u = v + 1; u < n; ++u)
      if (res[u] > 0) {
        ++active;
        if (res[u] > mx) mx = res[u];
      }
    return mx <= active - 1 || mx == 0;
  }

  void vertex(int v) {
    if (v == n) {
      fn(rows.data());
      return;
    }
    if (res[v] == 0) {
      vertex(v + 1);
      return;
    }
    std::array<int, 32> cand;
    int c = 0;
    for (int u = v + 1; u < n; ++u)
      if (res[u] > 0) cand[c++] = u;
    if (res[v] > c) return;
    choose(v, cand.data(), c, 0, res[v]);
  }

  void choose(int v, const int* cand, int c, int i, int left) {
    if (left == 0) {
      if (feasible_beyond(v)) vertex(v + 1);
      return;
    }
    for (int j = i; j <= c - left; ++j) {
      int u = cand[j];
      rows[v] |= 1ull << u;
      rows[u] |= 1ull << v;
      --res[u];
      choose(v, cand, c, j + 1, left - 1);
      rows[v] &= ~(1ull << u);
      rows[u] &= ~(1ull << v);
      ++res[u];
    }
  }
};

template <typename F>
struct EdgewiseEnum {
  int n = 0;
  F& fn;
  std::array<std::uint64_t, 32> rows{};
  std::array<int, 32> res{};

  explicit EdgewiseEnum(F& f) : fn(f) {}

  bool feasible() const {
    int active = 0, mx = 0;
    for (int u = 0; u < n; ++u)
      if (res[u] > 0) {
        ++active;
        if (res[u] > mx) mx = res[u];
      }
    return mx <= active - 1 || mx == 0;
  }

  // Partners of the current least open vertex are chosen in increasing
  // order, so every graph is produced exactly once.
  void step(int u, int min_v) {
    while (u < n && res[u] == 0) {
      ++u;
      min_v = u + 1;
    }
    if (u == n) {
      fn(rows.data());
      return;
    }
    for (int v = min_v; v < n; ++v) {
      if (res[v] == 0 || (rows[u] >> v & 1)) continue;
      rows[u] |= 1ull << v;
      rows[v] |= 1ull << u;
      --res[u];
      --res[v];
      bool closed = res[u] == 0;
      if (!closed)
        step(u, v + 1);
      else if (feasible())
        step(u + 1, u + 2);
      rows[u] &= ~(1ull << v);
      rows[v] &= ~(1ull << u);
      ++res[u];
      ++res[v];
    }
  }
};

}  // namespace detail

// Streams every labeled d-regular graph on n vertices (n <= 32) through f
// as single-word adjacency rows, in a fixed deterministic order.
template <typename F>
void for_each_regular(int n, int d, F&& f) {
  require(n >= 0 && n <= 32, errc::cap_exceeded, "enumeration needs n <= 32");
  require(d >= 0 && d < std::max(n, 1), errc::invalid_argument,
          "degree out of range");
  require(n * d % 2 == 0, errc::parity_violation, "dn must be even");
  detail::VertexwiseEnum<F> e(f);
  e.n = n;
  for (int i = 0; i < n; ++i) e.res[i] = d;
  e.vertex(0);
}

// Second, independently structured enumerator (edge augmentation). Used to
// cross-check the first; same callback contract.
template <typename F>
void for_each_regular_edgewise(int n, int d, F&& f) {
  require(n >= 0 && n <= 32, errc::cap_exceeded, "enumeration needs n <= 32");
  require(d >= 0 && d < std::max(n, 1), errc::invalid_argument,
          "degree out of range");
  require(n * d % 2 == 0, errc::parity_violation, "dn must be even");
  detail::EdgewiseEnum<F> e(f);
  e.n = n;
  for (int i = 0; i < n; ++i) e.res[i] = d;
  e.step(0, 1);
}

Graph graph_from_rows(const std::uint64_t* rows, int n);

// Materializing wrapper; refuses when the family exceeds the support cap.
std::vector<Graph> enumerate_regular(int n, int d);

std::uint64_t count_regular_enumerated(int n, int d);
std::uint64_t count_regular_enumerated_edgewise(int n, int d);

// Exact count via elimination over residual-degree classes; third route,
// no enumeration, works far beyond the enumeration caps.
Int count_regular_exact(int n, int d);

// Same elimination, arbitrary degree profile: profile[k] = number of
// vertices that still need k more edges (no edges preexist among them).
Int count_degree_profile(const std::vector<int>& profile);

// Exact finitely supported law with rational masses summing to one.
// Atoms are sorted by graph order, so serialization is byte-stable.
struct Distribution {
  int n = 0;
  std::vector<std::pair<Graph, Rat>> atoms;
  Int normalizer = 0;  // pre-normalization total weight

  const Rat* mass_of(const Graph& g) const;
  std::string dump_json() const;
};

Distribution distribution_from_weights(int n,
                                       std::vector<std::pair<Graph, Int>> w);

Distribution exact_distribution(const MeasureExpr& expr, int n);

// Edge-disjoint composition of two exact laws: mass of S proportional to
// the sum of p(G1) q(G2) over ordered decompositions S = G1 + G2.
Distribution oplus(const Distribution& p, const Distribution& q);

Rat exact_tv(const Distribution& p, const Distribution& q);

struct ClassAtom {
  std::string key;
  Graph representative;
  Int size = 0;
  Rat mass;
};

// Pushforward to isomorphism classes (canonical keys), sorted by key.
struct ClassDistribution {
  int n = 0;
  std::vector<ClassAtom> atoms;
};

ClassDistribution class_distribution(const Distribution& dist);
Rat class_tv(const ClassDistribution& p, const ClassDistribution& q);

// beta(G) = total tau-mass of graphs edge-disjoint from G.
class BetaWeigher {
 public:
  explicit BetaWeigher(Distribution tau) : tau_(std::move(tau)) {}
  Rat beta(const Graph& g) const;
  const Distribution& tau() const { return tau_; }

 private:
  Distribution tau_;
};

// Probability that independent draws from the given laws are pairwise
// edge-disjoint (the first-draw acceptance rate of the joint sampler).
Rat exact_disjoint_probability(const std::vector<Distribution>& parts);

// Exact law of the overlay procedure: k classes drawn from the
// one-factorisation-weighted class law, then representatives conditioned on
// pairwise disjointness; tuples whose classes admit no disjoint
// representatives are redrawn. Small n only.
Distribution exact_asp_law(int n, int d, int k);

// Streaming comparison of mu_d (+) mu_1 against mu_{d+1}: every (d+1)-regular
// graph is visited once, keyed by its perfect-matching count.
struct ExtensionStats {
  int n = 0, d = 0;
  std::uint64_t count_super = 0;       // |G_{d+1}(n)|
  std::uint64_t pm_total = 0;          // sum of PM counts
  std::map<std::int64_t, std::uint64_t> pm_histogram;
  Rat tv;                              // TV(mu_d (+) mu_1, mu_{d+1})
};

ExtensionStats extension_stats(int n, int d);

// Exact conditional edge probability over the uniform d-regular law.
struct CondEdgeExact {
  std::uint64_t total = 0;     // graphs containing h
  std::uint64_t with_uv = 0;   // graphs containing h and uv
  Rat prob;
};

CondEdgeExact conditional_edge_exact(int n, int d, const Graph& h, int u,
                                     int v);

}  // namespace rrg::oracle
