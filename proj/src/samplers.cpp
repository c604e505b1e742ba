#include "rrg/samplers.hpp"

#include <algorithm>
#include <unordered_map>

#include "rrg/config.hpp"

namespace rrg::samplers {

namespace {

std::uint64_t budget_or_default(std::uint64_t budget) {
  return budget ? budget : Config::global().rejection_budget;
}

}  // namespace

Graph sample_regular(int n, int d, Rng& rng, std::uint64_t budget) {
  const auto& cfg = Config::global();
  require(n >= 0 && n <= cfg.sample_n_cap, errc::cap_exceeded,
          "sampler vertex cap exceeded");
  require(d >= 0 && d < std::max(n, 1), errc::invalid_argument,
          "degree out of range");
  require(static_cast<long long>(n) * d % 2 == 0, errc::parity_violation,
          "dn must be even");
  if (d == 0) return Graph(n);

  std::uint64_t limit = budget_or_default(budget);
  std::vector<int> points(static_cast<std::size_t>(n) * d);
  std::vector<std::pair<int, int>> edges(points.size() / 2);
  for (std::uint64_t attempt = 1; attempt <= limit; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i)
      points[i] = static_cast<int>(i) / d;
    rng.shuffle(points);
    bool simple = true;
    for (std::size_t i = 0; i < points.size(); i += 2) {
      int u = points[i], v = points[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      edges[i / 2] = {std::min(u, v), std::max(u, v)};
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      continue;
    return Graph(n, edges);
  }
  fail(errc::rejection_budget_exceeded,
       "no simple pairing within the rejection budget");
}

Graph sample_matching(int n, Rng& rng) {
  require(n >= 0, errc::invalid_argument, "negative n");
  require(n % 2 == 0, errc::odd_n, "perfect matching needs even n");
  std::vector<int> free_list(n);
  for (int i = 0; i < n; ++i) free_list[i] = i;
  Graph g(n);
  // free_list stays sorted, so front() is the least unmatched vertex.
  while (!free_list.empty()) {
    int u = free_list.front();
    std::size_t j = 1 + static_cast<std::size_t>(rng.below(free_list.size() - 1));
    int v = free_list[j];
    g.add_edge(u, v);
    free_list.erase(free_list.begin() + j);
    free_list.erase(free_list.begin());
  }
  return g;
}

namespace {

bool pairwise_disjoint(const std::vector<Graph>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (!edge_disjoint(parts[i], parts[j])) return false;
  return true;
}

}  // namespace

OplusSample sample_oplus(const oracle::MeasureExpr& parts, int n, Rng& rng,
                         std::uint64_t budget) {
  require(!parts.parts.empty(), errc::invalid_argument, "empty composition");
  std::uint64_t limit = budget_or_default(budget);
  OplusSample out;
  out.components.resize(parts.parts.size());
  for (std::uint64_t attempt = 1; attempt <= limit; ++attempt) {
    for (std::size_t i = 0; i < parts.parts.size(); ++i) {
      const auto& p = parts.parts[i];
      out.components[i] = p.factorised ? sample_nu(n, p.d, rng).graph
                                       : sample_regular(n, p.d, rng);
    }
    if (!pairwise_disjoint(out.components)) continue;
    out.attempts = attempt;
    out.unioned = union_disjoint(out.components);
    return out;
  }
  fail(errc::rejection_budget_exceeded,
       "no edge-disjoint composition within the rejection budget");
}

NuSample sample_nu(int n, int d, Rng& rng, std::uint64_t budget) {
  require(d >= 1, errc::invalid_argument, "nu needs d >= 1");
  require(n % 2 == 0, errc::odd_n, "nu needs even n");
  std::uint64_t limit = budget_or_default(budget);
  NuSample out;
  out.factors.resize(d);
  for (std::uint64_t attempt = 1; attempt <= limit; ++attempt) {
    for (int i = 0; i < d; ++i) out.factors[i] = sample_matching(n, rng);
    if (!pairwise_disjoint(out.factors)) continue;
    out.attempts = attempt;
    out.graph = union_disjoint(out.factors);
    return out;
  }
  fail(errc::rejection_budget_exceeded,
       "no disjoint matching tuple within the rejection budget");
}

OverlayResult overlay(const std::vector<Graph>& skeletons, Rng& rng) {
  require(!skeletons.empty(), errc::invalid_argument, "no skeletons");
  int n = skeletons[0].n();
  for (const auto& g : skeletons)
    require(g.n() == n, errc::invalid_argument,
            "skeletons need a common vertex set");
  OverlayResult out;
  out.placed.reserve(skeletons.size());
  out.placed.push_back(skeletons[0]);
  for (std::size_t i = 1; i < skeletons.size(); ++i)
    out.placed.push_back(relabel(skeletons[i], rng.permutation(n)));

  std::unordered_map<std::uint64_t, int> seen;
  seen.reserve(64);
  for (const auto& g : out.placed)
    for (auto [u, v] : g.edges())
      ++seen[static_cast<std::uint64_t>(u) * n + v];
  for (auto& [k, c] : seen)
    if (c >= 2) ++out.repeated_edges;
  out.disjoint = out.repeated_edges == 0;
  return out;
}

}  // namespace rrg::samplers
