#include "rrg/counting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "rrg/config.hpp"

namespace rrg {

namespace {

// Flat epoch-stamped memo table; avoids reallocating per call. Grows by
// rehashing when load passes 1/2.
struct PmMemo {
  struct Entry {
    std::uint32_t mask;
    std::uint32_t epoch;
    std::int64_t value;
  };
  std::vector<Entry> slots;
  std::uint32_t epoch = 0;
  std::size_t used = 0;

  PmMemo() : slots(1u << 16) {}

  void next_epoch() {
    ++epoch;
    used = 0;
    if (epoch == 0) {  // wrapped: stale stamps could collide, wipe
      std::fill(slots.begin(), slots.end(), Entry{0, 0, 0});
      epoch = 1;
    }
  }

  std::size_t probe(std::uint32_t mask) const {
    std::size_t h = mask * 0x9E3779B1u;
    return h & (slots.size() - 1);
  }

  bool find(std::uint32_t mask, std::int64_t& out) const {
    std::size_t i = probe(mask);
    while (true) {
      const Entry& e = slots[i];
      if (e.epoch != epoch) return false;
      if (e.mask == mask) {
        out = e.value;
        return true;
      }
      i = (i + 1) & (slots.size() - 1);
    }
  }

  void insert(std::uint32_t mask, std::int64_t value) {
    if (used * 2 >= slots.size()) grow();
    std::size_t i = probe(mask);
    while (slots[i].epoch == epoch && slots[i].mask != mask)
      i = (i + 1) & (slots.size() - 1);
    if (slots[i].epoch != epoch) ++used;
    slots[i] = {mask, epoch, value};
  }

  void grow() {
    std::vector<Entry> old = std::move(slots);
    slots.assign(old.size() * 2, Entry{0, 0, 0});
    used = 0;
    for (const Entry& e : old)
      if (e.epoch == epoch) {
        std::size_t i = probe(e.mask);
        while (slots[i].epoch == epoch) i = (i + 1) & (slots.size() - 1);
        slots[i] = e;
        ++used;
      }
  }
};

thread_local PmMemo g_pm_memo;

std::int64_t pm_rec(const std::uint32_t* adj, std::uint32_t covered,
                    std::uint32_t full, PmMemo& memo) {
  if (covered == full) return 1;
  int v = __builtin_ctz(~covered);
  std::uint32_t cand = adj[v] & ~covered;
  if (!cand) return 0;
  std::int64_t known;
  if (memo.find(covered, known)) return known;
  std::int64_t total = 0;
  std::uint32_t base = covered | (1u << v);
  while (cand) {
    int u = __builtin_ctz(cand);
    cand &= cand - 1;
    total += pm_rec(adj, base | (1u << u), full, memo);
  }
  memo.insert(covered, total);
  return total;
}

void adjacency_masks(const Graph& g, std::uint32_t* adj) {
  for (int u = 0; u < g.n(); ++u) {
    adj[u] = 0;
    for (int v : g.neighbors(u)) adj[u] |= 1u << v;
  }
}

}  // namespace

namespace {

std::int64_t pm_rec_plain(const std::uint32_t* adj, std::uint32_t covered,
                          std::uint32_t full) {
  if (covered == full) return 1;
  int v = __builtin_ctz(~covered);
  std::uint32_t cand = adj[v] & ~covered;
  std::int64_t total = 0;
  std::uint32_t base = covered | (1u << v);
  while (cand) {
    int u = __builtin_ctz(cand);
    cand &= cand - 1;
    total += pm_rec_plain(adj, base | (1u << u), full);
  }
  return total;
}

}  // namespace

std::int64_t count_perfect_matchings(const Graph& g) {
  require(g.n() <= Config::global().pm_count_n_cap, errc::cap_exceeded,
          "perfect matching count capped at n <= 28");
  if (g.n() == 0) return 1;
  if (g.n() % 2) return 0;
  std::uint32_t adj[28];
  adjacency_masks(g, adj);
  std::uint32_t full = (1u << g.n()) - 1;
  if (g.n() <= 12) return pm_rec_plain(adj, 0, full);
  g_pm_memo.next_epoch();
  return pm_rec(adj, 0, full, g_pm_memo);
}

std::int64_t count_perfect_matchings_rows(const std::uint64_t* rows, int n) {
  require(n >= 0 && n <= Config::global().pm_count_n_cap, errc::cap_exceeded,
          "perfect matching count capped at n <= 28");
  if (n == 0) return 1;
  if (n % 2) return 0;
  std::uint32_t adj[28];
  for (int u = 0; u < n; ++u) adj[u] = static_cast<std::uint32_t>(rows[u]);
  std::uint32_t full = (1u << n) - 1;
  if (n <= 12) return pm_rec_plain(adj, 0, full);
  g_pm_memo.next_epoch();
  return pm_rec(adj, 0, full, g_pm_memo);
}

namespace {

std::int64_t pm_del_rec(std::vector<std::pair<int, int>> edges, int n) {
  // n = vertices still to cover; edges between covered vertices are gone
  if (edges.empty()) return n == 0 ? 1 : 0;
  // pivot on the first edge e=(u,v): PM(G) = PM(G - e) + PM(G - {u,v})
  auto [u, v] = edges.front();
  std::vector<std::pair<int, int>> without_e(edges.begin() + 1, edges.end());
  // G - {u,v}: drop all edges touching u or v, relabel rest implicitly
  std::vector<std::pair<int, int>> contracted;
  for (auto [a, b] : without_e)
    if (a != u && a != v && b != u && b != v) contracted.emplace_back(a, b);
  std::int64_t total = pm_del_rec(std::move(contracted), n - 2);
  total += pm_del_rec(std::move(without_e), n);
  return total;
}

}  // namespace

std::int64_t count_perfect_matchings_edge_deletion(const Graph& g) {
  require(g.n() <= 16, errc::cap_exceeded,
          "edge-deletion cross-check capped at n <= 16");
  if (g.n() % 2) return 0;
  // track vertex count exactly: recursion above treats "n" as the number of
  // vertices still required to be covered
  return pm_del_rec(g.edges(), g.n());
}

std::int64_t count_triangles(const Graph& g) {
  std::int64_t total = 0;
  if (g.dense()) {
    const int words = g.row_words();
    for (auto [u, v] : g.edges()) {
      const std::uint64_t* ru = g.row(u);
      const std::uint64_t* rv = g.row(v);
      for (int w = 0; w < words; ++w)
        total += __builtin_popcountll(ru[w] & rv[w]);
    }
    return total / 3;
  }
  for (int u = 0; u < g.n(); ++u) {
    const auto& nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        int v = nb[i], w = nb[j];
        if (v > u && w > u && g.has_edge(v, w)) ++total;
      }
  }
  return total;
}

namespace {

std::int64_t ofact_rec(std::array<std::uint32_t, 16>& adj, int n,
                       std::uint32_t full, int layers_left) {
  bool empty = true;
  for (int v = 0; v < n && empty; ++v) empty = adj[v] == 0;
  if (layers_left == 0) return empty ? 1 : 0;
  if (empty) return 0;

  // enumerate perfect matchings of the residual graph; recurse on each
  std::int64_t total = 0;
  std::array<std::pair<int, int>, 8> stack;
  int depth = 0;
  std::uint32_t covered = 0;

  // iterative DFS with explicit undo is clumsy; a lambda recursion is clear
  auto rec = [&](auto&& self, std::uint32_t cov) -> void {
    if (cov == full) {
      // remove matched edges, recurse one layer down, restore
      for (int i = 0; i < depth; ++i) {
        auto [a, b] = stack[i];
        adj[a] &= ~(1u << b);
        adj[b] &= ~(1u << a);
      }
      total += ofact_rec(adj, n, full, layers_left - 1);
      for (int i = 0; i < depth; ++i) {
        auto [a, b] = stack[i];
        adj[a] |= 1u << b;
        adj[b] |= 1u << a;
      }
      return;
    }
    int v = __builtin_ctz(~cov);
    std::uint32_t cand = adj[v] & ~cov;
    while (cand) {
      int u = __builtin_ctz(cand);
      cand &= cand - 1;
      stack[depth++] = {v, u};
      self(self, cov | (1u << v) | (1u << u));
      --depth;
    }
  };
  rec(rec, covered);
  return total;
}

}  // namespace

std::int64_t count_one_factorisations_ordered(const Graph& g) {
  require(g.n() <= Config::global().one_fact_n_cap, errc::cap_exceeded,
          "one-factorisation count capped at n <= 16");
  if (g.n() == 0) return 1;
  require(g.n() % 2 == 0, errc::odd_n,
          "one-factorisations need an even vertex count");
  int d = g.degree(0);
  require(g.is_regular(d), errc::not_regular,
          "one-factorisation count needs a regular graph");
  if (d == 0) return 1;
  std::array<std::uint32_t, 16> adj{};
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.neighbors(u)) adj[u] |= 1u << v;
  std::uint32_t full = (1u << g.n()) - 1;
  return ofact_rec(adj, g.n(), full, d);
}

MckayEstimate mckay_count(const Graph& x, const std::vector<int>& g_deg,
                          double eps, bool enforce) {
  require(eps > 0 && eps < 2.0 / 3.0, errc::invalid_argument,
          "eps must lie in (0, 2/3)");
  require(static_cast<int>(g_deg.size()) == x.n(), errc::invalid_argument,
          "degree sequence length must match the forbidden graph");
  long long sum_g = 0;
  int max_g = 0;
  for (int gi : g_deg) {
    require(gi >= 0, errc::invalid_argument, "negative degree");
    sum_g += gi;
    max_g = std::max(max_g, gi);
  }
  require(sum_g % 2 == 0, errc::parity_violation, "degree sum must be even");

  MckayEstimate r;
  double e = static_cast<double>(sum_g) / 2.0;
  r.e_edges = e;
  int max_x = 0;
  for (int u = 0; u < x.n(); ++u) max_x = std::max(max_x, x.degree(u));
  r.delta_hat = 2.0 + max_g * (1.5 * max_g + max_x + 1.0);
  r.hypothesis_ok = r.delta_hat <= eps * static_cast<double>(sum_g);
  if (enforce && !r.hypothesis_ok)
    fail(errc::hypothesis_violated,
         "delta_hat exceeds eps * degree sum (" +
             std::to_string(r.delta_hat) + " > " +
             std::to_string(eps * static_cast<double>(sum_g)) + ")");

  if (e > 0) {
    double sq = 0;
    for (int gi : g_deg) sq += static_cast<double>(gi) * (gi - 1);
    r.lambda = sq / (4.0 * e);
    double cross = 0;
    for (auto [u, v] : x.edges())
      cross += static_cast<double>(g_deg[u]) * g_deg[v];
    r.mu = cross / (2.0 * e);
    r.error_scale = r.delta_hat * r.delta_hat / e;
  }

  r.log_leading = std::lgamma(2.0 * e + 1.0) - std::lgamma(e + 1.0) -
                  e * std::log(2.0);
  for (int gi : g_deg) r.log_leading -= std::lgamma(gi + 1.0);
  r.leading = std::exp(r.log_leading);
  r.log_estimate = r.log_leading - r.lambda - r.lambda * r.lambda - r.mu;
  r.estimate = std::exp(r.log_estimate);
  return r;
}

EdgeProbEstimate conditional_edge_probability(const Graph& h, int u, int v,
                                              int d) {
  int n = h.n();
  require(d >= 1, errc::invalid_argument, "degree must be positive");
  require(u >= 0 && u < n && v >= 0 && v < n && u != v,
          errc::invalid_argument, "bad edge endpoints");
  require(!h.has_edge(u, v), errc::edge_already_present,
          "conditioning graph already contains uv");
  int du = h.degree(u), dv = h.degree(v);
  require(du <= d && dv <= d, errc::degree_exceeded,
          "conditioning graph exceeds target degree");
  for (int w = 0; w < n; ++w)
    require(h.degree(w) <= d, errc::degree_exceeded,
            "conditioning graph exceeds target degree");

  EdgeProbEstimate r;
  double dn = static_cast<double>(d) * n;
  double nb = 0;
  for (int x : h.neighbors(u)) nb += h.degree(x);
  for (int y : h.neighbors(v)) nb += h.degree(y);
  r.phi = static_cast<double>(du) * dv + nb - d - 2.0 * h.m() -
          (d - 1.0) * (du + dv);
  r.base = (d - du) * (d - dv) / dn;
  r.value = r.base * (1.0 - r.phi / dn);
  r.dense_h = Config::global().flag_dense_h && h.m() > dn / 2.0;
  return r;
}

}  // namespace rrg
