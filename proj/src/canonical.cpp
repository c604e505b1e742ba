#include "rrg/canonical.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace rrg {

namespace {

struct Searcher {
  int n;
  std::array<std::uint64_t, 64> adj{};   // original adjacency, bit v set
  std::array<std::uint64_t, 64> best{};  // row value per level, MSB = pos 0
  std::array<int, 64> best_order{};
  std::array<int, 64> cur{};
  int best_known = 0;

  // Row value of original vertex v against the current prefix: adjacency to
  // position j lands at bit 63-j, so lexicographic order is plain uint64
  // order.
  std::uint64_t row_value(int v, int level) const {
    std::uint64_t r = 0;
    for (int j = 0; j < level; ++j)
      if (adj[v] >> cur[j] & 1) r |= 1ull << (63 - j);
    return r;
  }

  void search(int level, std::uint64_t unused) {
    if (level == n) {
      std::copy(cur.begin(), cur.begin() + n, best_order.begin());
      return;
    }
    struct Cand {
      std::uint64_t r;
      int v;
    };
    std::array<Cand, 64> cands;
    int c = 0;
    for (std::uint64_t rest = unused; rest;) {
      int v = __builtin_ctzll(rest);
      rest &= rest - 1;
      // Twin pruning: if an already listed candidate w has the same
      // neighborhood off {v, w}, the transposition (v w) is an
      // automorphism and the subtrees coincide.
      bool dup = false;
      for (int i = 0; i < c && !dup; ++i) {
        std::uint64_t diff = adj[v] ^ adj[cands[i].v];
        diff &= ~(1ull << v);
        diff &= ~(1ull << cands[i].v);
        dup = diff == 0;
      }
      if (dup) continue;
      cands[c++] = {row_value(v, level), v};
    }
    std::sort(cands.begin(), cands.begin() + c,
              [](const Cand& a, const Cand& b) { return a.r > b.r; });
    for (int i = 0; i < c; ++i) {
      auto [r, v] = cands[i];
      if (level < best_known) {
        if (r < best[level]) break;  // candidates are sorted: all pruned
        if (r > best[level]) {
          best[level] = r;
          best_known = level + 1;
        }
      } else {
        best[level] = r;
        best_known = level + 1;
      }
      cur[level] = v;
      search(level + 1, unused & ~(1ull << v));
    }
  }
};

std::string render_key(int n, const std::uint64_t* rows) {
  // Pack row bits (row i contributes i bits, positions 0..i-1) into bytes.
  std::string bits;
  bits.reserve(static_cast<std::size_t>(n) * n / 2);
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j)
      bits.push_back(rows[i] >> (63 - j) & 1 ? '1' : '0');
  std::string key = std::to_string(n) + ":";
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int nib = 0;
    for (std::size_t k = i; k < i + 4 && k < bits.size(); ++k)
      nib = nib * 2 + (bits[k] - '0');
    if (bits.size() - i < 4) nib <<= 4 - (bits.size() - i);
    key.push_back("0123456789abcdef"[nib]);
  }
  return key;
}

}  // namespace

CanonicalResult canonical_form(const Graph& g) {
  require(g.n() <= 64, errc::cap_exceeded, "canonical form needs n <= 64");
  Searcher s;
  s.n = g.n();
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.neighbors(u)) s.adj[u] |= 1ull << v;
  if (g.n() > 0)
    s.search(0, g.n() == 64 ? ~0ull : (1ull << g.n()) - 1);
  CanonicalResult res;
  res.key = render_key(g.n(), s.best.data());
  res.order.assign(s.best_order.begin(), s.best_order.begin() + g.n());
  // order maps position -> vertex; relabel wants vertex -> position.
  std::vector<int> inv(g.n());
  for (int pos = 0; pos < g.n(); ++pos) inv[res.order[pos]] = pos;
  res.canonical = g.n() > 0 ? relabel(g, inv) : Graph(0);
  return res;
}

std::string canonical_key(const Graph& g) { return canonical_form(g).key; }

std::string canonical_key_brute(const Graph& g) {
  require(g.n() <= 8, errc::cap_exceeded, "brute canonical key needs n <= 8");
  int n = g.n();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<std::uint64_t> best(n, 0), rows(n, 0);
  bool have = false;
  do {
    for (int i = 0; i < n; ++i) {
      rows[i] = 0;
      for (int j = 0; j < i; ++j)
        if (g.has_edge(order[i], order[j])) rows[i] |= 1ull << (63 - j);
    }
    if (!have || rows > best) {
      best = rows;
      have = true;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return render_key(n, best.data());
}

}  // namespace rrg
