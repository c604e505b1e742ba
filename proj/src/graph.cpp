#include "rrg/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rrg/config.hpp"

namespace rrg {

Graph::Graph(int n) : n_(n) {
  require(n >= 0, errc::invalid_argument, "vertex count must be nonnegative");
  adj_.resize(n);
  if (n <= Config::global().dense_bitrows_cap) {
    words_ = (n + 63) / 64;
    if (words_ == 0) words_ = 1;
    bits_.assign(static_cast<std::size_t>(n) * words_, 0);
  }
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
  for (auto [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(int u, int v) {
  require(u >= 0 && u < n_ && v >= 0 && v < n_, errc::invalid_argument,
          "edge endpoint out of range");
  require(u != v, errc::invalid_argument, "loops are not allowed");
  require(!has_edge(u, v), errc::edge_already_present,
          "edge already present");
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  if (!bits_.empty()) {
    bits_[static_cast<std::size_t>(u) * words_ + v / 64] |= 1ull << (v % 64);
    bits_[static_cast<std::size_t>(v) * words_ + u / 64] |= 1ull << (u % 64);
  }
  sorted_ = false;
  ++m_;
}

bool Graph::has_edge(int u, int v) const {
  if (!bits_.empty())
    return (bits_[static_cast<std::size_t>(u) * words_ + v / 64] >>
            (v % 64)) & 1;
  const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  int w = adj_[u].size() <= adj_[v].size() ? v : u;
  if (!sorted_) return std::find(a.begin(), a.end(), w) != a.end();
  return std::binary_search(a.begin(), a.end(), w);
}

std::uint64_t Graph::row_bits(int u) const {
  require(n_ <= 64 && !bits_.empty(), errc::cap_exceeded,
          "single-word rows need n <= 64");
  return bits_[static_cast<std::size_t>(u)];
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(n_);
  for (int u = 0; u < n_; ++u) d[u] = degree(u);
  return d;
}

bool Graph::is_regular(int d) const {
  for (int u = 0; u < n_; ++u)
    if (degree(u) != d) return false;
  return true;
}

void Graph::ensure_sorted() const {
  if (sorted_) return;
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  sorted_ = true;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  ensure_sorted();
  std::vector<std::pair<int, int>> e;
  e.reserve(m_);
  for (int u = 0; u < n_; ++u)
    for (int v : adj_[u])
      if (v > u) e.emplace_back(u, v);
  return e;
}

Graph Graph::complement() const {
  Graph c(n_);
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v)
      if (!has_edge(u, v)) c.add_edge(u, v);
  return c;
}

bool Graph::operator==(const Graph& o) const {
  if (n_ != o.n_ || m_ != o.m_) return false;
  if (!bits_.empty() && !o.bits_.empty()) return bits_ == o.bits_;
  return edges() == o.edges();
}

bool Graph::operator<(const Graph& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  return edges() < o.edges();
}

std::uint64_t Graph::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull ^ static_cast<std::uint64_t>(n_);
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  };
  if (!bits_.empty()) {
    for (std::uint64_t w : bits_) mix(w);
  } else {
    for (auto [u, v] : edges())
      mix((static_cast<std::uint64_t>(u) << 32) | static_cast<unsigned>(v));
  }
  return h;
}

std::string Graph::format() const {
  std::string out;
  out.reserve(16 + 8 * static_cast<std::size_t>(m_));
  char buf[40];
  std::snprintf(buf, sizeof buf, "%d %d\n", n_, m_);
  out += buf;
  for (auto [u, v] : edges()) {
    std::snprintf(buf, sizeof buf, "%d %d\n", u + 1, v + 1);
    out += buf;
  }
  return out;
}

Graph Graph::parse(const std::string& text) {
  std::istringstream in(text);
  long long n = -1, m = -1;
  if (!(in >> n >> m))
    fail(errc::parse_error, "expected header line: n m");
  require(n >= 0 && n <= (1ll << 30), errc::parse_error, "bad vertex count");
  require(m >= 0, errc::parse_error, "bad edge count");
  Graph g(static_cast<int>(n));
  long long pu = -1, pv = -1;
  for (long long i = 0; i < m; ++i) {
    long long u, v;
    if (!(in >> u >> v)) fail(errc::parse_error, "truncated edge list");
    require(u >= 1 && v >= 1 && u <= n && v <= n, errc::parse_error,
            "edge endpoint out of range");
    require(u < v, errc::parse_error, "edges must satisfy u < v");
    require(u > pu || (u == pu && v > pv), errc::parse_error,
            "edges must be sorted lexicographically");
    pu = u;
    pv = v;
    g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  std::string rest;
  if (in >> rest) fail(errc::parse_error, "trailing tokens after edge list");
  return g;
}

bool edge_disjoint(const Graph& a, const Graph& b) {
  require(a.n() == b.n(), errc::invalid_argument,
          "graphs live on different vertex sets");
  if (a.dense() && b.dense() && a.row_words() == b.row_words()) {
    const int words = a.row_words();
    for (int u = 0; u < a.n(); ++u) {
      const std::uint64_t* ra = a.row(u);
      const std::uint64_t* rb = b.row(u);
      for (int w = 0; w < words; ++w)
        if (ra[w] & rb[w]) return false;
    }
    return true;
  }
  const Graph& small = a.m() <= b.m() ? a : b;
  const Graph& big = a.m() <= b.m() ? b : a;
  for (auto [u, v] : small.edges())
    if (big.has_edge(u, v)) return false;
  return true;
}

Graph union_disjoint(const Graph& a, const Graph& b) {
  require(a.n() == b.n(), errc::invalid_argument,
          "graphs live on different vertex sets");
  Graph u(a.n());
  for (auto [x, y] : a.edges()) u.add_edge(x, y);
  for (auto [x, y] : b.edges()) {
    require(!u.has_edge(x, y), errc::shared_edge,
            "composition parts share an edge");
    u.add_edge(x, y);
  }
  return u;
}

Graph union_disjoint(const std::vector<Graph>& parts) {
  require(!parts.empty(), errc::invalid_argument, "empty union");
  Graph u = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) u = union_disjoint(u, parts[i]);
  return u;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == g.n(), errc::not_a_permutation,
          "permutation size mismatch");
  std::vector<char> seen(g.n(), 0);
  for (int x : perm) {
    require(x >= 0 && x < g.n() && !seen[x], errc::not_a_permutation,
            "not a permutation");
    seen[x] = 1;
  }
  Graph h(g.n());
  for (auto [u, v] : g.edges()) h.add_edge(perm[u], perm[v]);
  return h;
}

std::string edge_token(const Graph& g) {
  auto es = g.edges();
  if (es.empty()) return "-";
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%d-%d", i ? " " : "", es[i].first + 1,
                  es[i].second + 1);
    out += buf;
  }
  return out;
}

const Config& Config::global() {
  static Config c;
  return c;
}

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid_argument";
    case errc::parity_violation: return "parity_violation";
    case errc::odd_n: return "odd_n";
    case errc::shared_edge: return "shared_edge";
    case errc::edge_already_present: return "edge_already_present";
    case errc::degree_exceeded: return "degree_exceeded";
    case errc::not_a_permutation: return "not_a_permutation";
    case errc::cap_exceeded: return "cap_exceeded";
    case errc::rejection_budget_exceeded: return "rejection_budget_exceeded";
    case errc::non_termination: return "non_termination";
    case errc::hypothesis_violated: return "hypothesis_violated";
    case errc::degenerate_x: return "degenerate_x";
    case errc::sparse_cells: return "sparse_cells";
    case errc::empty_support: return "empty_support";
    case errc::infeasible_flow: return "infeasible_flow";
    case errc::not_regular: return "not_regular";
    case errc::parse_error: return "parse_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace rrg
