#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rrg/errors.hpp"

namespace rrg {

// Simple undirected graph, 0-based vertices internally, 1-based in text I/O.
// Two storage forms behind one interface: bit rows (kept while n stays under
// the dense cap; one row fits in a single word once n <= 64, which is the
// regime every exact-enumeration path lives in) and sorted adjacency lists,
// which are always present and carry the graph alone at sampling scale.
class Graph {
 public:
  Graph() : n_(0) {}
  explicit Graph(int n);
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  int m() const { return m_; }

  // Rejects loops, out-of-range endpoints and duplicate edges.
  void add_edge(int u, int v);

  bool has_edge(int u, int v) const;
  int degree(int u) const { return static_cast<int>(adj_[u].size()); }
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }
  std::vector<int> degrees() const;
  bool is_regular(int d) const;

  bool dense() const { return !bits_.empty(); }
  int row_words() const { return words_; }
  const std::uint64_t* row(int u) const { return &bits_[u * words_]; }
  // Single-word row; only valid when n <= 64.
  std::uint64_t row_bits(int u) const;

  // Lexicographically sorted (u < v) edge list.
  std::vector<std::pair<int, int>> edges() const;

  Graph complement() const;

  bool operator==(const Graph& o) const;
  bool operator!=(const Graph& o) const { return !(*this == o); }
  // Order by (n, edge list); used for deterministic tie-breaking.
  bool operator<(const Graph& o) const;

  std::uint64_t hash() const;

  // Text format: "n m" then one "u v" line per edge, 1-based, u < v, sorted.
  std::string format() const;
  static Graph parse(const std::string& text);

 private:
  void ensure_sorted() const;

  int n_ = 0;
  int m_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;              // n_*words_ when dense
  mutable std::vector<std::vector<int>> adj_;    // sorted on demand
  mutable bool sorted_ = true;
};

// Edge-disjoint union; same vertex set required, shared edges rejected.
Graph union_disjoint(const Graph& a, const Graph& b);
Graph union_disjoint(const std::vector<Graph>& parts);

// True when a and b share no edge.
bool edge_disjoint(const Graph& a, const Graph& b);

// perm maps old label -> new label and must be a permutation of 0..n-1.
Graph relabel(const Graph& g, const std::vector<int>& perm);

// Compact single-line edge list, 1-based: "1-2 3-4" ("-" for no edges).
std::string edge_token(const Graph& g);

}  // namespace rrg
