#pragma once

#include <string>
#include <vector>

#include "rrg/graph.hpp"

namespace rrg {

// Canonical form of a graph on n <= 64 vertices: the vertex ordering whose
// packed adjacency bit-string is lexicographically greatest. The search
// backtracks over orderings, pruning any branch whose next row falls below
// the best known row at that depth, and deduplicating interchangeable
// (twin) candidates. Exact for every n it accepts; refinement only speeds
// it up, so keys from isomorphic graphs always agree and keys from
// non-isomorphic graphs always differ.
struct CanonicalResult {
  std::string key;          // "n:hex-of-packed-upper-triangle"
  Graph canonical;          // relabeled representative
  std::vector<int> order;   // position -> original vertex
};

CanonicalResult canonical_form(const Graph& g);
std::string canonical_key(const Graph& g);

// Reference implementation: tries all n! orderings. Tests only; n <= 8.
std::string canonical_key_brute(const Graph& g);

}  // namespace rrg
