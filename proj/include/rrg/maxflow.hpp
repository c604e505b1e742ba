#pragma once

#include <cstdint>
#include <vector>

#include "rrg/errors.hpp"

namespace rrg {

// Dinic max-flow on integer capacities. Edge ids returned by add_edge
// address the forward arc; flow_on reads its final flow.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);
  int add_edge(int u, int v, std::int64_t cap);
  std::int64_t run(int s, int t);
  std::int64_t flow_on(int edge_id) const;
  int nodes() const { return static_cast<int>(head_.size()); }

 private:
  struct Arc {
    int to;
    std::int64_t cap;  // residual capacity
    int next;
  };
  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
  std::vector<std::int64_t> cap0_;  // original forward capacities by edge id

  bool bfs(int s, int t);
  std::int64_t dfs(int v, int t, std::int64_t limit);
};

}  // namespace rrg
