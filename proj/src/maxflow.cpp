#include "rrg/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace rrg {

MaxFlow::MaxFlow(int nodes) : head_(nodes, -1) {
  require(nodes >= 2, errc::invalid_argument, "flow network needs >= 2 nodes");
}

int MaxFlow::add_edge(int u, int v, std::int64_t cap) {
  require(u >= 0 && u < nodes() && v >= 0 && v < nodes() && u != v,
          errc::invalid_argument, "bad flow edge");
  require(cap >= 0, errc::invalid_argument, "negative capacity");
  int id = static_cast<int>(cap0_.size());
  arcs_.push_back({v, cap, head_[u]});
  head_[u] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({u, 0, head_[v]});
  head_[v] = static_cast<int>(arcs_.size()) - 1;
  cap0_.push_back(cap);
  return id;
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(nodes(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int e = head_[v]; e != -1; e = arcs_[e].next)
      if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
        level_[arcs_[e].to] = level_[v] + 1;
        q.push(arcs_[e].to);
      }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int t, std::int64_t limit) {
  if (v == t) return limit;
  for (int& e = iter_[v]; e != -1; e = arcs_[e].next) {
    Arc& a = arcs_[e];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    std::int64_t got = dfs(a.to, t, std::min(limit, a.cap));
    if (got > 0) {
      a.cap -= got;
      arcs_[e ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int s, int t) {
  require(s != t && s >= 0 && t >= 0 && s < nodes() && t < nodes(),
          errc::invalid_argument, "bad terminals");
  std::int64_t flow = 0;
  while (bfs(s, t)) {
    iter_ = head_;
    while (std::int64_t got =
               dfs(s, t, std::numeric_limits<std::int64_t>::max()))
      flow += got;
  }
  return flow;
}

std::int64_t MaxFlow::flow_on(int edge_id) const {
  require(edge_id >= 0 && edge_id < static_cast<int>(cap0_.size()),
          errc::invalid_argument, "bad edge id");
  return cap0_[edge_id] - arcs_[2 * edge_id].cap;
}

}  // namespace rrg
