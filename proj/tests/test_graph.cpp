#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "rrg/errors.hpp"
#include "rrg/graph.hpp"

using namespace rrg;

namespace {

Graph k4() {
  Graph g(4);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) g.add_edge(u, v);
  return g;
}

}  // namespace

TEST_CASE("empty graph basics") {
  Graph g(5);
  CHECK(g.n() == 5);
  CHECK(g.edges().empty());
  for (int v = 0; v < 5; ++v) CHECK(g.degree(v) == 0);
  CHECK(g.is_regular(0));
  CHECK_FALSE(g.is_regular(1));
}

TEST_CASE("add_edge updates both endpoints and rejects duplicates") {
  Graph g(4);
  g.add_edge(0, 2);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(2) == 1);
  CHECK_THROWS_AS(g.add_edge(2, 0), Error);
  CHECK_THROWS_AS(g.add_edge(1, 1), Error);
  CHECK_THROWS_AS(g.add_edge(0, 4), Error);
}

TEST_CASE("edges come back sorted and unique") {
  Graph g(5);
  g.add_edge(3, 1);
  g.add_edge(0, 4);
  g.add_edge(1, 0);
  auto es = g.edges();
  REQUIRE(es.size() == 3);
  CHECK(std::is_sorted(es.begin(), es.end()));
  for (auto [u, v] : es) CHECK(u < v);
}

TEST_CASE("degrees and regularity") {
  Graph g = k4();
  CHECK(g.is_regular(3));
  auto ds = g.degrees();
  REQUIRE(ds.size() == 4);
  for (int d : ds) CHECK(d == 3);
}

TEST_CASE("complement of K4 is empty, complement of empty is K4") {
  Graph g = k4();
  Graph c = g.complement();
  CHECK(c.edges().empty());
  Graph e(4);
  CHECK(e.complement() == g);
}

TEST_CASE("format/parse round-trip") {
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(2, 5);
  g.add_edge(3, 4);
  std::string text = g.format();
  Graph back = Graph::parse(text);
  CHECK(back == g);
  CHECK(back.format() == text);
}

TEST_CASE("parse validates header and endpoints") {
  CHECK_THROWS_AS(Graph::parse(""), Error);
  CHECK_THROWS_AS(Graph::parse("4 2\n1 2\n"), Error);        // edge count off
  CHECK_THROWS_AS(Graph::parse("4 1\n0 2\n"), Error);        // 1-based
  CHECK_THROWS_AS(Graph::parse("4 1\n2 5\n"), Error);        // out of range
  CHECK_THROWS_AS(Graph::parse("4 2\n1 2\n1 2\n"), Error);   // duplicate
  CHECK(Graph::parse("2 1\n1 2\n").has_edge(0, 1));
}

TEST_CASE("ordering is total and consistent with equality") {
  Graph a(3), b(3);
  a.add_edge(0, 1);
  b.add_edge(0, 2);
  CHECK(a != b);
  CHECK((a < b || b < a));
  Graph a2(3);
  a2.add_edge(0, 1);
  CHECK(a == a2);
  CHECK_FALSE(a < a2);
  CHECK_FALSE(a2 < a);
}

TEST_CASE("union_disjoint merges edge sets and rejects shared edges") {
  Graph a(4), b(4);
  a.add_edge(0, 1);
  b.add_edge(2, 3);
  Graph u = union_disjoint(a, b);
  CHECK(u.has_edge(0, 1));
  CHECK(u.has_edge(2, 3));
  CHECK(u.edges().size() == 2);
  Graph c(4);
  c.add_edge(0, 1);
  CHECK_THROWS_AS(union_disjoint(a, c), Error);
  CHECK(edge_disjoint(a, b));
  CHECK_FALSE(edge_disjoint(a, c));
}

TEST_CASE("vector union_disjoint composes more than two parts") {
  Graph a(6), b(6), c(6);
  a.add_edge(0, 1);
  b.add_edge(2, 3);
  c.add_edge(4, 5);
  Graph u = union_disjoint(std::vector<Graph>{a, b, c});
  CHECK(u.edges().size() == 3);
  CHECK(u.is_regular(1));
}

TEST_CASE("relabel acts on edges by the permutation") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  std::vector<int> perm = {3, 2, 1, 0};  // v -> 3 - v
  Graph h = relabel(g, perm);
  CHECK(h.has_edge(3, 2));
  CHECK(h.has_edge(2, 1));
  CHECK(h.edges().size() == 2);
  CHECK_THROWS_AS(relabel(g, std::vector<int>{0, 0, 1, 2}), Error);
}

TEST_CASE("relabel by identity is identity; composition matches") {
  Graph g(5);
  g.add_edge(0, 4);
  g.add_edge(1, 3);
  std::vector<int> id = {0, 1, 2, 3, 4};
  CHECK(relabel(g, id) == g);
  std::vector<int> p = {1, 2, 3, 4, 0}, q = {4, 3, 2, 1, 0}, pq(5);
  for (int v = 0; v < 5; ++v) pq[v] = q[p[v]];
  CHECK(relabel(relabel(g, p), q) == relabel(g, pq));
}
