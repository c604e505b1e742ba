#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rrg/coupling.hpp"
#include "rrg/errors.hpp"
#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"
#include "rrg/rational.hpp"
#include "rrg/rng.hpp"

using namespace rrg;
using namespace rrg::coupling;

TEST_CASE("maximal coupling on a two-point law: diagonal is 1 - tv") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> p = {Rat(9, 10), Rat(1, 10)};
  std::vector<Rat> q = {Rat(1, 2), Rat(1, 2)};
  auto table = maximal_coupling(labels, p, q);
  table.verify_marginals();
  CHECK(table.diagonal_mass() == Rat(3, 5));  // tv = 2/5
  // Off-diagonal mass concentrates on (a -> b): residuals are point masses.
  Rat off = table.joint.at({0, 1});
  CHECK(off == Rat(2, 5));
  CHECK(table.joint.count({1, 0}) == 0);
}

TEST_CASE("maximal coupling handles identical and disjoint laws") {
  std::vector<std::string> labels = {"a", "b", "c"};
  std::vector<Rat> p = {Rat(1, 3), Rat(1, 3), Rat(1, 3)};
  auto same = maximal_coupling(labels, p, p);
  CHECK(same.diagonal_mass() == 1);

  std::vector<Rat> l = {Rat(1, 2), Rat(1, 2), Rat(0)};
  std::vector<Rat> r = {Rat(0), Rat(0), Rat(1)};
  auto far = maximal_coupling(labels, l, r);
  CHECK(far.diagonal_mass() == 0);
  far.verify_marginals();
}

TEST_CASE("maximal coupling of exact graph laws couples mu_3 and nu_3") {
  // Labelled laws at n=6 keep the residual product small; the n=8 pair is
  // coupled classwise (its labelled residual product would be huge).
  auto mu6 = oracle::exact_distribution(oracle::parse_measure("mu_3"), 6);
  auto nu6 = oracle::exact_distribution(oracle::parse_measure("nu_3"), 6);
  auto table6 = maximal_coupling(mu6, nu6);
  table6.verify_marginals();
  CHECK(table6.diagonal_mass() == 1 - oracle::exact_tv(mu6, nu6));

  auto mu8 = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure("mu_3"), 8));
  auto nu8 = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure("nu_3"), 8));
  auto table8 = maximal_coupling(mu8, nu8);
  table8.verify_marginals();
  CHECK(table8.diagonal_mass() == 1 - Rat(18672, 86821));
}

TEST_CASE("coupling table sampling hits cells with their exact masses") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> p = {Rat(9, 10), Rat(1, 10)};
  std::vector<Rat> q = {Rat(1, 2), Rat(1, 2)};
  auto table = maximal_coupling(labels, p, q);
  Rng rng(1729, 0);
  std::map<std::pair<int, int>, std::uint64_t> hits;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) hits[table.sample(rng)] += 1;
  for (const auto& [cell, mass] : table.joint) {
    double expect = mass.get_d();
    double freq = static_cast<double>(hits[cell]) / trials;
    double se = std::sqrt(expect * (1 - expect) / trials);
    CHECK(std::fabs(freq - expect) < 5 * se + 1e-9);
  }
  // Determinism of the sampling path.
  Rng r1(5, 5), r2(5, 5);
  for (int t = 0; t < 100; ++t) CHECK(table.sample(r1) == table.sample(r2));
}

TEST_CASE("maximal coupling validates its inputs") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> bad = {Rat(1, 2), Rat(1, 3)};  // sums to 5/6
  std::vector<Rat> good = {Rat(1, 2), Rat(1, 2)};
  CHECK_THROWS_AS(maximal_coupling(labels, bad, good), Error);
  std::vector<Rat> negative = {Rat(3, 2), Rat(-1, 2)};
  CHECK_THROWS_AS(maximal_coupling(labels, negative, good), Error);
}

TEST_CASE("strassen coupling on a planted starved block hits 1/20 exactly") {
  // 36 + 4 vertices per side; the lo block starves 4 S-vertices into 2
  // T-vertices, which forces exactly 1/20 of the mass off the edge set.
  // Mirrors the acceptance construction at its fixed offsets.
  const int hi = 36, lo = 4;
  const int t = hi + lo;
  std::vector<std::vector<int>> adj(hi + lo);
  for (int i = 0; i < hi; ++i)
    for (int off : {0, 6, 12, 18, 24, 30}) adj[i].push_back((i + off) % hi);
  for (int i = 0; i < lo; ++i) {
    adj[hi + i].push_back(hi);
    adj[hi + i].push_back(hi + 1);
  }
  auto res = strassen_coupling(adj, t);
  res.table.verify_marginals();
  CHECK(res.violation == Rat(1, 20));
  CHECK(res.violation <= res.bound);
  CHECK(res.s_size == hi + lo);
  CHECK(res.t_size == t);
}

TEST_CASE("strassen coupling on a biregular graph has zero violation") {
  const int n = 12;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int off : {0, 1, 2}) adj[i].push_back((i + off) % n);
  auto res = strassen_coupling(adj, n);
  res.table.verify_marginals();
  CHECK(res.violation == 0);
}

TEST_CASE("strassen profile counts sub-threshold vertices on both sides") {
  // 4 S-vertices with degrees {1, 3, 3, 3}: mean 2.5, threshold 2.25 at
  // eps = 1/10, so exactly one vertex sits below it.
  std::vector<std::int64_t> s = {1, 3, 3, 3};
  std::vector<std::int64_t> t = {2, 2, 3, 3};
  auto prof = strassen_profile(s, t, 10, Rat(1, 10));
  CHECK(prof.delta_s == Rat(1, 4));
  CHECK(prof.delta_t == Rat(1, 2));
}

TEST_CASE("zeta recursion reproduces the two-class hand trace") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> mu = {Rat(9, 10), Rat(1, 10)};
  std::vector<Rat> nu = {Rat(1, 2), Rat(1, 2)};
  auto trace = zeta_recursion(labels, mu, nu, Rat(1, 10));
  REQUIRE(trace.k == 3);
  REQUIRE(trace.states.size() == 3);
  CHECK(trace.states[0].Z == Rat(2, 5));
  CHECK(trace.states[1].Z == Rat(1, 2));
  CHECK(trace.states[2].Z == Rat(1, 2));
  CHECK(trace.states[0].product == Rat(2, 5));
  CHECK(trace.states[1].product == Rat(1, 5));
  CHECK(trace.states[2].product == Rat(1, 10));
  CHECK(trace.miss_probability == Rat(1, 10));
}

TEST_CASE("zeta recursion stops immediately when the laws coincide") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> p = {Rat(1, 4), Rat(3, 4)};
  auto trace = zeta_recursion(labels, p, p, Rat(1, 2));
  CHECK(trace.k == 1);
  CHECK(trace.miss_probability == 0);
}

TEST_CASE("zeta coupling of the cubic laws at n=8, frozen tail") {
  auto mu = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure("mu_3"), 8));
  auto nu = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure("nu_3"), 8));
  auto trace = zeta_coupling(mu, nu, Rat(1, 20));
  REQUIRE(trace.k == 5);
  CHECK(trace.states[0].Z == Rat(18672, 86821));
  CHECK(trace.miss_probability ==
        Rat("2635705182192/52750112884021"));
  // The first subtraction exhausts the discrepancy; later factors repeat.
  CHECK(trace.states[1].Z == trace.states[2].Z);
  // A loose epsilon stops after one step.
  auto lax = zeta_coupling(mu, nu, Rat(3, 10));
  CHECK(lax.k == 1);
  CHECK(lax.miss_probability == Rat(18672, 86821));
}

TEST_CASE("zeta sampler miss frequency matches the exact product") {
  std::vector<std::string> labels = {"a", "b"};
  std::vector<Rat> mu = {Rat(9, 10), Rat(1, 10)};
  std::vector<Rat> nu = {Rat(1, 2), Rat(1, 2)};
  auto trace = zeta_recursion(labels, mu, nu, Rat(1, 10));
  Rng rng(1729, 0);
  const int trials = 100000;
  int miss = 0;
  std::vector<std::uint64_t> x_hist(2, 0);
  for (int t = 0; t < trials; ++t) {
    auto s = zeta_sample(trace, rng);
    if (!s.hit) {
      miss += 1;
    } else {
      REQUIRE(s.step >= 1);
      REQUIRE(s.step <= trace.k);
      x_hist[static_cast<std::size_t>(s.class_index)] += 1;
    }
    CHECK(s.y_classes.size() == static_cast<std::size_t>(trace.k));
  }
  double expect = trace.miss_probability.get_d();
  double se = std::sqrt(expect * (1 - expect) / trials);
  CHECK(std::fabs(miss / static_cast<double>(trials) - expect) < 4 * se);
}

TEST_CASE("matching extension coupling is exact and flow-checked at n=8") {
  Rng rng(1729, 0);
  auto rep = matching_extension_coupling(8, 2, 0, rng);
  CHECK(rep.exact);
  CHECK(rep.tv == Rat(2720, 38157));
  CHECK(rep.flow_ran);
  CHECK(rep.flow_violation == rep.tv);
  CHECK(rep.bound >= rep.flow_violation);
}

TEST_CASE("matching extension coupling is degenerate at n=4") {
  Rng rng(1729, 1);
  auto rep = matching_extension_coupling(4, 2, 0, rng);
  CHECK(rep.exact);
  CHECK(rep.tv == 0);
}

TEST_CASE("asp sample unions k factorised draws, disjoint by construction") {
  Rng rng(1729, 2);
  for (int t = 0; t < 200; ++t) {
    auto s = asp_sample(8, 1, 2, rng);
    CHECK(s.unioned.is_regular(2));
    CHECK(s.classes.size() == 2);
  }
}

TEST_CASE("complete couple: hits are subgraphs distributed as mu_d") {
  Rng rng(1729, 3);
  const int trials = 2000;
  int hits = 0;
  std::map<std::string, std::uint64_t> g_hist;
  for (int t = 0; t < trials; ++t) {
    auto r = complete_couple(8, 3, Rat(3, 10), rng);
    CHECK(r.k == 1);  // epsilon 3/10 stops the recursion at one step
    CHECK(r.g.is_regular(3));
    CHECK(r.g_oplus.is_regular(3));
    if (r.hit) {
      hits += 1;
      CHECK(r.g == r.g_oplus);
    }
    g_hist[r.g.format()] += 1;
  }
  // Hit probability is exactly 1 - 18672/86821 = 0.7849...
  double expect = 1 - Rat(18672, 86821).get_d();
  double se = std::sqrt(expect * (1 - expect) / trials);
  CHECK(std::fabs(hits / static_cast<double>(trials) - expect) < 4 * se);
}

TEST_CASE("inclusion pipeline case 2 routes everything at (8,3,5)") {
  Rng rng(1729, 4);
  auto rep = inclusion_pipeline(8, 3, 5, 2000, rng, 2);
  CHECK(rep.tv_exact);
  CHECK(rep.tv == Rat(134, 11523));
  CHECK(rep.transport_value == 1);
  CHECK(rep.inclusion_rate == doctest::Approx(1.0));
  CHECK(rep.used_case == 2);
  CHECK(rep.trials == 2000);
  std::uint64_t seen = 0;
  for (auto c : rep.g1_class_counts) seen += c;
  CHECK(seen == rep.trials);
}

TEST_CASE("inclusion pipeline case 2 is trivial when the laws coincide") {
  Rng rng(1729, 5);
  auto rep = inclusion_pipeline(4, 2, 3, 500, rng, 2);
  CHECK(rep.tv_exact);
  CHECK(rep.tv == 0);
  CHECK(rep.inclusion_rate == doctest::Approx(1.0));
}

TEST_CASE("inclusion pipeline case 1 meets its total-variation floor") {
  Rng rng(1729, 6);
  const std::uint64_t trials = 4000;
  auto rep = inclusion_pipeline(8, 1, 3, trials, rng, 1);
  CHECK(rep.used_case == 1);
  REQUIRE(rep.tv_exact);
  double tv = rep.tv.get_d();
  double se = std::sqrt(tv * (1 - tv) / static_cast<double>(trials));
  CHECK(rep.inclusion_rate >= 1 - tv - 4 * se);
}

TEST_CASE("inclusion pipeline validates degrees") {
  Rng rng(1, 7);
  CHECK_THROWS_AS(inclusion_pipeline(8, 3, 3, 10, rng), Error);
  CHECK_THROWS_AS(inclusion_pipeline(8, 5, 3, 10, rng), Error);
  CHECK_THROWS_AS(inclusion_pipeline(7, 1, 3, 10, rng), Error);
}
