#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "rrg/errors.hpp"
#include "rrg/rng.hpp"
#include "rrg/stats.hpp"

using namespace rrg;
using namespace rrg::stats;

namespace {

// Series/continued-fraction evaluation of the regularized upper gamma tail,
// independent of the library's implementation.
double gamma_q_ref(double a, double x) {
  if (x <= 0) return 1.0;
  double lg = std::lgamma(a);
  if (x < a + 1) {
    // Lower series, then complement.
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  // Upper continued fraction (Lentz).
  double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int k = 1; k < 500; ++k) {
    double an = -static_cast<double>(k) * (k - a);
    b += 2;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

double chi_square_p_ref(double x, int dof) {
  return gamma_q_ref(dof / 2.0, x / 2.0);
}

}  // namespace

TEST_CASE("chi-square tail matches an independent gamma evaluation") {
  for (int dof : {1, 2, 5, 9, 20, 100}) {
    for (double x : {0.1, 0.5, 1.0, 3.0, 9.0, 25.0, 80.0, 150.0}) {
      double lib = 1.0 - chi_square_cdf(x, dof);
      double ref = chi_square_p_ref(x, dof);
      CHECK(lib == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("chi-square quantile inverts the cdf") {
  for (int dof : {1, 3, 10}) {
    for (double p : {0.01, 0.5, 0.95, 0.999}) {
      double q = chi_square_quantile(p, dof);
      CHECK(chi_square_cdf(q, dof) == doctest::Approx(p).epsilon(1e-8));
    }
  }
}

TEST_CASE("uniform chi-square: balanced counts give p near one") {
  std::vector<std::uint64_t> counts(10, 1000);
  auto rep = chi_square_uniform(counts);
  CHECK(rep.dof == 9);
  CHECK(rep.statistic == doctest::Approx(0.0));
  CHECK(rep.p_value == doctest::Approx(1.0));
}

TEST_CASE("uniform chi-square: mass on one cell is rejected hard") {
  std::vector<std::uint64_t> counts(10, 0);
  counts[0] = 100;
  auto rep = chi_square_uniform(counts);
  CHECK(rep.p_value < 1e-6);
}

TEST_CASE("uniform chi-square enforces the sparse-cell floor") {
  std::vector<std::uint64_t> counts(10, 4);  // 40 < 5 * 10
  CHECK_THROWS_AS(chi_square_uniform(counts), Error);
}

TEST_CASE("expected-probability chi-square validates its null") {
  std::vector<std::uint64_t> counts = {50, 50};
  CHECK_THROWS_AS(chi_square_expected(counts, {0.5, 0.4}), Error);
  auto rep = chi_square_expected(counts, {0.5, 0.5});
  CHECK(rep.dof == 1);
  CHECK(rep.p_value == doctest::Approx(1.0));
  auto skewed = chi_square_expected({90, 10}, {0.5, 0.5});
  CHECK(skewed.p_value < 1e-6);
}

TEST_CASE("poisson fit accepts its own law and rejects a point mass") {
  // Exact Poisson(0.5) expectations scaled to 1e5, rounded.
  const double lambda = 0.5;
  const std::uint64_t total = 100000;
  std::vector<std::uint64_t> counts;
  double p = std::exp(-lambda);
  double acc = 0;
  for (int k = 0; k < 8; ++k) {
    counts.push_back(static_cast<std::uint64_t>(p * total + 0.5));
    acc += p;
    p *= lambda / (k + 1);
  }
  auto rep = poisson_fit(counts, lambda);
  CHECK(rep.p_value > 0.99);

  std::vector<std::uint64_t> point = {100000};
  auto bad = poisson_fit(point, 6.0);
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("poisson fit tail-bins so expected cells stay above five") {
  // lambda = 0.5 at 1000 draws: cells beyond k = 3 expect < 5 and must be
  // merged, so the report's cell count is small and fixed.
  std::vector<std::uint64_t> counts = {607, 303, 76, 12, 2};
  auto rep = poisson_fit(counts, 0.5);
  CHECK(rep.cells <= 4);
  CHECK(rep.p_value > 1e-3);
}

TEST_CASE("empirical tv: identical and disjoint histograms") {
  std::map<std::string, std::uint64_t> a = {{"x", 500}, {"y", 500}};
  auto same = empirical_tv(a, a);
  CHECK(same.tv == doctest::Approx(0.0));
  CHECK(same.support == 2);

  std::map<std::string, std::uint64_t> b = {{"z", 1000}};
  auto far = empirical_tv(a, b);
  CHECK(far.tv == doctest::Approx(1.0));
  CHECK(far.support == 3);
}

TEST_CASE("empirical vs exact tv: exact keys missing from the sample count") {
  std::map<std::string, std::uint64_t> hist = {{"x", 600}, {"y", 400}};
  std::map<std::string, double> exact = {{"x", 0.6}, {"y", 0.4}};
  auto fit = empirical_vs_exact_tv(hist, exact);
  CHECK(fit.tv == doctest::Approx(0.0));

  std::map<std::string, double> other = {{"w", 1.0}};
  auto far = empirical_vs_exact_tv(hist, other);
  CHECK(far.tv == doctest::Approx(1.0));
}

TEST_CASE("tv bias bound shrinks with trials") {
  Rng rng(7, 0);
  std::map<std::string, std::uint64_t> small, big;
  for (int i = 0; i < 1000; ++i) small[std::to_string(rng.below(10))] += 1;
  for (int i = 0; i < 100000; ++i) big[std::to_string(rng.below(10))] += 1;
  auto s = empirical_tv(small, small);
  auto b = empirical_tv(big, big);
  CHECK(b.bias_bound < s.bias_bound);
  CHECK(s.bias_bound > 0);
}

TEST_CASE("wilson interval brackets the point estimate and stays in [0,1]") {
  auto w = wilson(50, 100, 3.0);
  CHECK(w.lo < w.center);
  CHECK(w.center < w.hi);
  CHECK(w.center == doctest::Approx(0.5).epsilon(1e-12));
  auto edge = wilson(0, 100, 3.0);
  CHECK(edge.lo >= 0.0);
  CHECK(edge.hi > 0.0);
  auto full = wilson(100, 100, 3.0);
  CHECK(full.hi <= 1.0);
  CHECK(full.lo < 1.0);
}

TEST_CASE("ks distance: evenly spread sample is close, clumped is far") {
  std::vector<double> grid;
  const int m = 1000;
  for (int i = 0; i < m; ++i) grid.push_back((i + 0.5) / m);
  CHECK(ks_uniform(grid) <= 0.5 / m + 1e-12);

  std::vector<double> clump(100, 0.99);
  CHECK(ks_uniform(clump) > 0.9);
}
