#include "rrg/estimators.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "rrg/counting.hpp"
#include "rrg/graph.hpp"
#include "rrg/rng.hpp"
#include "rrg/samplers.hpp"

namespace rrg::estimators {
namespace {

struct BlockSums {
  double sx = 0, sxx = 0, sy = 0, syy = 0, sxy = 0;
  double sx3 = 0, sx4 = 0;  // for factorial moments up to k = 4
  double tail = 0;          // indicator sums for concentration tails
  std::uint64_t cnt = 0;
};

struct Totals : BlockSums {};

Totals aggregate(const std::vector<BlockSums>& blocks) {
  Totals t;
  for (const auto& b : blocks) {
    t.sx += b.sx;
    t.sxx += b.sxx;
    t.sy += b.sy;
    t.syy += b.syy;
    t.sxy += b.sxy;
    t.sx3 += b.sx3;
    t.sx4 += b.sx4;
    t.tail += b.tail;
    t.cnt += b.cnt;
  }
  return t;
}

Totals minus(const Totals& t, const BlockSums& b) {
  Totals r = t;
  r.sx -= b.sx;
  r.sxx -= b.sxx;
  r.sy -= b.sy;
  r.syy -= b.syy;
  r.sxy -= b.sxy;
  r.sx3 -= b.sx3;
  r.sx4 -= b.sx4;
  r.tail -= b.tail;
  r.cnt -= b.cnt;
  return r;
}

// Delete-1 jackknife over blocks for any functional of the totals.
template <typename F>
std::pair<double, double> jackknife(const std::vector<BlockSums>& blocks,
                                    F f) {
  Totals full = aggregate(blocks);
  double theta = f(full);
  std::size_t nb = blocks.size();
  if (nb < 2) return {theta, 0.0};
  double mean_loo = 0;
  std::vector<double> loo(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    loo[i] = f(minus(full, blocks[i]));
    mean_loo += loo[i];
  }
  mean_loo /= static_cast<double>(nb);
  double ss = 0;
  for (std::size_t i = 0; i < nb; ++i) {
    double c = loo[i] - mean_loo;
    ss += c * c;
  }
  double var = ss * (static_cast<double>(nb) - 1.0) / static_cast<double>(nb);
  return {theta, std::sqrt(var)};
}

int pick_block(std::uint64_t trials, int block) {
  require(trials >= 2, errc::invalid_argument, "need at least 2 trials");
  std::uint64_t b = static_cast<std::uint64_t>(block);
  if (b < 1) b = 1;
  while (b > 1 && trials / b < 2) b /= 10;  // keep at least 2 blocks
  if (trials / b < 2) b = trials / 2;
  return static_cast<int>(b);
}

// One sampling pass: per-trial streams so results are independent of any
// execution order and reproducible trial-by-trial.
std::vector<BlockSums> collect(int n, int d, bool need_x, bool need_y,
                               std::uint64_t trials, std::uint64_t seed,
                               std::uint64_t stream_base, int block,
                               double tail_threshold = -1,
                               double tail_center = 0) {
  std::vector<BlockSums> blocks;
  blocks.reserve(static_cast<std::size_t>(trials / block + 2));
  BlockSums cur;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(seed, stream_base + t);
    Graph g = samplers::sample_regular(n, d, rng);
    double x = 0, y = 0;
    if (need_x) x = static_cast<double>(count_triangles(g));
    if (need_y) y = static_cast<double>(count_perfect_matchings(g));
    cur.sx += x;
    cur.sxx += x * x;
    cur.sx3 += x * x * x;
    cur.sx4 += x * x * x * x;
    cur.sy += y;
    cur.syy += y * y;
    cur.sxy += x * y;
    if (tail_threshold >= 0) {
      double dev = std::fabs((need_y ? y : x) - tail_center);
      if (dev >= tail_threshold) cur.tail += 1;
    }
    cur.cnt += 1;
    if (cur.cnt == static_cast<std::uint64_t>(block)) {
      blocks.push_back(cur);
      cur = BlockSums{};
    }
  }
  if (cur.cnt > 0) blocks.push_back(cur);
  return blocks;
}

double mean_x(const Totals& t) { return t.sx / static_cast<double>(t.cnt); }
double mean_y(const Totals& t) { return t.sy / static_cast<double>(t.cnt); }

double var_of(double s1, double s2, double cnt) {
  double m = s1 / cnt;
  double v = s2 / cnt - m * m;
  return v > 0 ? v : 0;
}

double var_x(const Totals& t) {
  return var_of(t.sx, t.sxx, static_cast<double>(t.cnt));
}
double var_y(const Totals& t) {
  return var_of(t.sy, t.syy, static_cast<double>(t.cnt));
}
double cov_xy(const Totals& t) {
  double c = static_cast<double>(t.cnt);
  return t.sxy / c - (t.sx / c) * (t.sy / c);
}

ScalarMoments scalar_moments(const std::vector<BlockSums>& blocks, bool use_y) {
  ScalarMoments m;
  auto [mu, se_mu] = jackknife(blocks, [&](const Totals& t) {
    return use_y ? mean_y(t) : mean_x(t);
  });
  auto [v, se_v] = jackknife(blocks, [&](const Totals& t) {
    return use_y ? var_y(t) : var_x(t);
  });
  auto [m2, se_m2] = jackknife(blocks, [&](const Totals& t) {
    return (use_y ? t.syy : t.sxx) / static_cast<double>(t.cnt);
  });
  m.mean = mu;
  m.se_mean = se_mu;
  m.variance = v;
  m.se_variance = se_v;
  m.second_moment = m2;
  m.se_second = se_m2;
  return m;
}

}  // namespace

MomentEstimates estimate_moments(int n, int d, Statistic statistic,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t stream_base, int block) {
  block = pick_block(trials, block);
  bool need_x = statistic != Statistic::PM;
  bool need_y = statistic != Statistic::TRIANGLES;
  auto blocks =
      collect(n, d, need_x, need_y, trials, seed, stream_base, block);
  MomentEstimates out;
  out.statistic = statistic;
  out.trials = trials;
  out.blocks = static_cast<int>(blocks.size());
  if (need_x) out.x = scalar_moments(blocks, false);
  if (need_y) out.y = scalar_moments(blocks, true);
  if (statistic == Statistic::JOINT) {
    auto [c, se_c] = jackknife(blocks, cov_xy);
    out.cov_xy = c;
    out.se_cov = se_c;
  }
  return out;
}

ProjectionCoefficients janson_projection(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
  require(xs.size() == ys.size() && !xs.empty(), errc::invalid_argument,
          "projection needs paired samples");
  double cnt = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double vx = var_of(sx, sxx, cnt);
  require(vx > 0, errc::degenerate_x, "X has zero sample variance");
  double cxy = sxy / cnt - (sx / cnt) * (sy / cnt);
  ProjectionCoefficients out;
  out.a = cxy / vx;
  out.b = sy / cnt - out.a * sx / cnt;
  // corr(Y - aX - b, X) in one pass: Cov(Y - aX, X) = Cov(X,Y) - a Var(X).
  double cov_res = cxy - out.a * vx;
  double vy = var_of(sy, syy, cnt);
  double var_res = vy - 2 * out.a * cxy + out.a * out.a * vx;
  double denom = std::sqrt(var_res > 0 ? var_res * vx : 0);
  out.residual_corr = denom > 0 ? cov_res / denom : 0.0;
  return out;
}

FactorialMomentReport factorial_moment_check(int n, int d, int k,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             std::uint64_t stream_base) {
  require(k >= 2 && k <= 4, errc::invalid_argument, "k must be 2, 3 or 4");
  int block = pick_block(trials, 1000);
  auto blocks =
      collect(n, d, true, false, trials, seed, stream_base, block);
  auto moment_k = [k](const Totals& t) {
    double c = static_cast<double>(t.cnt);
    switch (k) {
      case 2: return t.sxx / c;
      case 3: return t.sx3 / c;
      default: return t.sx4 / c;
    }
  };
  auto [mk, se_mk] = jackknife(blocks, moment_k);
  double ex = std::pow(static_cast<double>(d - 1), 3) / 6.0;
  double choose2 = static_cast<double>(k) * (k - 1) / 2.0;
  FactorialMomentReport out;
  out.k = k;
  out.trials = trials;
  out.sample_moment = mk;
  out.se = se_mk;
  out.prediction = std::pow(ex, k) + choose2 * std::pow(ex, k - 1);
  out.unit = std::pow(ex, k - 2);
  out.discrepancy = mk - out.prediction;
  return out;
}

ConcentrationReport concentration_experiment(int n, int d, double exponent,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             std::uint64_t stream_base) {
  require(trials >= 4, errc::invalid_argument, "too few trials");
  // First pass on its own stream range: the centre Ybar must not be fitted
  // on the same draws whose tail behaviour it thresholds.
  std::uint64_t first = trials / 2;
  std::uint64_t second = trials - first;
  int block = pick_block(second, 1000);
  auto pass1 = collect(n, d, false, true, first, seed, stream_base,
                       pick_block(first, 1000));
  double ybar = mean_y(aggregate(pass1));
  double threshold = std::pow(static_cast<double>(d), -exponent) * ybar;
  auto pass2 = collect(n, d, false, true, second, seed, stream_base + first,
                       block, threshold, ybar);
  ConcentrationReport out;
  out.trials = trials;
  out.ybar_first_pass = ybar;
  out.threshold = threshold;
  auto [tf, se_tf] = jackknife(pass2, [](const Totals& t) {
    return t.tail / static_cast<double>(t.cnt);
  });
  out.tail_freq = tf;
  out.se_tail = se_tf;
  auto [rv, se_rv] = jackknife(pass2, [](const Totals& t) {
    double m = mean_y(t);
    return m != 0 ? var_y(t) / (m * m) : 0.0;
  });
  out.relvar = rv;
  out.se_relvar = se_rv;
  out.reference = 1.0 / (6.0 * std::pow(static_cast<double>(d), 3));
  return out;
}

ResidualVarianceReport residual_variance_experiment(int n, int d,
                                                    std::uint64_t trials,
                                                    std::uint64_t seed,
                                                    std::uint64_t stream_base) {
  require(trials >= 4, errc::invalid_argument, "too few trials");
  int block = pick_block(trials, 1000);
  auto blocks = collect(n, d, true, true, trials, seed, stream_base, block);
  Totals full = aggregate(blocks);
  double vx = var_x(full);
  require(vx > 0, errc::degenerate_x, "X has zero sample variance");
  double vy = var_y(full);
  double cxy = cov_xy(full);
  ResidualVarianceReport out;
  out.trials = trials;
  out.a = cxy / vx;
  out.b = mean_y(full) - out.a * mean_x(full);
  out.var_y = vy;
  // Var[Y - aX - b] with the fitted a: vy - a^2 vx, the projection identity.
  out.var_residual = vy - out.a * out.a * vx;
  double my = mean_y(full);
  out.relvar_y = my != 0 ? vy / (my * my) : 0;
  out.relvar_residual = my != 0 ? out.var_residual / (my * my) : 0;
  out.ratio = vy > 0 ? out.var_residual / vy : 0;
  // Orthogonality, held out: fit on the first half of the blocks, then
  // measure Cov(Y*, Y* - Y) on the second half with jackknife error bars.
  std::size_t half = blocks.size() / 2;
  if (half >= 1 && blocks.size() - half >= 2) {
    Totals head = aggregate(
        std::vector<BlockSums>(blocks.begin(), blocks.begin() + half));
    double vx1 = var_x(head);
    if (vx1 > 0) {
      double a1 = cov_xy(head) / vx1;
      double b1 = mean_y(head) - a1 * mean_x(head);
      std::vector<BlockSums> tail_blocks(blocks.begin() + half, blocks.end());
      auto cov_fn = [a1, b1](const Totals& t) {
        double c = static_cast<double>(t.cnt);
        // Y* = a1 X + b1; Cov(Y*, Y* - Y) = a1^2 Var X - a1 Cov(X,Y).
        double vxt = var_of(t.sx, t.sxx, c);
        double cxyt = t.sxy / c - (t.sx / c) * (t.sy / c);
        return a1 * a1 * vxt - a1 * cxyt;
      };
      auto [cc, se_cc] = jackknife(tail_blocks, cov_fn);
      out.cov_check = cc;
      out.se_cov_check = se_cc;
    }
  }
  return out;
}

}  // namespace rrg::estimators
