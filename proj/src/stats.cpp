#include "rrg/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace rrg::stats {

double chi_square_cdf(double x, int dof) {
  require(dof >= 1, errc::invalid_argument, "chi-square needs dof >= 1");
  if (x <= 0) return 0;
  return boost::math::gamma_p(dof / 2.0, x / 2.0);
}

double chi_square_quantile(double p, int dof) {
  require(dof >= 1, errc::invalid_argument, "chi-square needs dof >= 1");
  require(p >= 0 && p < 1, errc::invalid_argument, "quantile needs p in [0,1)");
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(dist, p);
}

static GofReport pearson(const std::vector<double>& observed,
                         const std::vector<double>& expected_counts,
                         std::uint64_t total) {
  GofReport r;
  r.trials = total;
  r.cells = static_cast<int>(observed.size());
  r.dof = r.cells - 1;
  require(r.dof >= 1, errc::invalid_argument, "need at least two cells");
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = expected_counts[i];
    require(e > 0, errc::invalid_argument, "expected count must be positive");
    double diff = observed[i] - e;
    stat += diff * diff / e;
  }
  r.statistic = stat;
  r.p_value = boost::math::gamma_q(r.dof / 2.0, stat / 2.0);
  return r;
}

GofReport chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  require(total >= 5 * counts.size(), errc::sparse_cells,
          "expected cell counts below 5; need sum(counts) >= 5 * cells");
  std::vector<double> obs(counts.begin(), counts.end());
  std::vector<double> exp(counts.size(),
                          static_cast<double>(total) / counts.size());
  return pearson(obs, exp, total);
}

GofReport chi_square_expected(const std::vector<std::uint64_t>& counts,
                              const std::vector<double>& expected) {
  require(counts.size() == expected.size(), errc::invalid_argument,
          "counts and expected must have equal length");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  double psum = 0;
  for (auto p : expected) psum += p;
  require(std::fabs(psum - 1.0) <= 1e-9, errc::invalid_argument,
          "expected probabilities must sum to one");
  std::vector<double> exp(expected.size());
  double emin = 1e300;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    exp[i] = expected[i] * static_cast<double>(total);
    emin = std::min(emin, exp[i]);
  }
  require(emin >= 5.0, errc::sparse_cells,
          "some expected cell count is below 5");
  std::vector<double> obs(counts.begin(), counts.end());
  return pearson(obs, exp, total);
}

GofReport poisson_fit(const std::vector<std::uint64_t>& counts_by_value,
                      double lambda) {
  require(lambda > 0, errc::invalid_argument, "lambda must be positive");
  std::uint64_t total = 0;
  for (auto c : counts_by_value) total += c;
  require(total > 0, errc::invalid_argument, "empty histogram");
  double t = static_cast<double>(total);

  auto pmf = [&](int k) {
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
  };

  // Individual bins 0..b-1 while each expects >= 5 and the remaining tail
  // still expects >= 5; everything from b up is one tail bin.
  std::vector<double> exp_counts;
  std::vector<double> obs_counts;
  double tail_prob = 1.0;
  int b = 0;
  while (true) {
    double pk = pmf(b);
    if (t * pk < 5.0 || t * (tail_prob - pk) < 5.0) break;
    exp_counts.push_back(t * pk);
    obs_counts.push_back(
        b < static_cast<int>(counts_by_value.size())
            ? static_cast<double>(counts_by_value[b])
            : 0.0);
    tail_prob -= pk;
    ++b;
  }
  require(exp_counts.size() >= 1, errc::sparse_cells,
          "too few trials for any Poisson bin at this lambda");
  double tail_obs = 0;
  for (std::size_t k = b; k < counts_by_value.size(); ++k)
    tail_obs += static_cast<double>(counts_by_value[k]);
  exp_counts.push_back(t * tail_prob);
  obs_counts.push_back(tail_obs);
  return pearson(obs_counts, exp_counts, total);
}

static TvEstimate tv_core(const std::map<std::string, double>& p,
                          const std::map<std::string, double>& q,
                          std::uint64_t tp, std::uint64_t tq) {
  TvEstimate r;
  r.trials_p = tp;
  r.trials_q = tq;
  double sum = 0, sqrt_mass = 0;
  auto it = p.begin();
  auto jt = q.begin();
  while (it != p.end() || jt != q.end()) {
    double a = 0, bm = 0;
    if (jt == q.end() || (it != p.end() && it->first < jt->first)) {
      a = it->second;
      ++it;
    } else if (it == p.end() || jt->first < it->first) {
      bm = jt->second;
      ++jt;
    } else {
      a = it->second;
      bm = jt->second;
      ++it;
      ++jt;
    }
    sum += std::fabs(a - bm);
    sqrt_mass += std::sqrt((a + bm) / 2.0);
    ++r.support;
  }
  r.tv = sum / 2;
  // E|p_hat - q_hat| per cell is about sqrt(2/pi) * sd(p_hat - q_hat);
  // summed over cells and capped by Cauchy-Schwarz this gives the mean of
  // the plug-in bias, plus 3x a bounded-difference deviation margin.
  double var_scale = (tp ? 1.0 / tp : 0.0) + (tq ? 1.0 / tq : 0.0);
  double mean_bias = 0.5 * std::sqrt(2.0 / 3.14159265358979323846) *
                     std::sqrt(var_scale) * sqrt_mass;
  double dev = 3.0 * ((tp ? std::sqrt(0.5 / tp) : 0.0) +
                      (tq ? std::sqrt(0.5 / tq) : 0.0));
  r.bias_bound = mean_bias + dev;
  return r;
}

TvEstimate empirical_tv(const std::map<std::string, std::uint64_t>& hist_p,
                        const std::map<std::string, std::uint64_t>& hist_q) {
  std::uint64_t tp = 0, tq = 0;
  for (auto& [k, c] : hist_p) tp += c;
  for (auto& [k, c] : hist_q) tq += c;
  require(tp > 0 && tq > 0, errc::invalid_argument, "empty histogram");
  std::map<std::string, double> p, q;
  for (auto& [k, c] : hist_p) p[k] = static_cast<double>(c) / tp;
  for (auto& [k, c] : hist_q) q[k] = static_cast<double>(c) / tq;
  return tv_core(p, q, tp, tq);
}

TvEstimate empirical_vs_exact_tv(
    const std::map<std::string, std::uint64_t>& hist,
    const std::map<std::string, double>& exact) {
  std::uint64_t tp = 0;
  for (auto& [k, c] : hist) tp += c;
  require(tp > 0, errc::invalid_argument, "empty histogram");
  std::map<std::string, double> p;
  for (auto& [k, c] : hist) p[k] = static_cast<double>(c) / tp;
  return tv_core(p, exact, tp, 0);
}

WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials,
                      double z) {
  require(trials > 0, errc::invalid_argument, "wilson needs trials > 0");
  require(successes <= trials, errc::invalid_argument,
          "successes exceed trials");
  double nT = static_cast<double>(trials);
  double phat = static_cast<double>(successes) / nT;
  double z2 = z * z;
  double denom = 1.0 + z2 / nT;
  WilsonInterval w;
  w.center = (phat + z2 / (2 * nT)) / denom;
  double half =
      z * std::sqrt(phat * (1 - phat) / nT + z2 / (4 * nT * nT)) / denom;
  w.lo = std::max(0.0, w.center - half);
  w.hi = std::min(1.0, w.center + half);
  return w;
}

double ks_uniform(std::vector<double> values) {
  require(!values.empty(), errc::invalid_argument, "empty sample");
  std::sort(values.begin(), values.end());
  double n = static_cast<double>(values.size());
  double ks = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double lo = i / n, hi = (i + 1) / n;
    ks = std::max(ks, std::max(std::fabs(values[i] - lo),
                               std::fabs(values[i] - hi)));
  }
  return ks;
}

}  // namespace rrg::stats
