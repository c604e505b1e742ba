#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rrg/errors.hpp"

namespace rrg::stats {

struct GofReport {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  std::uint64_t trials = 0;
  int cells = 0;  // after any binning
};

// Regularized gamma tail Q(a, x); chi-square upper p-value is Q(dof/2, x/2).
double chi_square_cdf(double x, int dof);
double chi_square_quantile(double p, int dof);

// Null: all cells equally likely. Needs sum(counts) >= 5 * cells.
GofReport chi_square_uniform(const std::vector<std::uint64_t>& counts);

// Null: cell i has probability expected[i] (must sum to 1 within 1e-9).
GofReport chi_square_expected(const std::vector<std::uint64_t>& counts,
                              const std::vector<double>& expected);

// Histogram over {0,1,2,...}; lambda is fixed a priori, never fitted.
// Upper values are tail-binned so every expected cell is >= 5.
GofReport poisson_fit(const std::vector<std::uint64_t>& counts_by_value,
                      double lambda);

struct TvEstimate {
  double tv = 0;
  // Upward bias bound for the plug-in estimator, O(sqrt(support/trials)):
  // normal-approximation mean plus a 3-sigma bounded-difference margin.
  double bias_bound = 0;
  std::uint64_t trials_p = 0;
  std::uint64_t trials_q = 0;
  std::size_t support = 0;
};

// Plug-in TV between two empirical histograms over string keys.
TvEstimate empirical_tv(const std::map<std::string, std::uint64_t>& hist_p,
                        const std::map<std::string, std::uint64_t>& hist_q);

// Plug-in TV between an empirical histogram and an exact law; keys absent
// from `exact` carry zero mass.
TvEstimate empirical_vs_exact_tv(
    const std::map<std::string, std::uint64_t>& hist,
    const std::map<std::string, double>& exact);

struct WilsonInterval {
  double center = 0;
  double lo = 0;
  double hi = 0;
};
WilsonInterval wilson(std::uint64_t successes, std::uint64_t trials, double z);

// Kolmogorov-Smirnov distance of a sample to U[0,1]; used for p-value
// self-calibration.
double ks_uniform(std::vector<double> values);

}  // namespace rrg::stats
