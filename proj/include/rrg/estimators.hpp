#pragma once

#include <cstdint>
#include <vector>

#include "rrg/errors.hpp"

namespace rrg::estimators {

enum class Statistic { PM, TRIANGLES, JOINT };

struct ScalarMoments {
  double mean = 0, variance = 0, second_moment = 0;
  double se_mean = 0, se_variance = 0, se_second = 0;
};

struct MomentEstimates {
  Statistic statistic = Statistic::TRIANGLES;
  std::uint64_t trials = 0;
  int blocks = 0;
  ScalarMoments x;  // triangle count (TRIANGLES, JOINT)
  ScalarMoments y;  // perfect-matching count (PM, JOINT)
  double cov_xy = 0, se_cov = 0;  // JOINT only
};

// Monte Carlo moments of X = #triangles and/or Y = #perfect matchings of
// G(n,d); standard errors by delete-1 jackknife over trial blocks.
MomentEstimates estimate_moments(int n, int d, Statistic statistic,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t stream_base = 0,
                                 int block = 1000);

struct ProjectionCoefficients {
  double a = 0, b = 0;
  double residual_corr = 0;  // sample corr(Y - Y*, X); zero up to arithmetic
};

// Least-squares projection Y* = aX + b from joint samples.
ProjectionCoefficients janson_projection(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

struct FactorialMomentReport {
  int k = 0;
  double sample_moment = 0, se = 0;
  double prediction = 0;    // EX^k + C(k,2) EX^(k-1), EX = (d-1)^3/6
  double unit = 0;          // EX^(k-2): the predicted error scale
  double discrepancy = 0;   // sample - prediction
  std::uint64_t trials = 0;
};

FactorialMomentReport factorial_moment_check(int n, int d, int k,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             std::uint64_t stream_base = 0);

struct ConcentrationReport {
  double ybar_first_pass = 0;   // from an independent stream block
  double threshold = 0;         // d^(-exponent) * ybar
  double tail_freq = 0, se_tail = 0;
  double relvar = 0, se_relvar = 0;  // Var[Y] / mean[Y]^2
  double reference = 0;              // 1 / (6 d^3)
  std::uint64_t trials = 0;
};

ConcentrationReport concentration_experiment(int n, int d, double exponent,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             std::uint64_t stream_base = 0);

struct ResidualVarianceReport {
  double a = 0, b = 0;
  double var_y = 0, var_residual = 0;
  double relvar_y = 0, relvar_residual = 0;  // over mean[Y]^2
  double ratio = 0;                          // var_residual / var_y
  // Out-of-sample orthogonality: a,b fitted on the first half, covariance
  // measured on the second half (in-sample it is an algebraic zero).
  double cov_check = 0, se_cov_check = 0;
  std::uint64_t trials = 0;
};

ResidualVarianceReport residual_variance_experiment(int n, int d,
                                                    std::uint64_t trials,
                                                    std::uint64_t seed,
                                                    std::uint64_t stream_base = 0);

}  // namespace rrg::estimators
