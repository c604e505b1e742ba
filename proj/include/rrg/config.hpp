#pragma once

#include <cstdint>

namespace rrg {

// Central knobs. Every cap fails loudly when exceeded; nothing silently
// degrades to an approximation.
struct Config {
  // Exact-enumeration paths refuse instances beyond these.
  int oracle_n_cap = 12;
  int oracle_degree_cap = 5;       // total degree of a measure expression
  int pm_count_n_cap = 28;
  int one_fact_n_cap = 16;
  // Distribution materialization refuses beyond this many atoms.
  std::uint64_t support_cap = 4'000'000;

  // Rejection samplers abort after this many failed attempts.
  std::uint64_t rejection_budget = 1'000'000;

  // Iterative couplings abort after this many rounds.
  int max_coupling_rounds = 10'000;

  // Degree-count estimate: hypothesis threshold, must lie in (0, 2/3).
  double mckay_eps = 0.66;

  // Conditional edge probability: warn when |E(h)| exceeds dn/2.
  bool flag_dense_h = true;

  // Dense bit-matrix rows are kept only up to this vertex count; beyond it
  // the graph stores sorted adjacency lists alone.
  int dense_bitrows_cap = 4096;

  // Largest n the samplers accept.
  int sample_n_cap = 1'000'000;

  static const Config& global();
};

}  // namespace rrg
