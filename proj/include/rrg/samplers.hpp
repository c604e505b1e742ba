#pragma once

#include <cstdint>
#include <vector>

#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"
#include "rrg/rng.hpp"

namespace rrg::samplers {

// Configuration model with whole-pairing rejection: exactly uniform on
// G_d(n). Throws RejectionBudgetExceeded when no simple pairing shows up
// within the budget (acceptance decays like exp(-(d-1)/2 - (d-1)^2/4)).
Graph sample_regular(int n, int d, Rng& rng, std::uint64_t budget = 0);

// Uniform perfect matching: repeatedly pair the least unmatched vertex
// with a uniformly random unmatched partner.
Graph sample_matching(int n, Rng& rng);

struct OplusSample {
  Graph unioned;
  std::vector<Graph> components;
  std::uint64_t attempts = 0;  // joint draws used, including the accepted one
};

// Independent draws of every part conditioned on pairwise edge-disjointness.
// A clash redraws all parts: resampling only the clashing part would bias
// the law.
OplusSample sample_oplus(const oracle::MeasureExpr& parts, int n, Rng& rng,
                         std::uint64_t budget = 0);

struct NuSample {
  Graph graph;
  std::vector<Graph> factors;  // witness ordered 1-factorisation
  std::uint64_t attempts = 0;
};

// nu_d: d uniform perfect matchings conditioned pairwise disjoint.
NuSample sample_nu(int n, int d, Rng& rng, std::uint64_t budget = 0);

struct OverlayResult {
  bool disjoint = false;
  int repeated_edges = 0;        // distinct edges landing in >= 2 skeletons
  std::vector<Graph> placed;     // skeletons after relabeling
};

// Random relabeling overlay: the first skeleton keeps its labels (only
// relative placement matters), the rest get independent uniform relabels.
OverlayResult overlay(const std::vector<Graph>& skeletons, Rng& rng);

}  // namespace rrg::samplers
