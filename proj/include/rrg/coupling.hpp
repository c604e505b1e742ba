#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"
#include "rrg/rational.hpp"
#include "rrg/rng.hpp"

namespace rrg::coupling {

// A joint distribution over pairs of labelled outcomes whose row sums equal
// the left marginal and column sums the right marginal, exactly.
struct CouplingTable {
  std::vector<std::string> left_labels, right_labels;
  std::vector<Rat> left_marginal, right_marginal;
  std::map<std::pair<int, int>, Rat> joint;

  // Total mass on cells whose two labels coincide.
  Rat diagonal_mass() const;
  void verify_marginals() const;  // exact; throws on any mismatch
  std::pair<int, int> sample(Rng& rng) const;  // inverse CDF in index order
};

CouplingTable maximal_coupling(const std::vector<std::string>& labels,
                               const std::vector<Rat>& p,
                               const std::vector<Rat>& q);
CouplingTable maximal_coupling(const oracle::Distribution& p,
                               const oracle::Distribution& q);
CouplingTable maximal_coupling(const oracle::ClassDistribution& p,
                               const oracle::ClassDistribution& q);

struct StrassenResult {
  CouplingTable table;
  Rat delta, eps, bound;  // bound = 2*delta + eps/(1-eps)
  Rat violation;          // coupling mass off the edge set
  std::int64_t s_size = 0, t_size = 0, edge_count = 0;
};

// Mass-transport coupling of the uniform distributions on the two sides of
// a bipartite graph; adjacency[i] lists the T-neighbours of the i-th
// S-vertex. (delta, eps) are extracted from the degree profile to minimize
// 2*delta + eps/(1-eps) subject to the degree hypotheses; the flow
// construction then has to place at least 1 - bound mass on edges.
StrassenResult strassen_coupling(const std::vector<std::vector<int>>& adjacency,
                                 std::int64_t t_size);

// Fraction of S-vertices (resp. T-vertices) below the (1-eps)-mean degree
// threshold; the pair must satisfy the hypothesis for the extracted delta.
struct StrassenProfile {
  Rat delta_s, delta_t;
};
StrassenProfile strassen_profile(const std::vector<std::int64_t>& s_degrees,
                                 const std::vector<std::int64_t>& t_degrees,
                                 std::int64_t edges, const Rat& eps);

struct ExtensionReport {
  int n = 0, d = 0;
  bool exact = false;
  Rat tv;                  // exact path only
  Rat delta, eps, bound;   // degree-profile extraction on the pair graph
  Rat flow_violation;      // explicit flow construction (small cases)
  bool flow_ran = false;
  double tv_estimate = 0;  // MC path
  double mean_extensions = 0;
  std::uint64_t trials = 0;
};

// The inclusion-pair bipartite structure between unions G_d u M and the
// (d+1)-regular graphs: exact distances at oracle sizes, estimated degree
// profiles beyond them.
ExtensionReport matching_extension_coupling(int n, int d,
                                            std::uint64_t trials, Rng& rng);

struct AspResult {
  Graph unioned;
  std::vector<std::string> classes;  // canonical keys of Y_1..Y_k
  std::uint64_t class_redraws = 0;   // infeasible class tuples abandoned
};

// Draws Y_1..Y_k i.i.d. from the class law of nu_d, then representatives
// uniform on their classes conditioned pairwise edge-disjoint (joint
// rejection; a tuple that exhausts its budget is redrawn wholesale).
AspResult asp_sample(int n, int d, int k, Rng& rng);

struct ZetaState {
  int i = 0;
  std::vector<Rat> zeta;  // over the common class index
  Rat Z;                  // sum of zeta
  Rat product;            // Z_1 * ... * Z_i
};

struct ZetaTrace {
  std::vector<std::string> labels;
  std::vector<Rat> mu, nu;         // the two input measures
  std::vector<ZetaState> states;   // i = 1..k
  int k = 0;                       // least k with product <= epsilon
  Rat miss_probability;            // Z_1 * ... * Z_k, exact
};

ZetaTrace zeta_recursion(const std::vector<std::string>& labels,
                         const std::vector<Rat>& mu, const std::vector<Rat>& nu,
                         const Rat& epsilon);
ZetaTrace zeta_coupling(const oracle::ClassDistribution& bar_mu,
                        const oracle::ClassDistribution& bar_nu,
                        const Rat& epsilon);

struct ZetaSample {
  bool hit = false;
  int step = 0;                  // 1-based step of the match
  int class_index = 0;           // index into trace.labels (X's class)
  std::vector<int> y_classes;    // the k i.i.d. draws from nu
};

// Sequential coupling sampler materialized from a trace; misses with
// probability exactly trace.miss_probability.
ZetaSample zeta_sample(const ZetaTrace& trace, Rng& rng);

struct CompleteCoupleResult {
  Graph g;       // distributed as mu_d
  Graph g_oplus; // union of the k ASP representatives
  bool hit = false;
  int k = 0;
};

// Couples G ~ mu_d with the ASP union via the zeta chain: on a hit the
// matched representative is G itself, so G is a subgraph of the union.
CompleteCoupleResult complete_couple(int n, int d, const Rat& epsilon,
                                     Rng& rng);

struct InclusionReport {
  int n = 0, d1 = 0, d2 = 0;
  std::uint64_t trials = 0, included = 0;
  double inclusion_rate = 0;
  std::vector<std::string> g1_class_keys;
  std::vector<Int> g1_class_sizes;
  std::vector<std::uint64_t> g1_class_counts;  // observed G1 classes
  bool tv_exact = false;
  Rat tv;              // exact TV(mu_d1 (+) nu_{d2-d1}, mu_{d2}) when n small
  Rat transport_value; // fraction of mass the class plan could route
  int used_case = 2;
};

// End-to-end monotone coupling (G1, G2) with G1 ~ mu_d1 and G2 ~ mu_d2.
// Case 2 routes a class-level transport plan between the two class laws and
// realizes each pair by a shared relabelling, so inclusion holds on every
// draw the plan covers. Case 1 composes complete_couple with a matching
// extension and a final maximal coupling.
InclusionReport inclusion_pipeline(int n, int d1, int d2,
                                   std::uint64_t trials, Rng& rng,
                                   int which_case = 2,
                                   const Rat& epsilon = Rat(3, 10));

}  // namespace rrg::coupling
