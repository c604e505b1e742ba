#include "rrg/rng.hpp"

#include <cmath>

namespace rrg {

int Rng::poisson(double lambda) {
  // CDF inversion; lambda stays small in this codebase (repeated-edge
  // counts), so the loop terminates quickly.
  double u = unit();
  double p = std::exp(-lambda);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 10'000) {
    ++k;
    p *= lambda / k;
    cdf += p;
  }
  return k;
}

}  // namespace rrg
