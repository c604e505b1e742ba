#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rrg {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic stream family: (master_seed, stream_index) fixes the whole
// sequence. Trial t always uses stream t, so results do not depend on how
// trials are partitioned across workers.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t s = master_seed ^ 0xD1B54A32D192ED03ull;
    splitmix64(s);
    s ^= 0x9E6C63D0876A90EDull * (stream_index + 1);
    std::uint64_t init[4];
    for (auto& w : init) w = splitmix64(s);
    std::seed_seq seq{init[0], init[1], init[2], init[3]};
    gen_.seed(seq);
  }

  std::uint64_t bits() { return gen_(); }

  // Unbiased integer in [0, n); rejection keeps the law exact.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t mask = ~0ull;
    if (n == 0) return 0;
    std::uint64_t limit = ~0ull - (~0ull % n) - 1;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v > limit);
    (void)mask;
    return v % n;
  }

  double unit() {  // uniform in [0,1) with 53 random bits
    return (gen_() >> 11) * 0x1.0p-53;
  }

  // In-place Fisher-Yates; identity stays reachable with probability 1/n!.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

  // Inversion sampler; fine for the small rates used here.
  int poisson(double lambda);

 private:
  std::mt19937_64 gen_;
};

}  // namespace rrg
