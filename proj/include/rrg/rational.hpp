#pragma once

#include <gmpxx.h>

#include <string>

namespace rrg {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num);
  r /= Rat(den);
  return r;
}

inline std::string rat_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double rat_double(const Rat& r) { return r.get_d(); }

inline Int double_factorial(int n) {
  Int r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

inline Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace rrg
