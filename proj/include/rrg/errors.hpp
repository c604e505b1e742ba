#pragma once

#include <stdexcept>
#include <string>

namespace rrg {

// Stable error codes. The C API exposes these verbatim; the CLI maps
// precondition violations to exit code 2 and budget/termination issues to 3.
enum class errc : int {
  ok = 0,
  invalid_argument = 1,
  parity_violation = 2,
  odd_n = 3,
  shared_edge = 4,
  edge_already_present = 5,
  degree_exceeded = 6,
  not_a_permutation = 7,
  cap_exceeded = 8,
  rejection_budget_exceeded = 9,
  non_termination = 10,
  hypothesis_violated = 11,
  degenerate_x = 12,
  sparse_cells = 13,
  empty_support = 14,
  infeasible_flow = 15,
  not_regular = 16,
  parse_error = 17,
  io_error = 18,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace rrg
