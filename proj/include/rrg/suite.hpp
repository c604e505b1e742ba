#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rrg::suite {

struct CriterionResult {
  int id = 0;
  std::string name;    // token accepted by --only
  bool pass = false;
  std::string detail;  // measured values vs references
  double seconds = 0;
};

struct SuiteResult {
  std::string name;  // "acceptance" or "calibration"
  std::vector<CriterionResult> criteria;
  int passed = 0;
  int failed = 0;
};

using Progress = std::function<void(const CriterionResult&)>;

// Empty `only` runs everything; otherwise it must match one criterion
// token exactly. Every criterion draws from its own seed stream, so a
// subset run reproduces the full run's numbers.
SuiteResult run_acceptance(const std::string& only, std::uint64_t seed,
                           const Progress& progress = {});
SuiteResult run_calibration(const std::string& only, std::uint64_t seed,
                            const Progress& progress = {});

std::vector<std::string> acceptance_tokens();
std::vector<std::string> calibration_tokens();

}  // namespace rrg::suite
