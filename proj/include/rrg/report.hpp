#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rrg/rational.hpp"

namespace rrg::report {

using Json = nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Accepts "7", "3/10", and decimal strings like "0.05"; all exact.
Rat parse_rational(const std::string& text);

// One JSON object per run. The exact configuration that produced a report
// is embedded along with its content hash, so identical (config, build)
// pairs serialize byte-identically.
class ReportBuilder {
 public:
  ReportBuilder(std::string command, Json params, std::uint64_t seed,
                int workers);

  void estimate(const std::string& name, double value, double se);
  void reference(const std::string& name, const Rat& value);
  void reference(const std::string& name, const Json& value);
  void set(const std::string& key, const Json& value);

  Json finish() const;

 private:
  Json root_;
};

// The caps block every report embeds.
Json config_block();

std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Single entry point behind the C API. config:
//   {"command": "sample|count|tv|couple|experiment|suite",
//    "params": {...}, "seed": 1729, "workers": 1}
// Returns the full report. Errors surface as rrg::Error.
Json run_command(const Json& config);

inline constexpr std::uint64_t kDefaultSeed = 1729;

}  // namespace rrg::report
