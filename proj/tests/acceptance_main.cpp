// Runs every acceptance criterion against the shared library and prints one
// PASS/FAIL line per criterion. Exit status 0 iff all pass. The master seed
// is fixed; set RRG_SEED to rerun the whole suite elsewhere in seed space.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "rrg.h"
#include "json.hpp"

namespace {

void print_line(const char* criterion_json, void* /*user*/) {
  auto c = nlohmann::json::parse(criterion_json);
  std::printf("[%2d] %-14s %s  (%.1fs)\n      %s\n", c.at("id").get<int>(),
              c.at("name").get<std::string>().c_str(),
              c.at("pass").get<bool>() ? "PASS" : "FAIL",
              c.at("seconds").get<double>(),
              c.at("detail").get<std::string>().c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  uint64_t seed = rrg_default_seed();
  if (const char* env = std::getenv("RRG_SEED")) {
    char* end = nullptr;
    uint64_t parsed = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && *env != '\0') {
      seed = parsed;
    } else {
      std::fprintf(stderr, "ignoring non-numeric RRG_SEED '%s'\n", env);
    }
  }
  std::printf("acceptance suite, seed %" PRIu64 "\n", seed);

  int failures = 0;
  int rc = rrg_suite_run("acceptance", "", seed, print_line, nullptr,
                         &failures);
  if (rc != RRG_OK) {
    std::fprintf(stderr, "suite failed to run: %s (%s)\n", rrg_last_error(),
                 rrg_errc_name(rc));
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
