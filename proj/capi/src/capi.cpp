#include "rrg.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "json.hpp"
#include "rrg/canonical.hpp"
#include "rrg/counting.hpp"
#include "rrg/errors.hpp"
#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"
#include "rrg/report.hpp"
#include "rrg/rng.hpp"
#include "rrg/samplers.hpp"
#include "rrg/suite.hpp"

struct rrg_graph {
  rrg::Graph g;
};

namespace {

thread_local std::string t_last_error = "";

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int set_error(int code, const std::string& what) {
  t_last_error = what;
  return code;
}

// Every entry point funnels through here so no exception crosses the ABI.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    return RRG_OK;
  } catch (const rrg::Error& e) {
    return set_error(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RRG_E_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RRG_E_UNKNOWN, e.what());
  }
}

int out_string(const std::string& s, char** out) {
  if (!out) return set_error(RRG_E_INVALID_ARGUMENT, "null output pointer");
  *out = dup_string(s);
  if (!*out) return set_error(RRG_E_UNKNOWN, "out of memory");
  return RRG_OK;
}

}  // namespace

extern "C" {

const char* rrg_last_error(void) { return t_last_error.c_str(); }

const char* rrg_errc_name(int code) {
  if (code == RRG_E_UNKNOWN) return "unknown";
  return rrg::errc_name(static_cast<rrg::errc>(code));
}

void rrg_string_free(char* s) { ::operator delete(s); }

void rrg_graph_free(rrg_graph* g) { delete g; }

int rrg_graph_parse(const char* text, rrg_graph** out) {
  if (!text || !out)
    return set_error(RRG_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new rrg_graph{rrg::Graph::parse(text)}; });
}

int rrg_graph_create(int n, rrg_graph** out) {
  if (!out) return set_error(RRG_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] { *out = new rrg_graph{rrg::Graph(n)}; });
}

int rrg_graph_add_edge(rrg_graph* g, int u, int v) {
  if (!g) return set_error(RRG_E_INVALID_ARGUMENT, "null graph");
  return guarded([&] { g->g.add_edge(u, v); });
}

int rrg_graph_format(const rrg_graph* g, char** out) {
  if (!g) return set_error(RRG_E_INVALID_ARGUMENT, "null graph");
  std::string s;
  int rc = guarded([&] { s = g->g.format(); });
  return rc == RRG_OK ? out_string(s, out) : rc;
}

int rrg_graph_n(const rrg_graph* g) { return g ? g->g.n() : -1; }

int64_t rrg_graph_edge_count(const rrg_graph* g) {
  return g ? static_cast<int64_t>(g->g.edges().size()) : -1;
}

int rrg_graph_has_edge(const rrg_graph* g, int u, int v) {
  if (!g || u < 0 || v < 0 || u >= g->g.n() || v >= g->g.n())
    return -RRG_E_INVALID_ARGUMENT;
  return g->g.has_edge(u, v) ? 1 : 0;
}

int rrg_graph_degree(const rrg_graph* g, int v) {
  if (!g || v < 0 || v >= g->g.n()) return -RRG_E_INVALID_ARGUMENT;
  return g->g.degree(v);
}

int rrg_canonical_key(const rrg_graph* g, char** out) {
  if (!g) return set_error(RRG_E_INVALID_ARGUMENT, "null graph");
  std::string s;
  int rc = guarded([&] { s = rrg::canonical_key(g->g); });
  return rc == RRG_OK ? out_string(s, out) : rc;
}

int rrg_count_perfect_matchings(const rrg_graph* g, int64_t* out) {
  if (!g || !out) return set_error(RRG_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = rrg::count_perfect_matchings(g->g); });
}

int rrg_count_triangles(const rrg_graph* g, int64_t* out) {
  if (!g || !out) return set_error(RRG_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = rrg::count_triangles(g->g); });
}

int rrg_count_ordered_one_factorisations(const rrg_graph* g, int64_t* out) {
  if (!g || !out) return set_error(RRG_E_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = rrg::count_one_factorisations_ordered(g->g); });
}

int rrg_sample_regular(int n, int d, uint64_t seed, uint64_t stream,
                       rrg_graph** out) {
  if (!out) return set_error(RRG_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    rrg::Rng rng(seed, stream);
    *out = new rrg_graph{rrg::samplers::sample_regular(n, d, rng)};
  });
}

int rrg_exact_tv(const char* measure_p, const char* measure_q, int n,
                 char** out_rational) {
  if (!measure_p || !measure_q)
    return set_error(RRG_E_INVALID_ARGUMENT, "null measure");
  std::string s;
  int rc = guarded([&] {
    auto p = rrg::oracle::exact_distribution(
        rrg::oracle::parse_measure(measure_p), n);
    auto q = rrg::oracle::exact_distribution(
        rrg::oracle::parse_measure(measure_q), n);
    s = rrg::oracle::exact_tv(p, q).get_str();
  });
  return rc == RRG_OK ? out_string(s, out_rational) : rc;
}

int rrg_run_json(const char* config_json, char** out_report_json) {
  if (!config_json)
    return set_error(RRG_E_INVALID_ARGUMENT, "null config");
  std::string s;
  int rc = guarded([&] {
    nlohmann::json config =
        nlohmann::json::parse(config_json, nullptr, /*allow_exceptions=*/false);
    rrg::require(!config.is_discarded(), rrg::errc::parse_error,
                 "config is not valid JSON");
    s = rrg::report::run_command(config).dump(2);
  });
  return rc == RRG_OK ? out_string(s, out_report_json) : rc;
}

int rrg_suite_run(const char* name, const char* only, uint64_t seed,
                  rrg_criterion_cb cb, void* user, int* failures_out) {
  if (!name) return set_error(RRG_E_INVALID_ARGUMENT, "null suite name");
  if (!failures_out)
    return set_error(RRG_E_INVALID_ARGUMENT, "null failures_out");
  return guarded([&] {
    std::string suite_name = name;
    std::string only_token = only ? only : "";
    rrg::suite::Progress progress;
    if (cb) {
      progress = [cb, user](const rrg::suite::CriterionResult& c) {
        nlohmann::json j{{"id", c.id},
                         {"name", c.name},
                         {"pass", c.pass},
                         {"detail", c.detail},
                         {"seconds", c.seconds}};
        std::string line = j.dump();
        cb(line.c_str(), user);
      };
    }
    rrg::suite::SuiteResult res;
    if (suite_name == "acceptance")
      res = rrg::suite::run_acceptance(only_token, seed, progress);
    else if (suite_name == "calibration")
      res = rrg::suite::run_calibration(only_token, seed, progress);
    else
      rrg::fail(rrg::errc::invalid_argument, "unknown suite: " + suite_name);
    *failures_out = res.failed;
  });
}

uint64_t rrg_default_seed(void) { return rrg::report::kDefaultSeed; }

}  // extern "C"
