#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "rrg.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  rrg_string_free(s);
  return out;
}

struct GraphHandle {
  rrg_graph* g = nullptr;
  ~GraphHandle() { rrg_graph_free(g); }
};

}  // namespace

TEST_CASE("graph lifecycle: create, add edges, format, parse back") {
  GraphHandle h;
  REQUIRE(rrg_graph_create(4, &h.g) == RRG_OK);
  REQUIRE(rrg_graph_add_edge(h.g, 0, 1) == RRG_OK);
  REQUIRE(rrg_graph_add_edge(h.g, 2, 3) == RRG_OK);
  CHECK(rrg_graph_n(h.g) == 4);
  CHECK(rrg_graph_edge_count(h.g) == 2);
  CHECK(rrg_graph_has_edge(h.g, 0, 1) == 1);
  CHECK(rrg_graph_has_edge(h.g, 0, 2) == 0);
  CHECK(rrg_graph_degree(h.g, 3) == 1);

  char* text = nullptr;
  REQUIRE(rrg_graph_format(h.g, &text) == RRG_OK);
  std::string body = take(text);
  CHECK(body == "4 2\n1 2\n3 4\n");

  GraphHandle h2;
  REQUIRE(rrg_graph_parse(body.c_str(), &h2.g) == RRG_OK);
  char* text2 = nullptr;
  REQUIRE(rrg_graph_format(h2.g, &text2) == RRG_OK);
  CHECK(take(text2) == body);
}

TEST_CASE("graph errors set codes and messages") {
  GraphHandle h;
  REQUIRE(rrg_graph_create(4, &h.g) == RRG_OK);
  REQUIRE(rrg_graph_add_edge(h.g, 0, 1) == RRG_OK);
  CHECK(rrg_graph_add_edge(h.g, 0, 1) == RRG_E_EDGE_ALREADY_PRESENT);
  CHECK(rrg_graph_add_edge(h.g, 2, 2) == RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_graph_add_edge(h.g, 0, 9) == RRG_E_INVALID_ARGUMENT);
  CHECK(std::strlen(rrg_last_error()) > 0);

  rrg_graph* out = nullptr;
  CHECK(rrg_graph_parse("not a graph", &out) == RRG_E_PARSE);
  CHECK(out == nullptr);
  CHECK(rrg_graph_parse(nullptr, &out) == RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_graph_create(4, nullptr) == RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_graph_has_edge(h.g, 0, 9) < 0);
  CHECK(rrg_graph_degree(h.g, 9) < 0);
}

TEST_CASE("error code names are stable strings") {
  CHECK(std::string(rrg_errc_name(RRG_OK)) == "ok");
  CHECK(std::string(rrg_errc_name(RRG_E_CAP_EXCEEDED)) == "cap_exceeded");
  CHECK(std::string(rrg_errc_name(RRG_E_REJECTION_BUDGET_EXCEEDED)) ==
        "rejection_budget_exceeded");
  CHECK(rrg_errc_name(12345) != nullptr);
}

TEST_CASE("counting through the C surface: K4") {
  GraphHandle h;
  REQUIRE(rrg_graph_create(4, &h.g) == RRG_OK);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      REQUIRE(rrg_graph_add_edge(h.g, u, v) == RRG_OK);
  int64_t pm = 0, tri = 0, fact = 0;
  REQUIRE(rrg_count_perfect_matchings(h.g, &pm) == RRG_OK);
  REQUIRE(rrg_count_triangles(h.g, &tri) == RRG_OK);
  REQUIRE(rrg_count_ordered_one_factorisations(h.g, &fact) == RRG_OK);
  CHECK(pm == 3);
  CHECK(tri == 4);
  CHECK(fact == 6);
  CHECK(rrg_count_perfect_matchings(nullptr, &pm) == RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_count_perfect_matchings(h.g, nullptr) == RRG_E_INVALID_ARGUMENT);
}

TEST_CASE("sampling is deterministic in (seed, stream)") {
  GraphHandle a, b, c;
  REQUIRE(rrg_sample_regular(12, 3, 42, 7, &a.g) == RRG_OK);
  REQUIRE(rrg_sample_regular(12, 3, 42, 7, &b.g) == RRG_OK);
  REQUIRE(rrg_sample_regular(12, 3, 42, 8, &c.g) == RRG_OK);
  char* fa = nullptr;
  char* fb = nullptr;
  char* fc = nullptr;
  REQUIRE(rrg_graph_format(a.g, &fa) == RRG_OK);
  REQUIRE(rrg_graph_format(b.g, &fb) == RRG_OK);
  REQUIRE(rrg_graph_format(c.g, &fc) == RRG_OK);
  std::string sa = take(fa), sb = take(fb), sc = take(fc);
  CHECK(sa == sb);
  CHECK(sa != sc);
  rrg_graph* bad = nullptr;
  CHECK(rrg_sample_regular(5, 3, 1, 0, &bad) == RRG_E_PARITY_VIOLATION);
}

TEST_CASE("canonical keys agree for relabelled graphs") {
  GraphHandle path, relabeled;
  REQUIRE(rrg_graph_parse("4 3\n1 2\n2 3\n3 4\n", &path.g) == RRG_OK);
  REQUIRE(rrg_graph_parse("4 3\n1 3\n1 4\n2 3\n", &relabeled.g) == RRG_OK);
  char* k1 = nullptr;
  char* k2 = nullptr;
  REQUIRE(rrg_canonical_key(path.g, &k1) == RRG_OK);
  REQUIRE(rrg_canonical_key(relabeled.g, &k2) == RRG_OK);
  CHECK(take(k1) == take(k2));
}

TEST_CASE("exact tv through the C surface") {
  char* tv = nullptr;
  REQUIRE(rrg_exact_tv("mu_3", "nu_3", 8, &tv) == RRG_OK);
  CHECK(take(tv) == "18672/86821");
  char* zero = nullptr;
  REQUIRE(rrg_exact_tv("mu_1", "nu_1", 6, &zero) == RRG_OK);
  CHECK(take(zero) == "0");
  char* out = nullptr;
  CHECK(rrg_exact_tv("bogus", "mu_1", 6, &out) == RRG_E_PARSE);
  CHECK(rrg_exact_tv("mu_3", "nu_3", 14, &out) == RRG_E_CAP_EXCEEDED);
}

TEST_CASE("json runner: count command round-trips") {
  json config = {{"command", "count"},
                 {"params", {{"graph", "4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"}}}};
  char* out = nullptr;
  REQUIRE(rrg_run_json(config.dump().c_str(), &out) == RRG_OK);
  json rep = json::parse(take(out));
  CHECK(rep["command"] == "count");
  CHECK(rep["results"]["pm"] == 3);
  CHECK(rep["results"]["triangles"] == 4);
  CHECK(rep["results"]["ordered_1f"] == 6);
  CHECK(rep["seed"] == rrg_default_seed());
  CHECK(rep.contains("config_hash"));
}

TEST_CASE("json runner: identical configs hash identically") {
  json config = {{"command", "tv"},
                 {"params", {{"p", "mu_2"}, {"q", "nu_2"}, {"n", 8}}}};
  char* out1 = nullptr;
  char* out2 = nullptr;
  REQUIRE(rrg_run_json(config.dump().c_str(), &out1) == RRG_OK);
  REQUIRE(rrg_run_json(config.dump().c_str(), &out2) == RRG_OK);
  json r1 = json::parse(take(out1)), r2 = json::parse(take(out2));
  CHECK(r1["config_hash"] == r2["config_hash"]);
  CHECK(r1 == r2);

  json other = config;
  other["seed"] = 7;
  char* out3 = nullptr;
  REQUIRE(rrg_run_json(other.dump().c_str(), &out3) == RRG_OK);
  json r3 = json::parse(take(out3));
  CHECK(r3["config_hash"] != r1["config_hash"]);
}

TEST_CASE("json runner: error mapping") {
  char* out = nullptr;
  CHECK(rrg_run_json("{not json", &out) == RRG_E_PARSE);
  CHECK(rrg_run_json(nullptr, &out) == RRG_E_INVALID_ARGUMENT);
  json bad_cmd = {{"command", "conjure"}};
  CHECK(rrg_run_json(bad_cmd.dump().c_str(), &out) == RRG_E_INVALID_ARGUMENT);
  json bad_workers = {{"command", "tv"},
                      {"params", {{"p", "mu_1"}, {"q", "mu_1"}, {"n", 6}}},
                      {"workers", 0}};
  CHECK(rrg_run_json(bad_workers.dump().c_str(), &out) ==
        RRG_E_INVALID_ARGUMENT);
  CHECK(std::strlen(rrg_last_error()) > 0);
}

namespace {

struct SuiteCapture {
  std::vector<json> lines;
};

void capture_cb(const char* criterion_json, void* user) {
  static_cast<SuiteCapture*>(user)->lines.push_back(
      json::parse(criterion_json));
}

}  // namespace

TEST_CASE("suite runner streams one criterion and reports failures") {
  SuiteCapture cap;
  int failures = -1;
  REQUIRE(rrg_suite_run("acceptance", "mckay", 1729, capture_cb, &cap,
                        &failures) == RRG_OK);
  REQUIRE(cap.lines.size() == 1);
  const json& line = cap.lines.front();
  CHECK(line["id"] == 4);
  CHECK(line["name"] == "mckay");
  CHECK(line["pass"] == true);
  CHECK(line["seconds"].is_number());
  CHECK(line["detail"].is_string());
  CHECK(failures == 0);
}

TEST_CASE("suite runner rejects unknown names and tokens") {
  int failures = -1;
  CHECK(rrg_suite_run("bogus", nullptr, 1, nullptr, nullptr, &failures) ==
        RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_suite_run("acceptance", "bogus", 1, nullptr, nullptr,
                      &failures) == RRG_E_INVALID_ARGUMENT);
  CHECK(rrg_suite_run("acceptance", "", 1, nullptr, nullptr, nullptr) ==
        RRG_E_INVALID_ARGUMENT);
}

TEST_CASE("default seed is stable") {
  CHECK(rrg_default_seed() == 1729);
}
