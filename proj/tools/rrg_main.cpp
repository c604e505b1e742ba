// Operator CLI. Every piece of real work happens behind the C API in
// librrg; this file only parses flags, builds the JSON config, and renders
// results.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrg.h"

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailedCriteria = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitBudget = 3;

int exit_code_for(int status) {
  if (status == RRG_OK) return kExitOk;
  if (status == RRG_E_REJECTION_BUDGET_EXCEEDED ||
      status == RRG_E_NON_TERMINATION)
    return kExitBudget;
  return kExitPrecondition;
}

struct Global {
  std::uint64_t seed = rrg_default_seed();
  int workers = 1;
  std::string out;
};

// RRG_SEED wins over both the default and --seed.
void apply_seed_env(Global& g) {
  const char* env = std::getenv("RRG_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end && *end == '\0') {
    g.seed = v;
  } else {
    std::fprintf(stderr, "warning: ignoring non-numeric RRG_SEED=%s\n", env);
  }
}

int run_config(const Global& g, const std::string& command, Json params,
               Json* report_out) {
  Json config{{"command", command},
              {"params", std::move(params)},
              {"seed", g.seed},
              {"workers", g.workers}};
  char* raw = nullptr;
  int status = rrg_run_json(config.dump().c_str(), &raw);
  if (status != RRG_OK) {
    std::fprintf(stderr, "error (%s): %s\n", rrg_errc_name(status),
                 rrg_last_error());
    return exit_code_for(status);
  }
  *report_out = Json::parse(raw);
  rrg_string_free(raw);
  return kExitOk;
}

int emit(const Global& g, const Json& report, bool to_stdout = true) {
  std::string text = report.dump(2);
  if (to_stdout) std::printf("%s\n", text.c_str());
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f.good()) {
      std::fprintf(stderr, "error (io_error): cannot write %s\n",
                   g.out.c_str());
      return kExitPrecondition;
    }
    f << text << "\n";
  }
  return kExitOk;
}

std::string read_file(const std::string& path, bool* ok) {
  std::ifstream f(path, std::ios::binary);
  *ok = f.good();
  std::ostringstream buf;
  buf << f.rdbuf();
  *ok = *ok && f.good();
  return buf.str();
}

// "8" -> 8; "8,10,12" -> [8,10,12]
Json int_or_list(const std::string& text) {
  if (text.find(',') == std::string::npos) return std::stoi(text);
  Json arr = Json::array();
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) arr.push_back(std::stoi(tok));
  return arr;
}

void print_criterion_line(const Json& c) {
  std::printf("[%2d] %-14s %s  (%.1fs)\n      %s\n", c.at("id").get<int>(),
              c.at("name").get<std::string>().c_str(),
              c.at("pass").get<bool>() ? "PASS" : "FAIL",
              c.at("seconds").get<double>(),
              c.at("detail").get<std::string>().c_str());
  std::fflush(stdout);
}

struct SuiteStream {
  Json criteria = Json::array();
};

void suite_cb(const char* criterion_json, void* user) {
  Json c = Json::parse(criterion_json);
  print_criterion_line(c);
  static_cast<SuiteStream*>(user)->criteria.push_back(std::move(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random regular graph toolkit: exact small-size laws, "
               "couplings, and Monte Carlo experiments"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "Master seed (env RRG_SEED overrides)")
      ->capture_default_str();
  app.add_option("--workers", g.workers,
                 "Worker count; outputs are independent of it")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Also write the JSON report to this path");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw uniform d-regular graphs");
  int s_n = 8, s_d = 3;
  std::uint64_t s_trials = 1;
  sample->add_option("--n", s_n, "Vertices")->required();
  sample->add_option("--d", s_d, "Degree")->required();
  sample->add_option("--trials", s_trials, "Number of draws")
      ->capture_default_str();

  // count
  auto* count = app.add_subcommand("count", "Exact counts for one graph");
  std::string c_input;
  count->add_option("--input", c_input, "Path to a graph in the text format")
      ->required();

  // tv
  auto* tv = app.add_subcommand("tv", "Exact total variation distance");
  std::string t_p = "mu_3", t_q = "nu_3";
  int t_n = 8;
  tv->add_option("--p", t_p, "First measure, e.g. mu_3 or mu_2+mu_1")
      ->capture_default_str();
  tv->add_option("--q", t_q, "Second measure")->capture_default_str();
  tv->add_option("--n", t_n, "Vertices")->capture_default_str();

  // couple
  auto* couple = app.add_subcommand("couple", "Coupling constructions");
  couple->require_subcommand(1);
  struct {
    int n = 8, d = 3, d1 = 3, d2 = 5, k = 2, which_case = 2;
    std::uint64_t trials = 10000;
    std::string p = "mu_3", q = "nu_3", epsilon = "1/20";
    std::string inc_epsilon = "3/10";
  } cp;
  auto add_common = [&](CLI::App* sub, bool with_trials = true) {
    sub->add_option("--n", cp.n, "Vertices")->capture_default_str();
    if (with_trials)
      sub->add_option("--trials", cp.trials, "Monte Carlo draws")
          ->capture_default_str();
  };
  auto* cp_max = couple->add_subcommand("maximal", "Maximal coupling of two "
                                                   "exact class laws");
  add_common(cp_max);
  cp_max->add_option("--p", cp.p, "First measure")->capture_default_str();
  cp_max->add_option("--q", cp.q, "Second measure")->capture_default_str();
  auto* cp_ext = couple->add_subcommand(
      "extend", "Matching-extension coupling mu_d+mu_1 vs mu_{d+1}");
  add_common(cp_ext);
  cp_ext->add_option("--d", cp.d, "Degree")->capture_default_str();
  auto* cp_asp = couple->add_subcommand(
      "asp", "Union of k class-law draws conditioned disjoint");
  add_common(cp_asp);
  cp_asp->add_option("--d", cp.d, "Factor degree")->capture_default_str();
  cp_asp->add_option("--k", cp.k, "Factor count")->capture_default_str();
  auto* cp_zeta = couple->add_subcommand(
      "zeta", "Residual recursion trace and sequential sampler");
  add_common(cp_zeta);
  cp_zeta->add_option("--d", cp.d, "Degree")->capture_default_str();
  cp_zeta->add_option("--epsilon", cp.epsilon,
                      "Stopping threshold, exact rational or decimal string")
      ->capture_default_str();
  auto* cp_inc = couple->add_subcommand(
      "inclusion", "End-to-end monotone coupling G1 in G2");
  add_common(cp_inc);
  cp_inc->add_option("--d1", cp.d1, "Subgraph degree")->capture_default_str();
  cp_inc->add_option("--d2", cp.d2, "Supergraph degree")
      ->capture_default_str();
  cp_inc->add_option("--case", cp.which_case, "Pipeline case (1 or 2)")
      ->capture_default_str();
  cp_inc->add_option("--epsilon", cp.inc_epsilon, "Case-1 stopping threshold")
      ->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo sweeps");
  exp->require_subcommand(1);
  struct {
    std::string n = "24", d = "3", statistic = "joint", csv;
    std::uint64_t trials = 10000;
    double exponent = 1.1;
    int k = 2;
  } ex;
  auto add_sweep = [&](CLI::App* sub) {
    sub->add_option("--n", ex.n, "Vertices (comma list sweeps)")
        ->capture_default_str();
    sub->add_option("--d", ex.d, "Degree (comma list sweeps)")
        ->capture_default_str();
    sub->add_option("--trials", ex.trials, "Trials per cell")
        ->capture_default_str();
    sub->add_option("--csv", ex.csv, "Write one CSV row per (n,d) cell");
  };
  auto* ex_mom = exp->add_subcommand("moments", "Triangle/PM moments");
  add_sweep(ex_mom);
  ex_mom->add_option("--statistic", ex.statistic, "x, y, or joint")
      ->capture_default_str();
  auto* ex_tail = exp->add_subcommand("tails", "Concentration of the PM count");
  add_sweep(ex_tail);
  ex_tail->add_option("--exponent", ex.exponent,
                      "Tail threshold d^-exponent around the first-pass mean")
      ->capture_default_str();
  auto* ex_proj = exp->add_subcommand("projection",
                                      "Variance after projecting PM on X");
  add_sweep(ex_proj);
  auto* ex_fact = exp->add_subcommand("factorial", "Raw moment E[X^k] check");
  add_sweep(ex_fact);
  ex_fact->add_option("--k", ex.k, "Moment order")->capture_default_str();

  // suite
  auto* suite = app.add_subcommand("suite", "Acceptance and calibration runs");
  std::string su_name, su_only;
  suite->add_option("name", su_name, "acceptance or calibration")
      ->required()
      ->check(CLI::IsMember({"acceptance", "calibration"}));
  suite->add_option("--only", su_only, "Run a single criterion by token");

  for (CLI::App* sub : {sample, count, tv, couple, cp_max, cp_ext, cp_asp,
                        cp_zeta, cp_inc, exp, ex_mom, ex_tail, ex_proj,
                        ex_fact, suite})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  apply_seed_env(g);

  Json report;
  if (*sample) {
    int rc = run_config(
        g, "sample",
        Json{{"n", s_n}, {"d", s_d}, {"trials", s_trials}}, &report);
    if (rc != kExitOk) return rc;
    for (const auto& text : report.at("results").at("graphs"))
      std::printf("%s\n", text.get<std::string>().c_str());
    if (!g.out.empty()) return emit(g, report, false);
    return kExitOk;
  }
  if (*count) {
    bool ok = false;
    std::string text = read_file(c_input, &ok);
    if (!ok) {
      std::fprintf(stderr, "error (io_error): cannot read %s\n",
                   c_input.c_str());
      return kExitPrecondition;
    }
    int rc = run_config(g, "count", Json{{"graph", text}}, &report);
    return rc != kExitOk ? rc : emit(g, report);
  }
  if (*tv) {
    int rc = run_config(g, "tv", Json{{"p", t_p}, {"q", t_q}, {"n", t_n}},
                        &report);
    return rc != kExitOk ? rc : emit(g, report);
  }
  if (*couple) {
    Json params;
    if (*cp_max)
      params = Json{{"mode", "maximal"}, {"n", cp.n}, {"p", cp.p},
                    {"q", cp.q},         {"trials", cp.trials}};
    else if (*cp_ext)
      params = Json{{"mode", "extend"}, {"n", cp.n}, {"d", cp.d},
                    {"trials", cp.trials}};
    else if (*cp_asp)
      params = Json{{"mode", "asp"}, {"n", cp.n}, {"d", cp.d}, {"k", cp.k},
                    {"trials", cp.trials}};
    else if (*cp_zeta)
      params = Json{{"mode", "zeta"}, {"n", cp.n}, {"d", cp.d},
                    {"epsilon", cp.epsilon}, {"trials", cp.trials}};
    else
      params = Json{{"mode", "inclusion"}, {"n", cp.n}, {"d1", cp.d1},
                    {"d2", cp.d2},         {"trials", cp.trials},
                    {"case", cp.which_case}, {"epsilon", cp.inc_epsilon}};
    int rc = run_config(g, "couple", params, &report);
    return rc != kExitOk ? rc : emit(g, report);
  }
  if (*exp) {
    std::string kind = *ex_mom    ? "moments"
                       : *ex_tail ? "tails"
                       : *ex_proj ? "projection"
                                  : "factorial";
    Json params{{"kind", kind},
                {"n", int_or_list(ex.n)},
                {"d", int_or_list(ex.d)},
                {"trials", ex.trials}};
    if (kind == "moments") params["statistic"] = ex.statistic;
    if (kind == "tails") params["exponent"] = ex.exponent;
    if (kind == "factorial") params["k"] = ex.k;
    if (!ex.csv.empty()) params["csv"] = ex.csv;
    int rc = run_config(g, "experiment", params, &report);
    return rc != kExitOk ? rc : emit(g, report);
  }
  if (*suite) {
    std::printf("suite %s%s%s  (seed %llu)\n", su_name.c_str(),
                su_only.empty() ? "" : " --only ",
                su_only.empty() ? "" : su_only.c_str(),
                static_cast<unsigned long long>(g.seed));
    std::fflush(stdout);
    SuiteStream stream;
    int failures = 0;
    int status = rrg_suite_run(su_name.c_str(), su_only.c_str(), g.seed,
                               suite_cb, &stream, &failures);
    if (status != RRG_OK) {
      std::fprintf(stderr, "error (%s): %s\n", rrg_errc_name(status),
                   rrg_last_error());
      return exit_code_for(status);
    }
    int total = static_cast<int>(stream.criteria.size());
    std::printf("%d/%d criteria passed\n", total - failures, total);
    if (!g.out.empty()) {
      Json aggregate{{"command", "suite"},
                     {"params", Json{{"name", su_name}, {"only", su_only}}},
                     {"seed", g.seed},
                     {"workers", g.workers},
                     {"results", Json{{"criteria", stream.criteria},
                                      {"passed", total - failures},
                                      {"failed", failures}}}};
      int rc = emit(g, aggregate, false);
      if (rc != kExitOk) return rc;
    }
    return failures == 0 ? kExitOk : kExitFailedCriteria;
  }
  return kExitOk;
}
