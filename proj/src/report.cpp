#include "rrg/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rrg/canonical.hpp"
#include "rrg/config.hpp"
#include "rrg/counting.hpp"
#include "rrg/coupling.hpp"
#include "rrg/errors.hpp"
#include "rrg/estimators.hpp"
#include "rrg/graph.hpp"
#include "rrg/oracle.hpp"
#include "rrg/rng.hpp"
#include "rrg/samplers.hpp"
#include "rrg/stats.hpp"
#include "rrg/suite.hpp"

namespace rrg::report {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

Rat parse_rational(const std::string& text) {
  require(!text.empty(), errc::parse_error, "empty rational literal");
  for (char c : text)
    require(std::isdigit(static_cast<unsigned char>(c)) || c == '/' ||
                c == '.' || c == '-',
            errc::parse_error, "bad character in rational: " + text);
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    require(q.set_str(text, 10) == 0, errc::parse_error,
            "unparseable rational: " + text);
    q.canonicalize();
    require(q.get_den() > 0, errc::parse_error, "zero denominator: " + text);
    return q;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  require(frac_len > 0 && digits.find_first_of("./") == std::string::npos,
          errc::parse_error, "unparseable decimal: " + text);
  mpz_class num(digits, 10);
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Json config_block() {
  const Config& c = Config::global();
  Json j;
  j["oracle_n_cap"] = c.oracle_n_cap;
  j["oracle_degree_cap"] = c.oracle_degree_cap;
  j["pm_count_n_cap"] = c.pm_count_n_cap;
  j["one_fact_n_cap"] = c.one_fact_n_cap;
  j["support_cap"] = c.support_cap;
  j["rejection_budget"] = c.rejection_budget;
  j["max_coupling_rounds"] = c.max_coupling_rounds;
  j["mckay_eps"] = c.mckay_eps;
  j["sample_n_cap"] = c.sample_n_cap;
  return j;
}

ReportBuilder::ReportBuilder(std::string command, Json params,
                             std::uint64_t seed, int workers) {
  root_["command"] = std::move(command);
  root_["params"] = std::move(params);
  root_["seed"] = seed;
  root_["workers"] = workers;
  root_["config"] = config_block();
  root_["results"] = Json::object();
}

void ReportBuilder::estimate(const std::string& name, double value,
                             double se) {
  root_["results"]["estimates"][name] = Json{{"value", value}, {"se", se}};
}

void ReportBuilder::reference(const std::string& name, const Rat& value) {
  root_["results"]["references"][name] =
      Json{{"exact", value.get_str()}, {"decimal", value.get_d()}};
}

void ReportBuilder::reference(const std::string& name, const Json& value) {
  root_["results"]["references"][name] = value;
}

void ReportBuilder::set(const std::string& key, const Json& value) {
  root_["results"][key] = value;
}

Json ReportBuilder::finish() const {
  Json out = root_;
  Json conf;
  for (const char* k : {"command", "params", "seed", "workers", "config"})
    conf[k] = out.at(k);
  out["config_hash"] = hex64(fnv1a64(conf.dump()));
  return out;
}

static std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_string(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_field(header[i]);
  out << "\n";
  for (const auto& row : rows) {
    require(row.size() == header.size(), errc::invalid_argument,
            "csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_field(row[i]);
    out << "\n";
  }
  return out.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), errc::io_error, "cannot open for writing: " + path);
  f << csv_string(header, rows);
  require(f.good(), errc::io_error, "write failed: " + path);
}

namespace {

// ---- param helpers ------------------------------------------------------

const Json& need(const Json& params, const std::string& key) {
  require(params.contains(key), errc::invalid_argument,
          "missing parameter: " + key);
  return params.at(key);
}

int geti(const Json& params, const std::string& key) {
  const Json& v = need(params, key);
  require(v.is_number_integer(), errc::invalid_argument,
          "parameter must be an integer: " + key);
  return v.get<int>();
}

int geti_or(const Json& params, const std::string& key, int fallback) {
  return params.contains(key) ? geti(params, key) : fallback;
}

std::uint64_t getu64_or(const Json& params, const std::string& key,
                        std::uint64_t fallback) {
  if (!params.contains(key)) return fallback;
  const Json& v = params.at(key);
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0),
          errc::invalid_argument, "parameter must be non-negative: " + key);
  return v.get<std::uint64_t>();
}

std::string gets(const Json& params, const std::string& key) {
  const Json& v = need(params, key);
  require(v.is_string(), errc::invalid_argument,
          "parameter must be a string: " + key);
  return v.get<std::string>();
}

std::string gets_or(const Json& params, const std::string& key,
                    const std::string& fallback) {
  return params.contains(key) ? gets(params, key) : fallback;
}

// Exact rational parameters travel as strings or integers, never doubles.
Rat getrat_or(const Json& params, const std::string& key,
              const Rat& fallback) {
  if (!params.contains(key)) return fallback;
  const Json& v = params.at(key);
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
  require(v.is_string(), errc::invalid_argument,
          "parameter must be a rational string: " + key);
  return parse_rational(v.get<std::string>());
}

std::vector<int> int_list(const Json& params, const std::string& key) {
  const Json& v = need(params, key);
  std::vector<int> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<int>());
    return out;
  }
  require(v.is_array() && !v.empty(), errc::invalid_argument,
          "parameter must be an integer or list: " + key);
  for (const Json& e : v) {
    require(e.is_number_integer(), errc::invalid_argument,
            "list entries must be integers: " + key);
    out.push_back(e.get<int>());
  }
  return out;
}

Json rat_json(const Rat& r) {
  return Json{{"exact", r.get_str()}, {"decimal", r.get_d()}};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

// ---- commands -----------------------------------------------------------

Json cmd_sample(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n"), d = geti(params, "d");
  std::uint64_t trials = getu64_or(params, "trials", 1);
  ReportBuilder rb("sample", params, seed, workers);
  Json graphs = Json::array();
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    graphs.push_back(samplers::sample_regular(n, d, rng).format());
  }
  rb.set("graphs", graphs);
  rb.set("trials", trials);
  return rb.finish();
}

Json cmd_count(const Json& params, std::uint64_t seed, int workers) {
  Graph g = Graph::parse(gets(params, "graph"));
  const Config& conf = Config::global();
  ReportBuilder rb("count", params, seed, workers);
  rb.set("n", g.n());
  rb.set("edges", static_cast<std::uint64_t>(g.edges().size()));
  require(g.n() <= conf.pm_count_n_cap, errc::cap_exceeded,
          "pm counting capped at n <= " + std::to_string(conf.pm_count_n_cap));
  rb.set("pm", count_perfect_matchings(g));
  rb.set("triangles", count_triangles(g));
  bool regular = g.n() > 0 && g.is_regular(g.degree(0));
  if (g.n() <= conf.one_fact_n_cap && regular)
    rb.set("ordered_1f", count_one_factorisations_ordered(g));
  else
    rb.set("ordered_1f", nullptr);
  return rb.finish();
}

Json cmd_tv(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n");
  auto p = oracle::parse_measure(gets(params, "p"));
  auto q = oracle::parse_measure(gets(params, "q"));
  ReportBuilder rb("tv", params, seed, workers);
  auto dp = oracle::exact_distribution(p, n);
  auto dq = oracle::exact_distribution(q, n);
  Rat tv = oracle::exact_tv(dp, dq);
  rb.reference("tv", tv);
  rb.reference("class_tv", oracle::class_tv(oracle::class_distribution(dp),
                                            oracle::class_distribution(dq)));
  rb.set("support_p", static_cast<std::uint64_t>(dp.atoms.size()));
  rb.set("support_q", static_cast<std::uint64_t>(dq.atoms.size()));
  return rb.finish();
}

Json couple_maximal(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n");
  auto p = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure(gets(params, "p")), n));
  auto q = oracle::class_distribution(
      oracle::exact_distribution(oracle::parse_measure(gets(params, "q")), n));
  auto table = coupling::maximal_coupling(p, q);
  ReportBuilder rb("couple", params, seed, workers);
  Rat diag = table.diagonal_mass();
  rb.reference("diagonal_mass", diag);
  rb.reference("tv", Rat(1) - diag);
  rb.set("cells", static_cast<std::uint64_t>(table.joint.size()));
  std::uint64_t trials = getu64_or(params, "trials", 0);
  if (trials > 0) {
    Rng rng(seed, 0);
    std::uint64_t hit = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      auto [i, j] = table.sample(rng);
      hit += (i == j);
    }
    double freq = static_cast<double>(hit) / static_cast<double>(trials);
    rb.estimate("diagonal_freq", freq,
                std::sqrt(freq * (1 - freq) / static_cast<double>(trials)));
  }
  return rb.finish();
}

Json couple_extend(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n"), d = geti(params, "d");
  std::uint64_t trials = getu64_or(params, "trials", 10000);
  Rng rng(seed, 0);
  auto rep = coupling::matching_extension_coupling(n, d, trials, rng);
  ReportBuilder rb("couple", params, seed, workers);
  rb.set("exact", rep.exact);
  if (rep.exact) rb.reference("tv", rep.tv);
  rb.reference("delta", rep.delta);
  rb.reference("eps", rep.eps);
  rb.reference("bound", rep.bound);
  if (rep.flow_ran) rb.reference("flow_violation", rep.flow_violation);
  if (!rep.exact) {
    rb.estimate("tv_estimate", rep.tv_estimate, 0);
    rb.estimate("mean_extensions", rep.mean_extensions, 0);
  }
  rb.set("trials", rep.trials);
  return rb.finish();
}

Json couple_asp(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n"), d = geti(params, "d"), k = geti(params, "k");
  std::uint64_t trials = getu64_or(params, "trials", 10000);
  ReportBuilder rb("couple", params, seed, workers);
  std::map<std::string, std::uint64_t> hist;
  std::uint64_t class_redraws = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    auto s = coupling::asp_sample(n, d, k, rng);
    hist[canonical_key(s.unioned)] += 1;
    class_redraws += s.class_redraws;
  }
  Json h = Json::object();
  for (auto& [key, cnt] : hist) h[key] = cnt;
  rb.set("union_class_histogram", h);
  rb.set("class_redraws", class_redraws);
  const Config& conf = Config::global();
  if (n <= conf.oracle_n_cap && k * d <= conf.oracle_degree_cap) {
    auto exact = oracle::class_distribution(oracle::exact_asp_law(n, d, k));
    std::map<std::string, double> ref;
    for (auto& a : exact.atoms) ref[a.key] = a.mass.get_d();
    auto tv = stats::empirical_vs_exact_tv(hist, ref);
    rb.estimate("class_tv_vs_exact", tv.tv, 0);
    rb.set("class_tv_bias_bound", tv.bias_bound);
  }
  return rb.finish();
}

Json couple_zeta(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n"), d = geti(params, "d");
  Rat eps = getrat_or(params, "epsilon", Rat(1, 20));
  std::uint64_t trials = getu64_or(params, "trials", 0);
  auto mu = oracle::class_distribution(oracle::exact_distribution(
      oracle::parse_measure("mu_" + std::to_string(d)), n));
  auto nu = oracle::class_distribution(oracle::exact_distribution(
      oracle::parse_measure("nu_" + std::to_string(d)), n));
  auto trace = coupling::zeta_coupling(mu, nu, eps);
  ReportBuilder rb("couple", params, seed, workers);
  Json zs = Json::array(), prods = Json::array();
  for (auto& st : trace.states) {
    zs.push_back(rat_json(st.Z));
    prods.push_back(rat_json(st.product));
  }
  rb.set("Z", zs);
  rb.set("products", prods);
  rb.set("k", trace.k);
  rb.reference("miss_probability", trace.miss_probability);
  if (trials > 0) {
    std::uint64_t miss = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      miss += !coupling::zeta_sample(trace, rng).hit;
    }
    double freq = static_cast<double>(miss) / static_cast<double>(trials);
    rb.estimate("miss_freq", freq,
                std::sqrt(freq * (1 - freq) / static_cast<double>(trials)));
  }
  return rb.finish();
}

Json couple_inclusion(const Json& params, std::uint64_t seed, int workers) {
  int n = geti(params, "n");
  int d1 = geti(params, "d1"), d2 = geti(params, "d2");
  std::uint64_t trials = getu64_or(params, "trials", 10000);
  int which = geti_or(params, "case", 2);
  Rat eps = getrat_or(params, "epsilon", Rat(3, 10));
  Rng rng(seed, 0);
  auto rep = coupling::inclusion_pipeline(n, d1, d2, trials, rng, which, eps);
  ReportBuilder rb("couple", params, seed, workers);
  rb.set("tv_exact", rep.tv_exact);
  if (rep.tv_exact) rb.reference("tv", rep.tv);
  double se = std::sqrt(rep.inclusion_rate * (1 - rep.inclusion_rate) /
                        static_cast<double>(trials));
  rb.estimate("inclusion_rate", rep.inclusion_rate, se);
  rb.set("included", rep.included);
  rb.set("trials", rep.trials);
  rb.set("case", rep.used_case);
  if (rep.used_case == 2) rb.reference("transport_value", rep.transport_value);
  Json cls = Json::array();
  for (std::size_t i = 0; i < rep.g1_class_keys.size(); ++i)
    cls.push_back(Json{{"key", rep.g1_class_keys[i]},
                       {"size", rep.g1_class_sizes[i].get_str()},
                       {"count", rep.g1_class_counts[i]}});
  rb.set("g1_classes", cls);
  return rb.finish();
}

Json cmd_couple(const Json& params, std::uint64_t seed, int workers) {
  std::string mode = gets(params, "mode");
  if (mode == "maximal") return couple_maximal(params, seed, workers);
  if (mode == "extend") return couple_extend(params, seed, workers);
  if (mode == "asp") return couple_asp(params, seed, workers);
  if (mode == "zeta") return couple_zeta(params, seed, workers);
  if (mode == "inclusion") return couple_inclusion(params, seed, workers);
  fail(errc::invalid_argument, "unknown couple mode: " + mode);
}

struct Cell {
  int n = 0, d = 0;
};

Json experiment_cell(const std::string& kind, const Json& params, Cell cell,
                     std::uint64_t seed, std::uint64_t stream_base,
                     std::vector<std::string>* row) {
  std::uint64_t trials = getu64_or(params, "trials", 10000);
  Json out;
  out["n"] = cell.n;
  out["d"] = cell.d;
  if (row) {
    row->push_back(std::to_string(cell.n));
    row->push_back(std::to_string(cell.d));
  }
  if (kind == "moments") {
    std::string stat = gets_or(params, "statistic", "joint");
    estimators::Statistic s = stat == "x"   ? estimators::Statistic::TRIANGLES
                              : stat == "y" ? estimators::Statistic::PM
                                            : estimators::Statistic::JOINT;
    auto m = estimators::estimate_moments(cell.n, cell.d, s, trials, seed,
                                          stream_base);
    out["trials"] = m.trials;
    out["blocks"] = m.blocks;
    if (s != estimators::Statistic::PM) {
      out["x"] = Json{{"mean", m.x.mean},     {"se_mean", m.x.se_mean},
                      {"variance", m.x.variance}, {"se_variance", m.x.se_variance},
                      {"second_moment", m.x.second_moment},
                      {"se_second", m.x.se_second}};
    }
    if (s != estimators::Statistic::TRIANGLES) {
      out["y"] = Json{{"mean", m.y.mean},     {"se_mean", m.y.se_mean},
                      {"variance", m.y.variance}, {"se_variance", m.y.se_variance},
                      {"second_moment", m.y.second_moment},
                      {"se_second", m.y.se_second}};
    }
    if (s == estimators::Statistic::JOINT) {
      out["cov_xy"] = m.cov_xy;
      out["se_cov"] = m.se_cov;
    }
    if (row) {
      double mean = s == estimators::Statistic::PM ? m.y.mean : m.x.mean;
      double var =
          s == estimators::Statistic::PM ? m.y.variance : m.x.variance;
      row->push_back(fmt(mean));
      row->push_back(fmt(var));
    }
  } else if (kind == "tails") {
    double exponent = params.contains("exponent")
                          ? params.at("exponent").get<double>()
                          : 1.1;
    auto c = estimators::concentration_experiment(cell.n, cell.d, exponent,
                                                  trials, seed, stream_base);
    out["ybar_first_pass"] = c.ybar_first_pass;
    out["threshold"] = c.threshold;
    out["tail_freq"] = c.tail_freq;
    out["se_tail"] = c.se_tail;
    out["relvar"] = c.relvar;
    out["se_relvar"] = c.se_relvar;
    out["reference"] = c.reference;
    out["trials"] = c.trials;
    if (row) {
      row->push_back(fmt(c.relvar));
      row->push_back(fmt(c.tail_freq));
    }
  } else if (kind == "projection") {
    auto r = estimators::residual_variance_experiment(cell.n, cell.d, trials,
                                                      seed, stream_base);
    out["a"] = r.a;
    out["b"] = r.b;
    out["var_y"] = r.var_y;
    out["var_residual"] = r.var_residual;
    out["relvar_y"] = r.relvar_y;
    out["relvar_residual"] = r.relvar_residual;
    out["ratio"] = r.ratio;
    out["cov_check"] = r.cov_check;
    out["se_cov_check"] = r.se_cov_check;
    out["trials"] = r.trials;
    if (row) {
      row->push_back(fmt(r.ratio));
      row->push_back(fmt(r.relvar_residual));
    }
  } else if (kind == "factorial") {
    int k = geti_or(params, "k", 2);
    auto f = estimators::factorial_moment_check(cell.n, cell.d, k, trials,
                                                seed, stream_base);
    out["k"] = f.k;
    out["sample_moment"] = f.sample_moment;
    out["se"] = f.se;
    out["prediction"] = f.prediction;
    out["unit"] = f.unit;
    out["discrepancy"] = f.discrepancy;
    out["trials"] = f.trials;
    if (row) {
      row->push_back(fmt(f.sample_moment));
      row->push_back(fmt(f.prediction));
    }
  } else {
    fail(errc::invalid_argument, "unknown experiment kind: " + kind);
  }
  return out;
}

std::vector<std::string> experiment_columns(const std::string& kind) {
  if (kind == "moments") return {"n", "d", "mean", "variance"};
  if (kind == "tails") return {"n", "d", "relvar", "tail_freq"};
  if (kind == "projection") return {"n", "d", "ratio", "relvar_residual"};
  return {"n", "d", "sample_moment", "prediction"};
}

Json cmd_experiment(const Json& params, std::uint64_t seed, int workers) {
  std::string kind = gets(params, "kind");
  auto ns = int_list(params, "n");
  auto ds = int_list(params, "d");
  ReportBuilder rb("experiment", params, seed, workers);
  Json cells = Json::array();
  std::vector<std::vector<std::string>> rows;
  std::uint64_t stream_base = 0;
  for (int n : ns)
    for (int d : ds) {
      std::vector<std::string> row;
      cells.push_back(experiment_cell(kind, params, Cell{n, d}, seed,
                                      stream_base, &row));
      rows.push_back(std::move(row));
      stream_base += 1u << 24;
    }
  rb.set("cells", cells);
  std::string csv = gets_or(params, "csv", "");
  if (!csv.empty()) {
    write_csv(csv, experiment_columns(kind), rows);
    rb.set("csv_path", csv);
  }
  return rb.finish();
}

Json criterion_json(const suite::CriterionResult& c) {
  return Json{{"id", c.id},
              {"name", c.name},
              {"pass", c.pass},
              {"detail", c.detail},
              {"seconds", c.seconds}};
}

Json cmd_suite(const Json& params, std::uint64_t seed, int workers) {
  std::string name = gets(params, "name");
  std::string only = gets_or(params, "only", "");
  suite::SuiteResult res;
  if (name == "acceptance")
    res = suite::run_acceptance(only, seed);
  else if (name == "calibration")
    res = suite::run_calibration(only, seed);
  else
    fail(errc::invalid_argument, "unknown suite: " + name);
  ReportBuilder rb("suite", params, seed, workers);
  Json arr = Json::array();
  for (auto& c : res.criteria) arr.push_back(criterion_json(c));
  rb.set("criteria", arr);
  rb.set("passed", res.passed);
  rb.set("failed", res.failed);
  return rb.finish();
}

}  // namespace

Json run_command(const Json& config) {
  require(config.is_object(), errc::invalid_argument,
          "config must be a JSON object");
  std::string command = gets(config, "command");
  Json params =
      config.contains("params") ? config.at("params") : Json::object();
  require(params.is_object(), errc::invalid_argument,
          "params must be a JSON object");
  std::uint64_t seed = getu64_or(config, "seed", kDefaultSeed);
  int workers = geti_or(config, "workers", 1);
  require(workers >= 1, errc::invalid_argument, "workers must be >= 1");
  if (command == "sample") return cmd_sample(params, seed, workers);
  if (command == "count") return cmd_count(params, seed, workers);
  if (command == "tv") return cmd_tv(params, seed, workers);
  if (command == "couple") return cmd_couple(params, seed, workers);
  if (command == "experiment") return cmd_experiment(params, seed, workers);
  if (command == "suite") return cmd_suite(params, seed, workers);
  fail(errc::invalid_argument, "unknown command: " + command);
}

}  // namespace rrg::report
