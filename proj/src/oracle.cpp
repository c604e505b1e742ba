#include "rrg/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "rrg/canonical.hpp"

namespace rrg::oracle {

namespace {

using u128 = unsigned __int128;

struct U128Hash {
  std::size_t operator()(u128 x) const {
    std::uint64_t lo = static_cast<std::uint64_t>(x);
    std::uint64_t hi = static_cast<std::uint64_t>(x >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ull;
    h ^= (hi + 0x9E3779B97F4A7C15ull) * 0xC2B2AE3D27D4EB4Full;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }
};

// Upper-triangle bit packing; valid for n <= 16 (120 pair slots).
int pair_index(int n, int u, int v) {
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

u128 pack_graph(const Graph& g) {
  require(g.n() <= 16, errc::cap_exceeded, "packed form needs n <= 16");
  u128 key = 0;
  for (auto [u, v] : g.edges())
    key |= static_cast<u128>(1) << pair_index(g.n(), u, v);
  return key;
}

Graph unpack_graph(u128 key, int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (key >> pair_index(n, u, v) & 1) g.add_edge(u, v);
  return g;
}

}  // namespace

MeasureExpr parse_measure(const std::string& text) {
  MeasureExpr expr;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find('+', pos);
    std::string tok = text.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    // trim
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t'))
      tok.erase(tok.begin());
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t'))
      tok.pop_back();
    bool nu = tok.rfind("nu_", 0) == 0;
    bool mu = tok.rfind("mu_", 0) == 0;
    if ((!nu && !mu) || tok.size() <= 3)
      fail(errc::parse_error, "measure parts look like mu_<d> or nu_<d>: '" +
                                  tok + "'");
    int d = 0;
    for (std::size_t i = 3; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9')
        fail(errc::parse_error, "bad degree in measure part '" + tok + "'");
      d = d * 10 + (tok[i] - '0');
      require(d <= 1000, errc::parse_error, "degree out of range");
    }
    expr.parts.push_back({nu, d});
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  require(!expr.parts.empty(), errc::parse_error, "empty measure expression");
  return expr;
}

std::string format_measure(const MeasureExpr& expr) {
  std::string out;
  for (std::size_t i = 0; i < expr.parts.size(); ++i) {
    if (i) out += "+";
    out += expr.parts[i].factorised ? "nu_" : "mu_";
    out += std::to_string(expr.parts[i].d);
  }
  return out;
}

void check_oracle_caps(int n, int degree_sum) {
  const Config& cfg = Config::global();
  require(n >= 0 && n <= cfg.oracle_n_cap, errc::cap_exceeded,
          "exact oracle capped at n <= " + std::to_string(cfg.oracle_n_cap));
  require(degree_sum <= cfg.oracle_degree_cap, errc::cap_exceeded,
          "exact oracle capped at total degree <= " +
              std::to_string(cfg.oracle_degree_cap));
}

Graph graph_from_rows(const std::uint64_t* rows, int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (std::uint64_t rest = rows[u] >> (u + 1) << (u + 1); rest;) {
      int v = __builtin_ctzll(rest);
      rest &= rest - 1;
      g.add_edge(u, v);
    }
  return g;
}

std::vector<Graph> enumerate_regular(int n, int d) {
  std::vector<Graph> out;
  std::uint64_t cap = Config::global().support_cap;
  for_each_regular(n, d, [&](const std::uint64_t* rows) {
    require(out.size() < cap, errc::cap_exceeded,
            "family exceeds the materialization cap");
    out.push_back(graph_from_rows(rows, n));
  });
  return out;
}

std::uint64_t count_regular_enumerated(int n, int d) {
  std::uint64_t c = 0;
  for_each_regular(n, d, [&](const std::uint64_t*) { ++c; });
  return c;
}

std::uint64_t count_regular_enumerated_edgewise(int n, int d) {
  std::uint64_t c = 0;
  for_each_regular_edgewise(n, d, [&](const std::uint64_t*) { ++c; });
  return c;
}

namespace {

// State: counts of open vertices per residual degree 1..d, packed 8 bits
// each. One vertex of the highest open residual is eliminated per step.
struct DegreeCountDp {
  int d;
  std::unordered_map<std::uint64_t, Int> memo;

  std::uint64_t key(const int* c) const {
    std::uint64_t k = 0;
    for (int i = 1; i <= d; ++i) k = k << 8 | static_cast<unsigned>(c[i]);
    return k;
  }

  Int count(int* c) {
    int j = d;
    while (j >= 1 && c[j] == 0) --j;
    if (j == 0) return 1;
    std::uint64_t k = key(c);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    c[j] -= 1;  // eliminate one vertex of residual j
    Int total = distribute(c, j, 1, Int(1));
    c[j] += 1;
    memo.emplace(k, total);
    return total;
  }

  // Choose how many of the pivot's `need` edges land in class i (ascending:
  // freshly decremented vertices fall into classes already passed, so the
  // pivot never doubles an edge).
  Int distribute(int* c, int need, int i, Int ways) {
    if (need == 0) return ways * count(c);
    if (i > d) return 0;
    Int total = 0;
    int top = std::min(need, c[i]);
    for (int a = 0; a <= top; ++a) {
      if (a > 0) {
        c[i] -= a;
        c[i - 1] += a;
      }
      Int w = ways * binomial(c[i] + a, a);
      total += distribute(c, need - a, i + 1, w);
      if (a > 0) {
        c[i] += a;
        c[i - 1] -= a;
      }
    }
    return total;
  }
};

}  // namespace

Int count_regular_exact(int n, int d) {
  require(n >= 0 && n <= 200 && d >= 0 && d <= 7, errc::cap_exceeded,
          "exact count supports n <= 200, d <= 7");
  if (d >= std::max(n, 1)) return 0;
  require(static_cast<long long>(n) * d % 2 == 0, errc::parity_violation,
          "dn must be even");
  if (d == 0 || n == 0) return 1;
  DegreeCountDp dp;
  dp.d = d;
  std::vector<int> c(d + 1, 0);
  c[d] = n;
  return dp.count(c.data());
}

Int count_degree_profile(const std::vector<int>& profile) {
  int d = static_cast<int>(profile.size()) - 1;
  while (d > 0 && profile[d] == 0) --d;
  require(d <= 7, errc::cap_exceeded, "exact count supports degrees <= 7");
  long long n = 0, degsum = 0;
  for (int k = 0; k <= d; ++k) {
    require(profile[k] >= 0, errc::invalid_argument, "negative multiplicity");
    n += profile[k];
    degsum += static_cast<long long>(k) * profile[k];
  }
  require(n <= 200, errc::cap_exceeded, "exact count supports n <= 200");
  require(degsum % 2 == 0, errc::parity_violation, "degree sum must be even");
  if (d >= std::max<long long>(n, 1)) return 0;
  if (d == 0) return 1;
  DegreeCountDp dp;
  dp.d = d;
  std::vector<int> c(d + 1, 0);
  for (int k = 0; k <= d; ++k) c[k] = profile[k];
  c[0] = 0;
  return dp.count(c.data());
}

const Rat* Distribution::mass_of(const Graph& g) const {
  auto it = std::lower_bound(
      atoms.begin(), atoms.end(), g,
      [](const std::pair<Graph, Rat>& a, const Graph& b) { return a.first < b; });
  if (it == atoms.end() || !(it->first == g)) return nullptr;
  return &it->second;
}

std::string Distribution::dump_json() const {
  std::string out = "{\"n\":" + std::to_string(n) + ",\"atoms\":[";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ",";
    out += "{\"graph\":\"" + edge_token(atoms[i].first) + "\",\"mass_num\":\"" +
           atoms[i].second.get_num().get_str() + "\",\"mass_den\":\"" +
           atoms[i].second.get_den().get_str() + "\"}";
  }
  out += "]}";
  return out;
}

Distribution distribution_from_weights(int n,
                                       std::vector<std::pair<Graph, Int>> w) {
  Int total = 0;
  for (const auto& [g, wt] : w) total += wt;
  require(total > 0, errc::empty_support, "measure has empty support");
  Distribution dist;
  dist.n = n;
  dist.normalizer = total;
  std::sort(w.begin(), w.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [g, wt] : w) {
    if (wt == 0) continue;
    dist.atoms.emplace_back(std::move(g), make_rat(wt, total));
  }
  return dist;
}

namespace {

Distribution atom_distribution(bool factorised, int d, int n) {
  require(static_cast<long long>(n) * d % 2 == 0, errc::parity_violation,
          "dn must be even for every part");
  std::vector<std::pair<Graph, Int>> w;
  std::uint64_t cap = Config::global().support_cap;
  for_each_regular(n, d, [&](const std::uint64_t* rows) {
    require(w.size() < cap, errc::cap_exceeded,
            "family exceeds the materialization cap");
    Graph g = graph_from_rows(rows, n);
    Int wt = 1;
    if (factorised) wt = count_one_factorisations_ordered(g);
    w.emplace_back(std::move(g), std::move(wt));
  });
  return distribution_from_weights(n, std::move(w));
}

}  // namespace

Distribution oplus(const Distribution& p, const Distribution& q) {
  require(p.n == q.n, errc::invalid_argument,
          "composition parts need a common vertex count");
  require(p.n <= 16, errc::cap_exceeded, "composition capped at n <= 16");

  auto scaled = [](const Distribution& dist) {
    Int den = 1;
    for (const auto& [g, m] : dist.atoms)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m.get_den().get_mpz_t());
    std::vector<Int> w;
    w.reserve(dist.atoms.size());
    for (const auto& [g, m] : dist.atoms)
      w.push_back(Int(m.get_num() * (den / m.get_den())));
    return w;
  };
  std::vector<Int> wp = scaled(p), wq = scaled(q);
  std::vector<u128> mp, mq;
  mp.reserve(p.atoms.size());
  mq.reserve(q.atoms.size());
  for (const auto& [g, m] : p.atoms) mp.push_back(pack_graph(g));
  for (const auto& [g, m] : q.atoms) mq.push_back(pack_graph(g));

  std::unordered_map<u128, Int, U128Hash> acc;
  for (std::size_t i = 0; i < mp.size(); ++i) {
    const u128 a = mp[i];
    for (std::size_t j = 0; j < mq.size(); ++j) {
      if (a & mq[j]) continue;
      acc[a | mq[j]] += wp[i] * wq[j];
    }
  }
  require(!acc.empty(), errc::empty_support,
          "no edge-disjoint decomposition exists");
  require(acc.size() <= Config::global().support_cap, errc::cap_exceeded,
          "composition support exceeds the materialization cap");

  std::vector<std::pair<Graph, Int>> w;
  w.reserve(acc.size());
  for (auto& [key, wt] : acc)
    w.emplace_back(unpack_graph(key, p.n), std::move(wt));
  return distribution_from_weights(p.n, std::move(w));
}

Distribution exact_distribution(const MeasureExpr& expr, int n) {
  check_oracle_caps(n, expr.total_degree());
  Distribution dist = atom_distribution(expr.parts[0].factorised,
                                        expr.parts[0].d, n);
  for (std::size_t i = 1; i < expr.parts.size(); ++i)
    dist = oplus(dist, atom_distribution(expr.parts[i].factorised,
                                         expr.parts[i].d, n));
  return dist;
}

Rat exact_tv(const Distribution& p, const Distribution& q) {
  require(p.n == q.n, errc::invalid_argument,
          "TV needs a common vertex count");
  Rat sum = 0;
  std::size_t i = 0, j = 0;
  while (i < p.atoms.size() || j < q.atoms.size()) {
    if (j == q.atoms.size() ||
        (i < p.atoms.size() && p.atoms[i].first < q.atoms[j].first)) {
      sum += p.atoms[i].second;
      ++i;
    } else if (i == p.atoms.size() || q.atoms[j].first < p.atoms[i].first) {
      sum += q.atoms[j].second;
      ++j;
    } else {
      sum += abs(p.atoms[i].second - q.atoms[j].second);
      ++i;
      ++j;
    }
  }
  return sum / 2;
}

ClassDistribution class_distribution(const Distribution& dist) {
  struct Acc {
    Graph rep;
    Int size;
    Rat mass;
  };
  std::map<std::string, Acc> by_key;
  for (const auto& [g, m] : dist.atoms) {
    CanonicalResult c = canonical_form(g);
    auto it = by_key.find(c.key);
    if (it == by_key.end())
      by_key.emplace(c.key, Acc{c.canonical, 1, m});
    else {
      it->second.size += 1;
      it->second.mass += m;
    }
  }
  ClassDistribution out;
  out.n = dist.n;
  for (auto& [key, acc] : by_key)
    out.atoms.push_back({key, acc.rep, acc.size, acc.mass});
  return out;
}

Rat class_tv(const ClassDistribution& p, const ClassDistribution& q) {
  Rat sum = 0;
  std::size_t i = 0, j = 0;
  while (i < p.atoms.size() || j < q.atoms.size()) {
    if (j == q.atoms.size() ||
        (i < p.atoms.size() && p.atoms[i].key < q.atoms[j].key)) {
      sum += p.atoms[i].mass;
      ++i;
    } else if (i == p.atoms.size() || q.atoms[j].key < p.atoms[i].key) {
      sum += q.atoms[j].mass;
      ++j;
    } else {
      sum += abs(p.atoms[i].mass - q.atoms[j].mass);
      ++i;
      ++j;
    }
  }
  return sum / 2;
}

Rat BetaWeigher::beta(const Graph& g) const {
  Rat sum = 0;
  for (const auto& [h, m] : tau_.atoms)
    if (edge_disjoint(g, h)) sum += m;
  return sum;
}

Rat exact_disjoint_probability(const std::vector<Distribution>& parts) {
  require(!parts.empty(), errc::invalid_argument, "no parts");
  double work = 1;
  for (const auto& p : parts) work *= static_cast<double>(p.atoms.size());
  require(work <= 5e7, errc::cap_exceeded,
          "joint support too large for exact disjointness probability");
  int n = parts[0].n;
  std::vector<std::vector<u128>> masks(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require(parts[i].n == n, errc::invalid_argument,
            "parts need a common vertex count");
    for (const auto& [g, m] : parts[i].atoms)
      masks[i].push_back(pack_graph(g));
  }
  Rat total = 0;
  auto rec = [&](auto&& self, std::size_t level, u128 used, Rat prob) -> void {
    if (level == parts.size()) {
      total += prob;
      return;
    }
    const auto& atoms = parts[level].atoms;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (used & masks[level][i]) continue;
      self(self, level + 1, used | masks[level][i], Rat(prob * atoms[i].second));
    }
  };
  rec(rec, 0, 0, Rat(1));
  return total;
}

Distribution exact_asp_law(int n, int d, int k) {
  require(k >= 1, errc::invalid_argument, "k must be positive");
  check_oracle_caps(n, d * k);
  Distribution nu = exact_distribution(parse_measure("nu_" + std::to_string(d)), n);
  ClassDistribution classes = class_distribution(nu);

  // members per class, packed
  std::vector<std::vector<u128>> members(classes.atoms.size());
  for (const auto& [g, m] : nu.atoms) {
    std::string key = canonical_key(g);
    for (std::size_t c = 0; c < classes.atoms.size(); ++c)
      if (classes.atoms[c].key == key) {
        members[c].push_back(pack_graph(g));
        break;
      }
  }

  double worst = 1;
  for (int i = 0; i < k; ++i) worst *= static_cast<double>(nu.atoms.size());
  require(worst <= 2e7, errc::cap_exceeded,
          "overlay law too large for exact evaluation");

  std::unordered_map<u128, Rat, U128Hash> law;
  Rat feasible_weight = 0;
  std::vector<int> tuple(k, 0);

  auto eval_tuple = [&]() {
    // count pairwise-disjoint representative tuples and their unions
    std::unordered_map<u128, std::uint64_t, U128Hash> unions;
    std::uint64_t total = 0;
    auto rec = [&](auto&& self, int level, u128 used) -> void {
      if (level == k) {
        ++total;
        ++unions[used];
        return;
      }
      for (u128 m : members[tuple[level]]) {
        if (used & m) continue;
        self(self, level + 1, used | m);
      }
    };
    rec(rec, 0, 0);
    if (total == 0) return;  // infeasible class tuple: redrawn by the sampler
    Rat weight = 1;
    for (int i = 0; i < k; ++i) weight *= classes.atoms[tuple[i]].mass;
    feasible_weight += weight;
    for (const auto& [u, cnt] : unions)
      law[u] += weight * make_rat(Int(static_cast<unsigned long>(cnt)),
                                  Int(static_cast<unsigned long>(total)));
  };

  auto loop = [&](auto&& self, int level) -> void {
    if (level == k) {
      eval_tuple();
      return;
    }
    for (std::size_t c = 0; c < classes.atoms.size(); ++c) {
      tuple[level] = static_cast<int>(c);
      self(self, level + 1);
    }
  };
  loop(loop, 0);

  require(feasible_weight > 0, errc::empty_support,
          "no feasible class tuple");
  Distribution out;
  out.n = n;
  out.normalizer = 1;
  std::vector<std::pair<Graph, Rat>> atoms;
  atoms.reserve(law.size());
  for (auto& [key, mass] : law)
    atoms.emplace_back(unpack_graph(key, n), Rat(mass / feasible_weight));
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.atoms = std::move(atoms);
  return out;
}

ExtensionStats extension_stats(int n, int d) {
  require(n <= 12, errc::cap_exceeded, "extension stats capped at n <= 12");
  require(d + 1 <= Config::global().oracle_degree_cap, errc::cap_exceeded,
          "degree beyond oracle cap");
  ExtensionStats st;
  st.n = n;
  st.d = d;
  for_each_regular(n, d + 1, [&](const std::uint64_t* rows) {
    std::int64_t pm = count_perfect_matchings_rows(rows, n);
    ++st.count_super;
    st.pm_total += static_cast<std::uint64_t>(pm);
    ++st.pm_histogram[pm];
  });
  require(st.count_super > 0, errc::empty_support, "no graphs at this degree");
  require(st.pm_total > 0, errc::empty_support,
          "no decomposable graph at this degree");
  // TV(mu_d (+) mu_1, mu_{d+1}) = 1/2 sum_y N_y |y/S - 1/N|
  Int num = 0;
  Int S(static_cast<unsigned long>(st.pm_total));
  Int N(static_cast<unsigned long>(st.count_super));
  for (const auto& [y, cnt] : st.pm_histogram) {
    Int term = Int(y) * N - S;
    if (term < 0) term = -term;
    num += Int(static_cast<unsigned long>(cnt)) * term;
  }
  st.tv = make_rat(num, Int(2) * S * N);
  return st;
}

CondEdgeExact conditional_edge_exact(int n, int d, const Graph& h, int u,
                                     int v) {
  require(n <= 12, errc::cap_exceeded,
          "exact conditional probability capped at n <= 12");
  require(h.n() == n, errc::invalid_argument, "h must live on n vertices");
  require(u >= 0 && u < n && v >= 0 && v < n && u != v, errc::invalid_argument,
          "bad edge endpoints");
  require(!h.has_edge(u, v), errc::edge_already_present,
          "h already contains uv");
  for (int w = 0; w < n; ++w)
    require(h.degree(w) <= d, errc::degree_exceeded,
            "h exceeds the target degree");
  auto h_edges = h.edges();
  CondEdgeExact r;
  for_each_regular(n, d, [&](const std::uint64_t* rows) {
    for (auto [a, b] : h_edges)
      if (!(rows[a] >> b & 1)) return;
    ++r.total;
    if (rows[u] >> v & 1) ++r.with_uv;
  });
  require(r.total > 0, errc::empty_support, "no graph contains h");
  r.prob = make_rat(Int(static_cast<unsigned long>(r.with_uv)),
                    Int(static_cast<unsigned long>(r.total)));
  return r;
}

}  // namespace rrg::oracle
