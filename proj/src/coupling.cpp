#include "rrg/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rrg/canonical.hpp"
#include "rrg/config.hpp"
#include "rrg/counting.hpp"
#include "rrg/errors.hpp"
#include "rrg/maxflow.hpp"
#include "rrg/samplers.hpp"

namespace rrg::coupling {
namespace {

Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Exact distributions are expensive to enumerate; the couplers below hit the
// same few (measure, n) pairs once per trial, so memoize them.
const oracle::Distribution& cached_distribution(const std::string& expr,
                                                int n) {
  static std::map<std::pair<std::string, int>, oracle::Distribution> cache;
  auto key = std::make_pair(expr, n);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache
             .emplace(key, oracle::exact_distribution(
                               oracle::parse_measure(expr), n))
             .first;
  return it->second;
}

const oracle::ClassDistribution& cached_classes(const std::string& expr,
                                                int n) {
  static std::map<std::pair<std::string, int>, oracle::ClassDistribution>
      cache;
  auto key = std::make_pair(expr, n);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, oracle::class_distribution(
                                cached_distribution(expr, n)))
             .first;
  return it->second;
}

Rat tv_of(const std::vector<Rat>& p, const std::vector<Rat>& q) {
  Rat s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += rat_abs(p[i] - q[i]);
  return Rat(s / 2);
}

void check_probability_vector(const std::vector<Rat>& p, const char* what) {
  Rat s = 0;
  for (const Rat& x : p) {
    require(x >= 0, errc::invalid_argument, "negative mass");
    s += x;
  }
  require(s == 1, errc::invalid_argument, what);
}

// Merge two labelled mass vectors onto a common sorted label space.
void align(const std::vector<std::string>& la, const std::vector<Rat>& pa,
           const std::vector<std::string>& lb, const std::vector<Rat>& pb,
           std::vector<std::string>& labels, std::vector<Rat>& p,
           std::vector<Rat>& q) {
  std::set<std::string> all(la.begin(), la.end());
  all.insert(lb.begin(), lb.end());
  labels.assign(all.begin(), all.end());
  p.assign(labels.size(), Rat(0));
  q.assign(labels.size(), Rat(0));
  auto at = [&](const std::string& key) {
    return static_cast<int>(
        std::lower_bound(labels.begin(), labels.end(), key) - labels.begin());
  };
  for (std::size_t i = 0; i < la.size(); ++i) p[at(la[i])] = pa[i];
  for (std::size_t i = 0; i < lb.size(); ++i) q[at(lb[i])] = pb[i];
}

}  // namespace

Rat CouplingTable::diagonal_mass() const {
  Rat s = 0;
  for (const auto& [cell, mass] : joint)
    if (left_labels[cell.first] == right_labels[cell.second]) s += mass;
  return s;
}

void CouplingTable::verify_marginals() const {
  std::vector<Rat> rows(left_labels.size(), Rat(0));
  std::vector<Rat> cols(right_labels.size(), Rat(0));
  for (const auto& [cell, mass] : joint) {
    require(mass >= 0, errc::invalid_argument, "negative joint mass");
    rows[cell.first] += mass;
    cols[cell.second] += mass;
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    require(rows[i] == left_marginal[i], errc::invalid_argument,
            "row sum differs from left marginal");
  for (std::size_t j = 0; j < cols.size(); ++j)
    require(cols[j] == right_marginal[j], errc::invalid_argument,
            "column sum differs from right marginal");
}

std::pair<int, int> CouplingTable::sample(Rng& rng) const {
  double u = rng.unit(), acc = 0;
  std::pair<int, int> last{0, 0};
  for (const auto& [cell, mass] : joint) {
    acc += mass.get_d();
    last = cell;
    if (u < acc) return cell;
  }
  return last;  // guard against accumulated rounding
}

CouplingTable maximal_coupling(const std::vector<std::string>& labels,
                               const std::vector<Rat>& p,
                               const std::vector<Rat>& q) {
  require(labels.size() == p.size() && labels.size() == q.size(),
          errc::invalid_argument, "label/mass size mismatch");
  check_probability_vector(p, "left masses must sum to 1");
  check_probability_vector(q, "right masses must sum to 1");
  CouplingTable t;
  t.left_labels = labels;
  t.right_labels = labels;
  t.left_marginal = p;
  t.right_marginal = q;
  std::vector<Rat> rp(labels.size()), rq(labels.size());
  Rat tv = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Rat diag = std::min(p[i], q[i]);
    if (diag > 0) t.joint[{static_cast<int>(i), static_cast<int>(i)}] = diag;
    rp[i] = p[i] - diag;
    rq[i] = q[i] - diag;
    tv += rp[i];
  }
  if (tv > 0) {
    // Off the diagonal the two sides are independent: the joint cell mass is
    // the product of the normalized residuals. Residual supports are
    // disjoint, so no off-diagonal cell lands on equal labels.
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (rp[i] == 0) continue;
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (rq[j] == 0) continue;
        t.joint[{static_cast<int>(i), static_cast<int>(j)}] =
            Rat(rp[i] * rq[j] / tv);
      }
    }
  }
  t.verify_marginals();
  return t;
}

CouplingTable maximal_coupling(const oracle::Distribution& p,
                               const oracle::Distribution& q) {
  require(p.n == q.n, errc::invalid_argument, "vertex counts differ");
  std::vector<std::string> la, lb;
  std::vector<Rat> pa, pb;
  for (const auto& [g, m] : p.atoms) {
    la.push_back(g.format());
    pa.push_back(m);
  }
  for (const auto& [g, m] : q.atoms) {
    lb.push_back(g.format());
    pb.push_back(m);
  }
  std::vector<std::string> labels;
  std::vector<Rat> pp, qq;
  align(la, pa, lb, pb, labels, pp, qq);
  return maximal_coupling(labels, pp, qq);
}

CouplingTable maximal_coupling(const oracle::ClassDistribution& p,
                               const oracle::ClassDistribution& q) {
  require(p.n == q.n, errc::invalid_argument, "vertex counts differ");
  std::vector<std::string> la, lb;
  std::vector<Rat> pa, pb;
  for (const auto& a : p.atoms) {
    la.push_back(a.key);
    pa.push_back(a.mass);
  }
  for (const auto& a : q.atoms) {
    lb.push_back(a.key);
    pb.push_back(a.mass);
  }
  std::vector<std::string> labels;
  std::vector<Rat> pp, qq;
  align(la, pa, lb, pb, labels, pp, qq);
  return maximal_coupling(labels, pp, qq);
}

StrassenProfile strassen_profile(const std::vector<std::int64_t>& s_degrees,
                                 const std::vector<std::int64_t>& t_degrees,
                                 std::int64_t edges, const Rat& eps) {
  Rat one_minus(1);
  one_minus -= eps;
  auto fraction_below = [&](const std::vector<std::int64_t>& degs,
                            std::int64_t side) {
    // threshold: deg >= (1-eps)*edges/side  <=>  deg*side >= (1-eps)*edges
    std::int64_t low = 0;
    for (std::int64_t v : degs)
      if (Rat(Int(v) * Int(side)) < Rat(one_minus * Rat(Int(edges)))) ++low;
    return make_rat(Int(low), Int(side));
  };
  StrassenProfile out;
  out.delta_s = fraction_below(s_degrees, static_cast<std::int64_t>(s_degrees.size()));
  out.delta_t = fraction_below(t_degrees, static_cast<std::int64_t>(t_degrees.size()));
  return out;
}

namespace {

// Histogram form: degree -> multiplicity. Chooses (delta, eps) minimizing
// 2*delta + eps/(1-eps) over the breakpoints of the degree profile.
struct Extraction {
  Rat delta, eps, bound;
};

Extraction extract_delta_eps(const std::map<std::int64_t, std::int64_t>& s_hist,
                             const std::map<std::int64_t, std::int64_t>& t_hist,
                             std::int64_t s, std::int64_t t,
                             std::int64_t edges) {
  std::set<Rat> candidates{Rat(0)};
  auto add_candidates = [&](const std::map<std::int64_t, std::int64_t>& hist,
                            std::int64_t side) {
    for (const auto& [deg, cnt] : hist) {
      (void)cnt;
      // eps making this degree exactly meet the threshold
      Rat e = make_rat(Int(edges) - Int(deg) * Int(side), Int(edges));
      if (e > 0 && e < 1) candidates.insert(e);
    }
  };
  add_candidates(s_hist, s);
  add_candidates(t_hist, t);
  auto delta_for = [&](const std::map<std::int64_t, std::int64_t>& hist,
                       std::int64_t side, const Rat& eps) {
    Rat threshold = Rat(1 - eps) * make_rat(Int(edges), Int(side));
    Int low = 0;
    for (const auto& [deg, cnt] : hist)
      if (Rat(Int(deg)) < threshold) low += Int(cnt);
    return make_rat(low, Int(side));
  };
  bool first = true;
  Extraction best;
  for (const Rat& eps : candidates) {
    Rat ds = delta_for(s_hist, s, eps);
    Rat dt = delta_for(t_hist, t, eps);
    Rat delta = std::max(ds, dt);
    Rat bound = Rat(2 * delta + eps / (Rat(1) - eps));
    if (first || bound < best.bound ||
        (bound == best.bound && eps < best.eps)) {
      best = {delta, eps, bound};
      first = false;
    }
  }
  return best;
}

struct FlowOutcome {
  std::int64_t scale = 0, value = 0;
  std::vector<std::pair<std::pair<int, int>, std::int64_t>> edge_flows;
  std::vector<std::int64_t> s_deficit, t_deficit;
};

FlowOutcome transport_flow(const std::vector<std::vector<int>>& adjacency,
                           std::int64_t t_size) {
  std::int64_t s = static_cast<std::int64_t>(adjacency.size());
  require(s > 0 && t_size > 0, errc::invalid_argument, "empty side");
  std::int64_t L = std::lcm(s, t_size);
  int source = 0, sink = 1;
  MaxFlow mf(static_cast<int>(2 + s + t_size));
  std::vector<int> s_arc(s), t_arc(t_size);
  std::vector<std::pair<std::pair<int, int>, int>> mid;
  for (std::int64_t i = 0; i < s; ++i)
    s_arc[i] = mf.add_edge(source, static_cast<int>(2 + i), L / s);
  for (std::int64_t j = 0; j < t_size; ++j)
    t_arc[j] = mf.add_edge(static_cast<int>(2 + s + j), sink, L / t_size);
  for (std::int64_t i = 0; i < s; ++i)
    for (int j : adjacency[i]) {
      require(j >= 0 && j < t_size, errc::invalid_argument, "bad adjacency");
      mid.push_back({{static_cast<int>(i), j},
                     mf.add_edge(static_cast<int>(2 + i),
                                 static_cast<int>(2 + s + j), L)});
    }
  FlowOutcome out;
  out.scale = L;
  out.value = mf.run(source, sink);
  for (const auto& [cell, id] : mid) {
    std::int64_t f = mf.flow_on(id);
    if (f > 0) out.edge_flows.push_back({cell, f});
  }
  out.s_deficit.resize(s);
  out.t_deficit.resize(t_size);
  for (std::int64_t i = 0; i < s; ++i)
    out.s_deficit[i] = L / s - mf.flow_on(s_arc[i]);
  for (std::int64_t j = 0; j < t_size; ++j)
    out.t_deficit[j] = L / t_size - mf.flow_on(t_arc[j]);
  return out;
}

}  // namespace

StrassenResult strassen_coupling(const std::vector<std::vector<int>>& adjacency,
                                 std::int64_t t_size) {
  std::int64_t s = static_cast<std::int64_t>(adjacency.size());
  std::map<std::int64_t, std::int64_t> s_hist, t_hist;
  std::vector<std::int64_t> t_deg(t_size, 0);
  std::int64_t edges = 0;
  for (const auto& nb : adjacency) {
    s_hist[static_cast<std::int64_t>(nb.size())] += 1;
    edges += static_cast<std::int64_t>(nb.size());
    for (int j : nb) t_deg[j] += 1;
  }
  require(edges > 0, errc::invalid_argument, "bipartite graph has no edges");
  for (std::int64_t j = 0; j < t_size; ++j) t_hist[t_deg[j]] += 1;

  Extraction ex = extract_delta_eps(s_hist, t_hist, s, t_size, edges);
  FlowOutcome flow = transport_flow(adjacency, t_size);
  std::int64_t L = flow.scale;

  StrassenResult out;
  out.delta = ex.delta;
  out.eps = ex.eps;
  out.bound = ex.bound;
  out.s_size = s;
  out.t_size = t_size;
  out.edge_count = edges;
  out.violation = make_rat(Int(L) - Int(flow.value), Int(L));

  CouplingTable& t = out.table;
  t.left_labels.resize(s);
  t.right_labels.resize(t_size);
  for (std::int64_t i = 0; i < s; ++i)
    t.left_labels[i] = "s" + std::to_string(i);
  for (std::int64_t j = 0; j < t_size; ++j)
    t.right_labels[j] = "t" + std::to_string(j);
  t.left_marginal.assign(s, make_rat(Int(1), Int(s)));
  t.right_marginal.assign(t_size, make_rat(Int(1), Int(t_size)));
  for (const auto& [cell, f] : flow.edge_flows)
    t.joint[cell] = make_rat(Int(f), Int(L));
  if (flow.value < L) {
    // Complete to exact marginals by pairing the two deficit profiles
    // independently; every completion cell is off the edge set.
    Int denom = Int(L) * (Int(L) - Int(flow.value));
    for (std::int64_t i = 0; i < s; ++i) {
      if (flow.s_deficit[i] == 0) continue;
      for (std::int64_t j = 0; j < t_size; ++j) {
        if (flow.t_deficit[j] == 0) continue;
        t.joint[{static_cast<int>(i), static_cast<int>(j)}] +=
            make_rat(Int(flow.s_deficit[i]) * Int(flow.t_deficit[j]), denom);
      }
    }
  }
  t.verify_marginals();
  require(out.violation <= out.bound, errc::infeasible_flow,
          "flow violates the degree-profile bound");
  return out;
}

ExtensionReport matching_extension_coupling(int n, int d,
                                            std::uint64_t trials, Rng& rng) {
  ExtensionReport out;
  out.n = n;
  out.d = d;
  if (n <= 10) {
    out.exact = true;
    oracle::ExtensionStats st = oracle::extension_stats(n, d);
    out.tv = st.tv;
    std::map<std::int64_t, std::int64_t> s_hist, t_hist;
    s_hist[1] = static_cast<std::int64_t>(st.pm_total);
    for (const auto& [y, cnt] : st.pm_histogram)
      t_hist[y] = static_cast<std::int64_t>(cnt);
    Extraction ex = extract_delta_eps(
        s_hist, t_hist, static_cast<std::int64_t>(st.pm_total),
        static_cast<std::int64_t>(st.count_super),
        static_cast<std::int64_t>(st.pm_total));
    out.delta = ex.delta;
    out.eps = ex.eps;
    out.bound = ex.bound;
    out.mean_extensions =
        static_cast<double>(st.pm_total) / static_cast<double>(st.count_super);
    // The pair side is 1-regular towards its union, so the minimal-violation
    // coupling misses exactly on the distance between the two laws; build
    // the flow explicitly while the pair set is small enough to hold.
    if (st.pm_total <= 200000) {
      std::vector<Graph> supers = oracle::enumerate_regular(n, d + 1);
      std::vector<std::vector<int>> adjacency;
      adjacency.reserve(st.pm_total);
      for (std::size_t j = 0; j < supers.size(); ++j) {
        std::int64_t y = count_perfect_matchings(supers[j]);
        for (std::int64_t r = 0; r < y; ++r)
          adjacency.push_back({static_cast<int>(j)});
      }
      FlowOutcome flow = transport_flow(
          adjacency, static_cast<std::int64_t>(supers.size()));
      out.flow_ran = true;
      out.flow_violation =
          make_rat(Int(flow.scale) - Int(flow.value), Int(flow.scale));
      require(out.flow_violation <= out.bound, errc::infeasible_flow,
              "flow violates the degree-profile bound");
    }
    return out;
  }
  require(n <= 28, errc::cap_exceeded, "matching extension capped at n <= 28");
  require(trials >= 2, errc::invalid_argument, "need trials for the MC path");
  out.trials = trials;
  std::vector<double> ys;
  ys.reserve(trials);
  double sum = 0;
  std::map<std::int64_t, std::int64_t> t_hist;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Graph g = samplers::sample_regular(n, d + 1, rng);
    std::int64_t y = count_perfect_matchings(g);
    t_hist[y] += 1;
    ys.push_back(static_cast<double>(y));
    sum += static_cast<double>(y);
  }
  double mean = sum / static_cast<double>(trials);
  out.mean_extensions = mean;
  double dev = 0;
  for (double y : ys) dev += std::abs(y - mean);
  out.tv_estimate = mean > 0 ? dev / (2.0 * mean * static_cast<double>(trials)) : 0;
  std::int64_t total = 0;
  for (const auto& [y, cnt] : t_hist) total += y * cnt;
  std::map<std::int64_t, std::int64_t> s_hist{{1, total}};
  Extraction ex = extract_delta_eps(s_hist, t_hist, total,
                                    static_cast<std::int64_t>(trials), total);
  out.delta = ex.delta;
  out.eps = ex.eps;
  out.bound = ex.bound;
  return out;
}

AspResult asp_sample(int n, int d, int k, Rng& rng) {
  require(n % 2 == 0, errc::odd_n, "n must be even");
  require(k >= 1 && d >= 1, errc::invalid_argument, "k and d must be positive");
  require(static_cast<long long>(k) * d <= n - 1, errc::invalid_argument,
          "kd must not exceed n-1");
  const auto& cfg = Config::global();
  std::uint64_t budget = cfg.rejection_budget;
  std::uint64_t spent = 0;
  AspResult out;
  while (spent < budget) {
    // i.i.d. class draws, carried by one sampled member each
    std::vector<Graph> reps;
    std::vector<std::string> keys;
    reps.reserve(k);
    for (int i = 0; i < k; ++i) {
      Graph g = samplers::sample_nu(n, d, rng).graph;
      keys.push_back(canonical_key(g));
      reps.push_back(std::move(g));
    }
    // uniform representatives: uniform relabellings of the carriers,
    // jointly rejected until pairwise edge-disjoint
    std::uint64_t tuple_budget = std::min<std::uint64_t>(
        budget - spent, cfg.max_coupling_rounds);
    for (std::uint64_t attempt = 0; attempt < tuple_budget; ++attempt) {
      ++spent;
      std::vector<Graph> hs;
      hs.reserve(k);
      for (int i = 0; i < k; ++i)
        hs.push_back(relabel(reps[i], rng.permutation(n)));
      bool ok = true;
      for (int a = 0; a < k && ok; ++a)
        for (int b = a + 1; b < k && ok; ++b)
          if (!edge_disjoint(hs[a], hs[b])) ok = false;
      if (ok) {
        out.unioned = union_disjoint(hs);
        out.classes = std::move(keys);
        return out;
      }
    }
    // class tuple looks infeasible at this budget: redraw it wholesale
    ++out.class_redraws;
  }
  fail(errc::rejection_budget_exceeded, "asp_sample exhausted its budget");
}

ZetaTrace zeta_recursion(const std::vector<std::string>& labels,
                         const std::vector<Rat>& mu, const std::vector<Rat>& nu,
                         const Rat& epsilon) {
  require(epsilon > 0 && epsilon < 1, errc::invalid_argument,
          "epsilon must lie in (0,1)");
  require(labels.size() == mu.size() && labels.size() == nu.size(),
          errc::invalid_argument, "label/mass size mismatch");
  check_probability_vector(mu, "mu must sum to 1");
  check_probability_vector(nu, "nu must sum to 1");
  ZetaTrace trace;
  trace.labels = labels;
  trace.mu = mu;
  trace.nu = nu;
  std::vector<Rat> zeta = mu;
  Rat Z_prev = 1, product = 1;
  const auto& cfg = Config::global();
  for (std::uint64_t i = 1;; ++i) {
    require(i <= cfg.max_coupling_rounds, errc::non_termination,
            "zeta recursion failed to reach epsilon");
    ZetaState st;
    st.i = static_cast<int>(i);
    st.zeta.resize(labels.size());
    st.Z = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      Rat scaled = Rat(zeta[c] / Z_prev);
      Rat next = scaled - std::min(scaled, nu[c]);
      require(next >= 0, errc::invalid_argument, "zeta went negative");
      st.zeta[c] = next;
      st.Z += next;
    }
    require(st.Z >= 0 && st.Z <= 1, errc::invalid_argument,
            "partition value out of [0,1]");
    Rat new_product = Rat(product * st.Z);
    require(new_product <= product, errc::invalid_argument,
            "product must be non-increasing");
    product = new_product;
    st.product = product;
    zeta = st.zeta;
    Z_prev = st.Z;
    trace.states.push_back(std::move(st));
    if (product <= epsilon) {
      trace.k = static_cast<int>(i);
      trace.miss_probability = product;
      break;
    }
    if (Z_prev == 0) {
      trace.k = static_cast<int>(i);
      trace.miss_probability = 0;
      break;
    }
  }
  return trace;
}

ZetaTrace zeta_coupling(const oracle::ClassDistribution& bar_mu,
                        const oracle::ClassDistribution& bar_nu,
                        const Rat& epsilon) {
  require(bar_mu.n == bar_nu.n, errc::invalid_argument,
          "vertex counts differ");
  std::vector<std::string> la, lb;
  std::vector<Rat> pa, pb;
  for (const auto& a : bar_mu.atoms) {
    la.push_back(a.key);
    pa.push_back(a.mass);
  }
  for (const auto& a : bar_nu.atoms) {
    lb.push_back(a.key);
    pb.push_back(a.mass);
  }
  std::vector<std::string> labels;
  std::vector<Rat> mu, nu;
  align(la, pa, lb, pb, labels, mu, nu);
  return zeta_recursion(labels, mu, nu, epsilon);
}

ZetaSample zeta_sample(const ZetaTrace& trace, Rng& rng) {
  std::size_t cells = trace.labels.size();
  std::vector<double> nu(cells);
  for (std::size_t c = 0; c < cells; ++c) nu[c] = trace.nu[c].get_d();
  auto draw_nu = [&]() {
    double u = rng.unit(), acc = 0;
    int last = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      if (nu[c] <= 0) continue;
      acc += nu[c];
      last = static_cast<int>(c);
      if (u < acc) return last;
    }
    return last;
  };
  ZetaSample out;
  // p_i = zeta_{i-1}/Z_{i-1}: the conditional law of X while unmatched
  std::vector<double> p(cells);
  for (std::size_t c = 0; c < cells; ++c) p[c] = trace.mu[c].get_d();
  for (int i = 1; i <= trace.k; ++i) {
    int y = draw_nu();
    out.y_classes.push_back(y);
    if (!out.hit) {
      double accept = nu[y] > 0 ? std::min(p[y], nu[y]) / nu[y] : 0.0;
      if (rng.unit() < accept) {
        out.hit = true;
        out.step = i;
        out.class_index = y;
      } else {
        const ZetaState& st = trace.states[static_cast<std::size_t>(i - 1)];
        double z = st.Z.get_d();
        for (std::size_t c = 0; c < cells; ++c)
          p[c] = z > 0 ? st.zeta[c].get_d() / z : 0.0;
      }
    }
  }
  if (!out.hit) {
    // X keeps the residual law zeta_k / Z_k
    double u = rng.unit(), acc = 0;
    for (std::size_t c = 0; c < cells; ++c) {
      if (p[c] <= 0) continue;
      acc += p[c];
      out.class_index = static_cast<int>(c);
      if (u < acc) break;
    }
  }
  return out;
}

CompleteCoupleResult complete_couple(int n, int d, const Rat& epsilon,
                                     Rng& rng) {
  const oracle::ClassDistribution& bar_mu =
      cached_classes("mu_" + std::to_string(d), n);
  const oracle::ClassDistribution& bar_nu =
      cached_classes("nu_" + std::to_string(d), n);
  static std::map<std::pair<std::pair<int, int>, Rat>, ZetaTrace> trace_cache;
  auto tkey = std::make_pair(std::make_pair(n, d), epsilon);
  auto tit = trace_cache.find(tkey);
  if (tit == trace_cache.end())
    tit = trace_cache.emplace(tkey, zeta_coupling(bar_mu, bar_nu, epsilon))
              .first;
  const ZetaTrace& trace = tit->second;

  std::map<std::string, Graph> reps;
  for (const auto& a : bar_mu.atoms) reps.emplace(a.key, a.representative);
  for (const auto& a : bar_nu.atoms) reps.emplace(a.key, a.representative);

  ZetaSample zs = zeta_sample(trace, rng);
  int k = trace.k;
  const auto& cfg = Config::global();
  CompleteCoupleResult out;
  out.k = k;
  out.hit = zs.hit;
  for (std::uint64_t attempt = 0;; ++attempt) {
    require(attempt < cfg.max_coupling_rounds, errc::rejection_budget_exceeded,
            "representative alignment exhausted its budget");
    std::vector<Graph> hs;
    hs.reserve(k);
    for (int i = 0; i < k; ++i) {
      auto it = reps.find(trace.labels[static_cast<std::size_t>(
          zs.y_classes[static_cast<std::size_t>(i)])]);
      require(it != reps.end(), errc::empty_support, "missing class");
      hs.push_back(relabel(it->second, rng.permutation(n)));
    }
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      for (int b = a + 1; b < k && ok; ++b)
        if (!edge_disjoint(hs[a], hs[b])) ok = false;
    if (!ok) continue;
    // On a hit, G is the matched representative itself: conditionally on the
    // classes and disjointness, each representative is still uniform on its
    // class, so G keeps the uniform law on the matched class.
    if (zs.hit) {
      out.g = hs[static_cast<std::size_t>(zs.step - 1)];
    } else {
      auto it = reps.find(
          trace.labels[static_cast<std::size_t>(zs.class_index)]);
      require(it != reps.end(), errc::empty_support, "missing class");
      out.g = relabel(it->second, rng.permutation(n));
    }
    out.g_oplus = union_disjoint(hs);
    return out;
  }
}

namespace {

struct TransportPlan {
  oracle::ClassDistribution low, high;  // classes of G_{d1} and of G_{d2}
  // per (low class, high class): the complements C with rep_i u C in class j
  std::map<std::pair<int, int>, std::vector<Graph>> lists;
  std::vector<std::pair<std::pair<int, int>, double>> cdf;  // plan as CDF
  Rat value;  // routed fraction; 1 when the class plan is feasible
};

TransportPlan build_transport(int n, int d1, int d2) {
  TransportPlan plan;
  plan.low = cached_classes("mu_" + std::to_string(d1), n);
  plan.high = cached_classes("mu_" + std::to_string(d2), n);
  std::map<std::string, int> high_index;
  for (std::size_t j = 0; j < plan.high.atoms.size(); ++j)
    high_index.emplace(plan.high.atoms[j].key, static_cast<int>(j));

  std::vector<Graph> middles = oracle::enumerate_regular(n, d2 - d1);
  for (std::size_t i = 0; i < plan.low.atoms.size(); ++i) {
    const Graph& rep = plan.low.atoms[i].representative;
    for (const Graph& c : middles) {
      if (!edge_disjoint(rep, c)) continue;
      Graph u = union_disjoint(rep, c);
      auto it = high_index.find(canonical_key(u));
      require(it != high_index.end(), errc::empty_support,
              "union fell outside the enumerated classes");
      plan.lists[{static_cast<int>(i), it->second}].push_back(c);
    }
  }

  // integer transport between the two class laws, total = |G_d1| * |G_d2|
  Int total_low = 0, total_high = 0;
  for (const auto& a : plan.low.atoms) total_low += a.size;
  for (const auto& a : plan.high.atoms) total_high += a.size;
  require(total_low.fits_slong_p() && total_high.fits_slong_p(),
          errc::cap_exceeded, "class transport needs larger integers");
  std::int64_t nl = total_low.get_si(), nh = total_high.get_si();
  require(nl > 0 && nh > 0, errc::empty_support, "empty graph family");
  require(nl <= (std::int64_t{1} << 31) && nh <= (std::int64_t{1} << 31),
          errc::cap_exceeded, "class transport capped");

  int I = static_cast<int>(plan.low.atoms.size());
  int J = static_cast<int>(plan.high.atoms.size());
  MaxFlow mf(2 + I + J);
  std::vector<std::pair<std::pair<int, int>, int>> arcs;
  for (int i = 0; i < I; ++i)
    mf.add_edge(0, 2 + i, plan.low.atoms[static_cast<std::size_t>(i)].size.get_si() * nh);
  for (int j = 0; j < J; ++j)
    mf.add_edge(2 + I + j, 1, plan.high.atoms[static_cast<std::size_t>(j)].size.get_si() * nl);
  for (const auto& [cell, list] : plan.lists) {
    (void)list;
    arcs.push_back({cell, mf.add_edge(2 + cell.first, 2 + I + cell.second,
                                      nl * nh)});
  }
  std::int64_t value = mf.run(0, 1);
  plan.value = make_rat(Int(value), Int(nl) * Int(nh));
  double acc = 0, total = static_cast<double>(value);
  for (const auto& [cell, id] : arcs) {
    std::int64_t f = mf.flow_on(id);
    if (f <= 0) continue;
    acc += static_cast<double>(f) / total;
    plan.cdf.push_back({cell, acc});
  }
  return plan;
}

}  // namespace

InclusionReport inclusion_pipeline(int n, int d1, int d2,
                                   std::uint64_t trials, Rng& rng,
                                   int which_case, const Rat& epsilon) {
  require(1 <= d1 && d1 < d2, errc::invalid_argument,
          "need 1 <= d1 < d2");
  require(n % 2 == 0, errc::odd_n, "n must be even");
  require(which_case == 1 || which_case == 2, errc::invalid_argument,
          "case must be 1 or 2");
  InclusionReport out;
  out.n = n;
  out.d1 = d1;
  out.d2 = d2;
  out.trials = trials;
  out.used_case = which_case;

  const oracle::Distribution& mix = cached_distribution(
      "mu_" + std::to_string(d1) + "+nu_" + std::to_string(d2 - d1), n);
  const oracle::Distribution& mu2 = cached_distribution(
      "mu_" + std::to_string(d2), n);
  out.tv = oracle::exact_tv(mix, mu2);
  out.tv_exact = true;

  if (which_case == 2) {
    TransportPlan plan = build_transport(n, d1, d2);
    require(!plan.cdf.empty(), errc::infeasible_flow,
            "class transport routed no mass");
    out.transport_value = plan.value;
    for (const auto& a : plan.low.atoms) {
      out.g1_class_keys.push_back(a.key);
      out.g1_class_sizes.push_back(a.size);
    }
    out.g1_class_counts.assign(plan.low.atoms.size(), 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
      double u = rng.unit();
      std::pair<int, int> cell = plan.cdf.back().first;
      for (const auto& [c, acc] : plan.cdf)
        if (u < acc) {
          cell = c;
          break;
        }
      const auto& list = plan.lists.at(cell);
      std::vector<int> perm = rng.permutation(n);
      Graph a = relabel(
          plan.low.atoms[static_cast<std::size_t>(cell.first)].representative,
          perm);
      Graph c = relabel(list[rng.below(list.size())], perm);
      Graph g2 = union_disjoint(a, c);
      bool inside = true;
      for (const auto& [x, y] : a.edges())
        if (!g2.has_edge(x, y)) inside = false;
      if (inside) ++out.included;
      out.g1_class_counts[static_cast<std::size_t>(cell.first)] += 1;
    }
  } else {
    // Case 1: complete_couple at degree d1, extension to d2 by disjoint
    // matchings, and a final maximal class coupling onto mu_{d2}.
    const oracle::ClassDistribution& bar2 =
        cached_classes("mu_" + std::to_string(d2), n);
    const oracle::ClassDistribution& bar_nu2 =
        cached_classes("nu_" + std::to_string(d2), n);
    const oracle::ClassDistribution& bar1 =
        cached_classes("mu_" + std::to_string(d1), n);
    for (const auto& a : bar1.atoms) {
      out.g1_class_keys.push_back(a.key);
      out.g1_class_sizes.push_back(a.size);
    }
    out.g1_class_counts.assign(bar1.atoms.size(), 0);
    std::map<std::string, int> low_index;
    for (std::size_t i = 0; i < bar1.atoms.size(); ++i)
      low_index.emplace(bar1.atoms[i].key, static_cast<int>(i));
    std::map<std::string, Graph> high_reps;
    for (const auto& a : bar2.atoms) high_reps.emplace(a.key, a.representative);
    std::map<std::string, Rat> mu2_mass, nu2_mass;
    for (const auto& a : bar2.atoms) mu2_mass.emplace(a.key, a.mass);
    for (const auto& a : bar_nu2.atoms) nu2_mass.emplace(a.key, a.mass);
    const auto& cfg = Config::global();
    for (std::uint64_t t = 0; t < trials; ++t) {
      CompleteCoupleResult cc = complete_couple(n, d1, epsilon, rng);
      int rest = d2 - cc.k * d1;
      require(rest >= 0, errc::invalid_argument,
              "epsilon forces more blocks than d2 admits");
      Graph w = cc.g_oplus;
      if (rest > 0) {
        for (std::uint64_t attempt = 0;; ++attempt) {
          require(attempt < cfg.max_coupling_rounds,
                  errc::rejection_budget_exceeded, "extension rejection");
          Graph add = samplers::sample_nu(n, rest, rng).graph;
          if (edge_disjoint(w, add)) {
            w = union_disjoint(w, add);
            break;
          }
        }
      }
      // maximal coupling of the class of W ~ nu_{d2} with bar mu_{d2}
      std::string wkey = canonical_key(w);
      Rat pm = mu2_mass.count(wkey) ? mu2_mass[wkey] : Rat(0);
      Rat pn = nu2_mass.count(wkey) ? nu2_mass[wkey] : Rat(0);
      double accept = pn > 0 ? Rat(std::min(pm, pn) / pn).get_d() : 0.0;
      Graph g2 = w;
      if (!(rng.unit() < accept)) {
        // residual class, then a uniform member via relabelling
        std::vector<std::pair<std::string, double>> residual;
        Rat tvc = 0;
        for (const auto& a : bar2.atoms) {
          Rat qn = nu2_mass.count(a.key) ? nu2_mass[a.key] : Rat(0);
          Rat r = a.mass - std::min(a.mass, qn);
          if (r > 0) {
            residual.push_back({a.key, r.get_d()});
            tvc += r;
          }
        }
        require(!residual.empty(), errc::empty_support, "empty residual");
        double total = tvc.get_d(), u = rng.unit() * total, acc = 0;
        std::string pick = residual.back().first;
        for (const auto& [key, mass] : residual) {
          acc += mass;
          if (u < acc) {
            pick = key;
            break;
          }
        }
        g2 = relabel(high_reps.at(pick), rng.permutation(n));
      }
      bool inside = true;
      for (const auto& [x, y] : cc.g.edges())
        if (!g2.has_edge(x, y)) inside = false;
      if (inside) ++out.included;
      auto it = low_index.find(canonical_key(cc.g));
      require(it != low_index.end(), errc::empty_support, "class missing");
      out.g1_class_counts[static_cast<std::size_t>(it->second)] += 1;
    }
  }
  out.inclusion_rate = trials > 0 ? static_cast<double>(out.included) /
                                        static_cast<double>(trials)
                                  : 0.0;
  return out;
}

}  // namespace rrg::coupling
