// Acceptance suite: one line per criterion, exit status 0 iff all pass.
// Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bvgraph/area_functional.hpp"
#include "bvgraph/bundled.hpp"
#include "bvgraph/error.hpp"
#include "bvgraph/least_gradient.hpp"
#include "bvgraph/regularity_lab.hpp"
#include "oracles/area_grid_search.hpp"
#include "oracles/cut_enumeration.hpp"
#include "oracles/lp_simplex.hpp"
#include "test_support.hpp"

using namespace bvgraph;
using testing_support::mask_of;
using testing_support::random_function;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> values(const BvFunction& u) { return {u.values().begin(), u.values().end()}; }

// ---------------------------------------------------------------- oracles

// Dijkstra over the edge list, independent of the space's own metric code.
std::vector<double> oracle_distances(const MetricMeasureSpace& s, Vertex x) {
  std::vector<std::vector<std::pair<Vertex, double>>> adj(s.num_vertices());
  for (const Edge& e : s.edges()) {
    adj[e.a].push_back({e.b, e.length});
    adj[e.b].push_back({e.a, e.length});
  }
  std::vector<double> d(s.num_vertices(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  d[x] = 0.0;
  q.push({0.0, x});
  while (!q.empty()) {
    const auto [dv, v] = q.top();
    q.pop();
    if (dv > d[v]) continue;
    for (const auto& [w, len] : adj[v]) {
      if (dv + len < d[w]) {
        d[w] = dv + len;
        q.push({d[w], w});
      }
    }
  }
  return d;
}

double oracle_tv(const BvFunction& u, const std::vector<bool>& a) {
  double s = 0.0;
  for (const Edge& e : u.space().edges()) {
    if (a[e.a] && a[e.b]) s += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  }
  return s;
}

// Layer integral over breakpoint intervals, perimeters counted edge by edge.
double oracle_coarea_rhs(const BvFunction& u, const std::vector<bool>& a) {
  std::vector<double> t(u.values().begin(), u.values().end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    double per = 0.0;
    for (const Edge& e : u.space().edges()) {
      if (a[e.a] && a[e.b] && ((u[e.a] > t[i]) != (u[e.b] > t[i]))) per += e.tv_weight;
    }
    s += (t[i + 1] - t[i]) * per;
  }
  return s;
}

// Smallest value v of the ball with mu({u <= v}) >= need, by brute force.
double oracle_upper(const std::vector<std::pair<double, double>>& ball, double need) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [v, m] : ball) {
    double below = 0.0;
    for (const auto& [w, mw] : ball) {
      if (w <= v) below += mw;
    }
    if (below >= need) best = std::min(best, v);
  }
  return best;
}

double oracle_oscillation(const BvFunction& u, Vertex x, double r, double delta) {
  const std::vector<double> d = oracle_distances(u.space(), x);
  std::vector<std::pair<double, double>> ball;
  std::vector<std::pair<double, double>> negated;
  double total = 0.0;
  for (Vertex y = 0; y < d.size(); ++y) {
    if (d[y] < r) {
      ball.push_back({u[y], u.space().mass(y)});
      negated.push_back({-u[y], u.space().mass(y)});
      total += u.space().mass(y);
    }
  }
  const double need = (1.0 - delta) * total * (1.0 - 1e-12);
  return oracle_upper(ball, need) + oracle_upper(negated, need);
}

// F from its definition: edges inside A carry hypot(m_e, w_e du); a vertex
// of A keeps mu_v / deg(v) for each incident edge leaving A.
double oracle_area(const BvFunction& u, const std::vector<bool>& a) {
  const MetricMeasureSpace& s = u.space();
  double total = 0.0;
  for (const Edge& e : s.edges()) {
    const double m = s.mass(e.a) / s.degree(e.a) + s.mass(e.b) / s.degree(e.b);
    if (a[e.a] && a[e.b]) {
      total += std::hypot(m, e.tv_weight * (u[e.a] - u[e.b]));
    } else {
      if (a[e.a]) total += s.mass(e.a) / s.degree(e.a);
      if (a[e.b]) total += s.mass(e.b) / s.degree(e.b);
    }
  }
  return total;
}

std::vector<bool> random_mask(std::size_t n, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution in(p);
  std::vector<bool> a(n);
  for (std::size_t v = 0; v < n; ++v) a[v] = in(rng);
  return a;
}

VertexSet set_of(const std::vector<bool>& m) {
  VertexSet s(m.size());
  for (Vertex v = 0; v < m.size(); ++v) {
    if (m[v]) s.insert(v);
  }
  return s;
}

// Values drawn from a few levels half the time so ties occur.
BvFunction tied_function(const SpacePtr& g, std::mt19937_64& rng) {
  if (rng() % 2 == 0) return random_function(g, rng);
  std::vector<double> v(g->num_vertices());
  for (double& x : v) x = static_cast<double>(rng() % 4) * 0.75 - 1.0;
  return BvFunction(g, std::move(v));
}

DirichletProblem random_instance(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  return bundled::random_problem(n, rng, rng() % 2 == 0);
}

// Instances with |V| up to 400 for the first-order comparison.
std::vector<DirichletProblem> large_instances() {
  std::vector<DirichletProblem> out;
  std::mt19937_64 rng(400);
  for (std::size_t n : {100, 200, 300, 400}) {
    out.push_back(bundled::random_problem(n, rng, true));
    out.push_back(bundled::random_problem(n, rng, false));
  }
  out.push_back(bundled::half_plane(20));
  out.push_back(bundled::ramp_grid(20));
  out.push_back(bundled::stability_grid(20, 0).problem);
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome coarea() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  double oracle_gap = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    auto g = random_connected_graph(2 + rng() % 49, 0.05 + 0.4 * (rng() % 100) / 100.0, rng);
    const BvFunction u = tied_function(g, rng);
    const std::vector<bool> a = rng() % 3 == 0 ? std::vector<bool>(g->num_vertices(), true)
                                               : random_mask(g->num_vertices(), rng, 0.7);
    const IdentityCheck c = coarea_check(u, set_of(a));
    worst = std::max(worst, c.residual());
    oracle_gap = std::max({oracle_gap, std::abs(c.lhs - oracle_tv(u, a)), std::abs(c.rhs - oracle_coarea_rhs(u, a))});
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {worst <= 1e-9 && oracle_gap <= 1e-9 && secs < 10.0,
          "500 graphs |V|<=50, max |lhs-rhs| " + fmt("%.2e", worst) + ", max deviation from oracle " +
              fmt("%.2e", oracle_gap) + ", " + fmt("%.2f s (limit 10 s)", secs)};
}

Outcome truncation() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  double oracle_worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto g = random_connected_graph(2 + rng() % 40, 0.3, rng);
    const BvFunction u = tied_function(g, rng);
    const double t = rng() % 3 == 0 ? u[rng() % u.size()] : std::uniform_real_distribution<double>(-2.5, 2.5)(rng);
    const TruncationReport r = truncation_decomposition(u, t);
    worst = std::max(worst, r.max_edge_residual);
    for (const Edge& e : g->edges()) {
      const double lo = std::abs(std::min(u[e.a], t) - std::min(u[e.b], t));
      const double hi = std::abs(std::max(u[e.a] - t, 0.0) - std::max(u[e.b] - t, 0.0));
      oracle_worst = std::max(oracle_worst, std::abs(std::abs(u[e.a] - u[e.b]) - lo - hi));
    }
    for (Vertex v = 0; v < u.size(); ++v) {
      oracle_worst = std::max(oracle_worst, std::abs(r.lower[v] - std::min(u[v], t)));
      oracle_worst = std::max(oracle_worst, std::abs(r.upper[v] - std::max(u[v] - t, 0.0)));
    }
  }
  return {worst <= 1e-12 && oracle_worst <= 1e-12,
          "1000 trials, max per-edge residual " + fmt("%.2e", worst) + " (oracle " + fmt("%.2e", oracle_worst) +
              ", tolerance 1e-12)"};
}

Outcome leibniz() {
  std::mt19937_64 rng(303);
  std::size_t violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 1000; ++trial) {
    auto g = random_connected_graph(2 + rng() % 40, 0.3, rng);
    const BvFunction u = tied_function(g, rng);
    const BvFunction v = tied_function(g, rng);
    const BvFunction eta = random_function(g, rng, 0.0, 1.0);
    const std::vector<bool> a = random_mask(g->num_vertices(), rng, 0.8);
    const IdentityCheck c = leibniz_bound_check(u, v, eta, set_of(a));
    if (!(c.lhs <= c.rhs)) ++violations;
    tightest = std::min(tightest, c.rhs - c.lhs);
  }
  return {violations == 0, "1000 trials, " + std::to_string(violations) + " violations of lhs <= rhs, smallest slack " +
                               fmt("%.2e", tightest)};
}

Outcome optimality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(404);
  double lp_gap = 0.0;
  double enum_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const DirichletProblem p = random_instance(3, 12, rng);
    const LeastGradientSolution s = solve_threshold_stack(p);
    const std::vector<bool> om = mask_of(p.omega());
    const std::vector<double> f = values(p.boundary());
    lp_gap = std::max(lp_gap, std::abs(s.objective - oracle::least_gradient_lp(p.space(), om, f)));
    enum_gap = std::max(enum_gap, std::abs(s.objective - oracle::least_gradient_by_enumeration(p.space(), om, f)));
  }
  double pd_gap = 0.0;
  std::size_t unconverged = 0;
  std::size_t largest = 0;
  const std::vector<DirichletProblem> large = large_instances();
  for (const DirichletProblem& p : large) {
    largest = std::max(largest, p.space().num_vertices());
    const LeastGradientSolution s = solve_threshold_stack(p);
    const LeastGradientSolution pd = solve_first_order(p, 1e-6, 200000);
    if (!pd.converged) ++unconverged;
    pd_gap = std::max(pd_gap, std::abs(pd.objective - s.objective) / (1.0 + std::abs(s.objective)));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {lp_gap <= 1e-8 && enum_gap <= 1e-8 && pd_gap <= 1e-6 && unconverged == 0 && secs < 60.0,
          "200 instances |V|<=12: max gap to LP " + fmt("%.2e", lp_gap) + ", to enumeration " + fmt("%.2e", enum_gap) +
              "; " + std::to_string(large.size()) + " instances |V|<=" + std::to_string(largest) + ": max relative first-order gap " +
              fmt("%.2e", pd_gap) + " (" + std::to_string(unconverged) + " unconverged); " +
              fmt("%.1f s (limit 60 s)", secs)};
}

Outcome superlevel() {
  std::mt19937_64 rng(505);
  std::size_t thresholds = 0;
  std::size_t failures = 0;
  std::size_t enumerated = 0;
  auto check = [&](const DirichletProblem& p, bool enumerate) {
    const LeastGradientSolution s = solve_threshold_stack(p);
    for (const SuperlevelCheck& c : verify_superlevel_minimality(s, 3, 1e-9)) {
      ++thresholds;
      if (!c.minimal) ++failures;
    }
    if (!enumerate) return;
    for (const StackLevel& l : s.stack) {
      const oracle::EnumeratedCut e =
          oracle::enumerate_cut(p.space(), mask_of(p.omega()), values(p.boundary()), l.threshold);
      ++enumerated;
      if (std::abs(e.optimum - l.cut_value) > 1e-9 || e.minimal_side != mask_of(l.superlevel)) ++failures;
    }
  };
  for (int trial = 0; trial < 100; ++trial) check(random_instance(3, 12, rng), true);
  for (int trial = 0; trial < 30; ++trial) check(random_instance(13, 400, rng), false);
  for (const DirichletProblem& p : large_instances()) check(p, false);
  return {failures == 0, std::to_string(thresholds) + " superlevel thresholds certified by max-flow, " +
                             std::to_string(enumerated) + " stack levels matched to enumeration, " +
                             std::to_string(failures) + " failures"};
}

Outcome max_principle() {
  std::mt19937_64 rng(606);
  std::size_t violations = 0;
  std::size_t library_disagreements = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const DirichletProblem p = random_instance(3, 30, rng);
    const LeastGradientSolution s = solve_threshold_stack(p);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Vertex v = 0; v < p.space().num_vertices(); ++v) {
      if (p.omega().contains(v)) continue;
      lo = std::min(lo, p.boundary()[v]);
      hi = std::max(hi, p.boundary()[v]);
    }
    std::size_t here = 0;
    for (Vertex v : p.omega().members()) {
      if (s.u[v] < lo || s.u[v] > hi) ++here;
    }
    violations += here;
    if (max_principle_check(s).holds() != (here == 0)) ++library_disagreements;
  }
  bool rejected = false;
  try {
    DirichletProblem(BvFunction::constant(build_path(5), 2.0), VertexSet::all(5));
  } catch (const Error& e) {
    rejected = e.code() == Errc::ill_posed;
  }
  return {violations == 0 && library_disagreements == 0 && rejected,
          "500 instances, " + std::to_string(violations) + " out-of-range values, ill-posed input " +
              (rejected ? "rejected with ill-posed-problem" : "NOT rejected")};
}

Outcome dirichlet_stability() {
  const bundled::StabilityInstance inst = bundled::stability_grid(16, 14);
  const StabilityReport r = dirichlet_stability_experiment(inst.problem, inst.data);
  const LeastGradientSolution base = solve_threshold_stack(inst.problem);
  bool monotone = true;
  double oracle_gap = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < inst.data.size(); ++k) {
    const BvFunction uk = solve_threshold_stack(DirichletProblem(inst.data[k], inst.problem.omega())).u;
    double l1 = 0.0;
    for (Vertex v : inst.problem.omega().members()) l1 += inst.problem.space().mass(v) * std::abs(uk[v] - base.u[v]);
    oracle_gap = std::max(oracle_gap, std::abs(l1 - r.entries[k].l1_distance));
    if (r.entries[k].l1_distance > prev) monotone = false;
    prev = r.entries[k].l1_distance;
  }
  const double last = r.entries.back().l1_distance;
  const VertexSet supports[] = {inst.problem.omega()};
  const double limit_gap = verify_least_gradient(base.u, inst.problem.omega(), supports).max_gap();
  return {monotone && last < 1e-4 && oracle_gap <= 1e-12 && r.limit_certificate && r.limit_gap() <= 0.0 &&
              limit_gap <= 0.0,
          "16x16 grid, f_k = f + 2^-k h: distances " + std::string(monotone ? "non-increasing" : "NOT monotone") +
              ", d_1 " + fmt("%.3e", r.entries.front().l1_distance) + ", d_14 " + fmt("%.3e", last) +
              " (< 1e-4), limit certificate gap " + fmt("%.1e", r.limit_gap())};
}

Outcome local_stability() {
  struct Sequence {
    std::string name;
    std::vector<BvFunction> members;
    BvFunction limit;
    VertexSet omega;
  };
  std::vector<Sequence> seqs;
  auto solved = [](const DirichletProblem& p) { return solve_threshold_stack(p).u; };

  const bundled::StabilityInstance grid = bundled::stability_grid(16, 14);
  {
    std::vector<BvFunction> us;
    for (const BvFunction& f : grid.data) us.push_back(solved(DirichletProblem(f, grid.problem.omega())));
    seqs.push_back({"stability16", us, solved(grid.problem), grid.problem.omega()});
  }
  {
    const DirichletProblem p4 = bundled::p4();
    std::vector<BvFunction> us;
    for (int k = 1; k <= 12; ++k) {
      std::vector<double> f = values(p4.boundary());
      f[3] += std::ldexp(1.0, -k);
      us.push_back(solved(DirichletProblem(BvFunction(p4.space_ptr(), f), p4.omega())));
    }
    seqs.push_back({"p4", us, solved(p4), p4.omega()});
  }
  {
    const DirichletProblem half = bundled::half_plane(16);
    const BvFunction u = solved(half);
    std::vector<BvFunction> us(6, u);
    seqs.push_back({"half16-constant", us, u, half.omega()});
    std::vector<BvFunction> scaled;
    for (int k = 1; k <= 12; ++k) {
      std::vector<double> f = values(half.boundary());
      for (double& x : f) x *= 1.0 - std::ldexp(1.0, -k);
      scaled.push_back(solved(DirichletProblem(BvFunction(half.space_ptr(), f), half.omega())));
    }
    seqs.push_back({"half16-scaled", scaled, u, half.omega()});
  }
  {
    const DirichletProblem ramp = bundled::ramp_grid(6);
    std::vector<BvFunction> us;
    for (int k = 1; k <= 10; ++k) {
      std::vector<double> f = values(ramp.boundary());
      for (double& x : f) x += std::ldexp(1.0, -k) * x * x;
      us.push_back(solved(DirichletProblem(BvFunction(ramp.space_ptr(), f), ramp.omega())));
    }
    seqs.push_back({"ramp6", us, solved(ramp), ramp.omega()});
  }

  double worst = 0.0;
  bool ok = true;
  std::string names;
  for (const Sequence& s : seqs) {
    const StabilityReport r = local_stability_experiment(s.members, s.limit, s.omega, 1e-9);
    ok = ok && r.sequence_converges && r.limit_certificate && r.limit_gap() <= 1e-9;
    worst = std::max(worst, r.limit_gap());
    names += (names.empty() ? "" : ", ") + s.name;
  }
  return {ok, std::to_string(seqs.size()) + " sequences (" + names + "), max limit gap " + fmt("%.2e", worst) +
                  " (<= 1e-9)"};
}

Outcome de_giorgi() {
  std::vector<double> ratios;
  double oracle_gap = 0.0;
  bool certified = true;
  std::string listing;
  for (std::size_t n : {16, 32, 64, 128}) {
    const DirichletProblem p = bundled::half_plane(n);
    const LeastGradientSolution s = solve_threshold_stack(p);
    certified = certified && s.certificate.passed(1e-9);
    const DeGiorgiPair pair{p.space().nearest_vertex({0.5, 0.5}), 0.13, 0.26};
    const DeGiorgiReport r = de_giorgi_scan(s.u, p.omega(), std::span<const DeGiorgiPair>(&pair, 1));
    const double ratio = r.entries.front().ratio;
    ratios.push_back(ratio);

    const std::vector<double> d = oracle_distances(p.space(), pair.x);
    std::vector<bool> inner(d.size());
    double denom = 0.0;
    for (Vertex v = 0; v < d.size(); ++v) {
      inner[v] = d[v] < pair.r;
      if (d[v] < pair.big_r) denom += p.space().mass(v) * std::abs(s.u[v]);
    }
    const double expected = oracle_tv(s.u, inner) * (pair.big_r - pair.r) / denom;
    oracle_gap = std::max(oracle_gap, std::abs(expected - ratio));
    listing += (listing.empty() ? "" : ", ") + std::to_string(n) + ": " + fmt("%.4f", ratio);
  }
  const double spread =
      *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  return {certified && spread < 2.0 && oracle_gap <= 1e-12,
          "ratios (" + listing + "), max/min " + fmt("%.3f", spread) + " (< 2), oracle deviation " +
              fmt("%.1e", oracle_gap)};
}

Outcome continuity() {
  const auto start = Clock::now();
  const bundled::JumpInstance inst = bundled::channel_jump();
  std::vector<BvFunction> sols;
  for (const DirichletProblem& p : inst.problems) sols.push_back(solve_threshold_stack(p).u);
  const std::size_t finest = sols.size() - 1;
  const double gap = inst.data_gap;
  double oracle_gap = 0.0;

  const ContinuityTable jump = continuity_table(inst.family, sols, inst.interface_probe, inst.radii, 0.5 * gap);
  double interface_min = std::numeric_limits<double>::infinity();
  std::set<std::size_t> levels_seen;
  for (const OscillationRow& r : jump.rows) {
    interface_min = std::min(interface_min, r.oscillation);
    levels_seen.insert(r.level);
    const double o = oracle_oscillation(sols[r.level], jump.probe_vertex[r.level], r.radius, kDefaultTrim);
    oracle_gap = std::max(oracle_gap, std::abs(o - r.oscillation));
  }
  double smooth_max = 0.0;
  for (Point probe : inst.smooth_probes) {
    const ContinuityTable c = continuity_table(inst.family, sols, probe, inst.radii, 0.5 * gap);
    const OscillationRow r = c.level_rows(finest).front();
    smooth_max = std::max(smooth_max, r.oscillation);
    const double o = oracle_oscillation(sols[finest], c.probe_vertex[finest], r.radius, kDefaultTrim);
    oracle_gap = std::max(oracle_gap, std::abs(o - r.oscillation));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool ok = levels_seen.size() == sols.size() && interface_min >= 0.5 * gap && smooth_max <= 0.1 * gap &&
                  oracle_gap == 0.0 && secs < 300.0;
  return {ok, "channel grids 16..128: interface oscillation >= " + fmt("%.3f", interface_min) +
                  " at every level (need >= 0.5), off-interface " + fmt("%.3f", smooth_max) +
                  " at finest level and radius (need <= 0.1), oracle deviation " + fmt("%.1e", oracle_gap) + ", " +
                  fmt("%.1f s (limit 300 s)", secs)};
}

Outcome area() {
  std::mt19937_64 rng(1111);
  std::size_t sandwich_fail = 0;
  std::size_t bound_fail = 0;
  double snapped_residual = 0.0;
  double value_gap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected_graph(2 + rng() % 30, 0.3, rng);
    const BvFunction u = tied_function(g, rng);
    const std::vector<bool> a = random_mask(g->num_vertices(), rng, 0.7);
    const VertexSet aset = set_of(a);
    const AreaFunctionalConfig cfg = area_config(*g);
    const GrowthSandwich s = growth_sandwich(u, aset, cfg);
    if (!s.holds()) ++sandwich_fail;
    const double o = oracle_area(u, a);
    value_gap = std::max(value_gap, std::abs(o - area_value(u, aset, cfg)) / (1.0 + o));

    const std::size_t levels = 8 + rng() % 120;
    const ProductSpace prod = subgraph_product(u, levels);
    const SubgraphPerimeterReport r = subgraph_perimeter_report(u, build_subgraph(u, prod), aset, cfg);
    if (!r.decomposition_holds || !r.variation_bound_holds || !r.area_bound_holds ||
        std::abs(r.quantized_variation - r.variation) > r.quantization_bound ||
        r.perimeter > 2.0 * r.area + r.quantization_bound) {
      ++bound_fail;
    }
    std::vector<double> snapped(u.size());
    for (double& x : snapped) x = prod.level(rng() % prod.num_levels());
    const BvFunction su(g, snapped);
    const SubgraphPerimeterReport e = subgraph_perimeter_report(su, build_subgraph(su, prod), aset, cfg);
    snapped_residual = std::max(snapped_residual, std::abs(e.perimeter - e.mass - e.variation) / (1.0 + e.perimeter));
    if (!e.area_bound_holds) ++bound_fail;
  }

  const DirichletProblem p4 = bundled::p4();
  const AreaFunctionalConfig cfg = area_config(p4.space());
  const auto [best, arg] = oracle::p4_grid_search([&](double a, double b) {
    const double u[] = {0.0, a, b, 1.0};
    return oracle::objective_energy(p4, cfg, u);
  });
  const AreaMinimizer m = solve_area_minimizer(p4, cfg, 1e-10);
  const double energy_gap = std::abs(m.energy - best);
  const bool ok = sandwich_fail == 0 && bound_fail == 0 && snapped_residual <= 1e-12 && value_gap <= 1e-12 &&
                  m.converged && energy_gap <= 1e-4;
  return {ok, "200 trials: sandwich failures " + std::to_string(sandwich_fail) + ", bound failures " +
                  std::to_string(bound_fail) + ", snapped identity residual " + fmt("%.1e", snapped_residual) +
                  ", F vs definition " + fmt("%.1e", value_gap) + "; P4 minimizer vs grid search " +
                  fmt("%.2e", energy_gap) + " (<= 1e-4)"};
}

Outcome quasiminimality() {
  const DirichletProblem p = bundled::ramp_grid(6);
  const AreaMinimizer m = solve_area_minimizer(p, area_config(p.space()), 1e-9);
  const ProductSpace prod(p.space_ptr(), 0.0, 1.0, 64);
  const SubgraphProbeReport good = subgraph_quasiminimality_probe(build_subgraph(m.u, prod), p.omega(), 10000, 12);
  std::vector<double> spiked = values(m.u);
  spiked[grid_vertex(6, 2, 3)] = 1.0;
  const SubgraphProbeReport bad =
      subgraph_quasiminimality_probe(build_subgraph(BvFunction(p.space_ptr(), spiked), prod), p.omega(), 10000, 12);
  const bool ok = m.converged && good.samples == 10000 && std::isfinite(good.max_ratio) && bad.max_ratio > good.max_ratio;
  return {ok, "10^4 samples: minimizer bound " + fmt("%.4f", good.max_ratio) + ", spiked non-minimizer " +
                  fmt("%.4f", bad.max_ratio)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {1, "coarea identity", coarea},
      {2, "truncation decomposition", truncation},
      {3, "Leibniz inequality", leibniz},
      {4, "solver optimality", optimality},
      {5, "superlevel minimality", superlevel},
      {6, "maximum principle", max_principle},
      {7, "Dirichlet stability", dirichlet_stability},
      {8, "local stability", local_stability},
      {9, "De Giorgi scan", de_giorgi},
      {10, "continuity experiment", continuity},
      {11, "area functional", area},
      {12, "quasiminimality probe", quasiminimality},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
