#include "bvgraph/regularity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "bvgraph/error.hpp"
#include "parallel.hpp"

namespace bvgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

VertexSet closure_of(const MetricMeasureSpace& space, const VertexSet& omega) {
  VertexSet c = omega;
  for (Vertex x : omega.members()) {
    for (const Incidence& inc : space.neighbors(x)) c.insert(inc.other);
  }
  return c;
}

// Dijkstra from every vertex of `sources` at once.
std::vector<double> distance_to_set(const MetricMeasureSpace& space, const VertexSet& sources) {
  std::vector<double> dist(space.num_vertices(), kInf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (Vertex s : sources.members()) {
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (const Incidence& inc : space.neighbors(x)) {
      const double nd = d + space.edge(inc.edge).length;
      if (nd < dist[inc.other]) {
        dist[inc.other] = nd;
        heap.push({nd, inc.other});
      }
    }
  }
  return dist;
}

}  // namespace

MaxPrincipleReport max_principle_check(const DirichletProblem& p, const BvFunction& u) {
  MaxPrincipleReport r{p.datum_min(), p.datum_max(), kInf, -kInf, {}};
  for (Vertex x : p.omega().members()) {
    r.min_value = std::min(r.min_value, u[x]);
    r.max_value = std::max(r.max_value, u[x]);
    if (u[x] < r.lower || u[x] > r.upper) r.violations.push_back(x);
  }
  return r;
}

MaxPrincipleReport max_principle_check(const LeastGradientSolution& sol) {
  return max_principle_check(sol.problem, sol.u);
}

bool decays_to_zero(std::span<const double> distances, double slack) {
  if (distances.empty()) return false;
  for (std::size_t k = 1; k < distances.size(); ++k) {
    if (distances[k] > distances[k - 1] + slack * (1.0 + distances[k - 1])) return false;
  }
  if (distances.front() == 0.0) return distances.back() == 0.0;
  return distances.back() <= 0.5 * distances.front();
}

StabilityReport dirichlet_stability_experiment(const DirichletProblem& p, std::span<const BvFunction> data) {
  const MetricMeasureSpace& space = p.space();
  const VertexSet everything = VertexSet::all(space.num_vertices());
  std::vector<double> bv_distance;
  for (const BvFunction& fk : data) {
    if (&fk.space() != &space) throw Error(Errc::invalid_input, "perturbed datum lives on a different space");
    std::vector<double> h(space.num_vertices());
    for (Vertex x = 0; x < h.size(); ++x) h[x] = fk[x] - p.boundary()[x];
    const BvFunction diff(p.space_ptr(), std::move(h));
    bv_distance.push_back(l1_distance(fk, p.boundary(), everything) + total_variation(diff));
  }
  if (!decays_to_zero(bv_distance)) {
    throw Error(Errc::invalid_sequence, "boundary data do not converge to the datum in BV");
  }

  const LeastGradientSolution base = solve_threshold_stack(p);
  StabilityReport report;
  report.entries.resize(data.size());
  detail::parallel_for(data.size(), [&](std::size_t k) {
    const DirichletProblem pk(data[k], p.omega());
    const LeastGradientSolution sk = solve_threshold_stack(pk);
    // the datum change off omega, as an admissible perturbation
    double bound = 0.0;
    for (std::size_t e : p.objective_edges()) {
      const Edge& ed = space.edge(e);
      auto h = [&](Vertex x) { return p.omega().contains(x) ? 0.0 : data[k][x] - p.boundary()[x]; };
      bound += ed.tv_weight * std::abs(h(ed.a) - h(ed.b));
    }
    report.entries[k] = {k,
                         l1_distance(sk.u, base.u, p.omega()),
                         sk.objective,
                         sk.certificate.max_gap(),
                         std::abs(sk.objective - base.objective),
                         bound};
  });
  std::vector<double> l1;
  for (const StabilityEntry& e : report.entries) l1.push_back(e.l1_distance);
  report.sequence_converges = decays_to_zero(l1);
  const VertexSet supports[] = {p.omega()};
  report.limit_certificate = verify_least_gradient(base.u, p.omega(), supports);
  return report;
}

StabilityReport local_stability_experiment(std::span<const BvFunction> sequence, const BvFunction& limit,
                                           const VertexSet& omega, double tol) {
  const VertexSet supports[] = {omega};
  StabilityReport report;
  report.entries.resize(sequence.size());
  std::vector<MinimalityCertificate> certs(sequence.size());
  detail::parallel_for(sequence.size(),
                       [&](std::size_t k) { certs[k] = verify_least_gradient(sequence[k], omega, supports); });
  const DirichletProblem limit_problem(limit, omega);
  const double limit_objective = limit_problem.objective(limit);
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    if (!certs[k].passed(tol)) {
      throw Error(Errc::invalid_input, "sequence member " + std::to_string(k) +
                                           " is not of least gradient (gap " + std::to_string(certs[k].max_gap()) +
                                           ")");
    }
    const double objective = DirichletProblem(sequence[k], omega).objective(sequence[k]);
    report.entries[k] = {k,
                         l1_distance(sequence[k], limit, omega),
                         objective,
                         certs[k].max_gap(),
                         std::abs(objective - limit_objective),
                         0.0};
  }
  std::vector<double> l1;
  for (const StabilityEntry& e : report.entries) l1.push_back(e.l1_distance);
  report.sequence_converges = decays_to_zero(l1);
  if (report.sequence_converges) report.limit_certificate = verify_least_gradient(limit, omega, supports);
  return report;
}

bool PointwiseReport::all_minimal() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuperlevelCheck& c) { return c.minimal; });
}

PointwiseReport pointwise_stability_experiment(std::span<const BvFunction> sequence, const BvFunction& limit,
                                               const VertexSet& omega, std::size_t intermediate, double tol) {
  const VertexSet supports[] = {omega};
  PointwiseReport report;
  std::vector<std::uint8_t> certified(sequence.size());
  std::vector<double> sup_distance(sequence.size());
  detail::parallel_for(sequence.size(), [&](std::size_t k) {
    certified[k] = verify_least_gradient(sequence[k], omega, supports).passed(tol);
    double d = 0.0;
    for (Vertex x = 0; x < limit.size(); ++x) d = std::max(d, std::abs(sequence[k][x] - limit[x]));
    sup_distance[k] = d;
  });
  report.member_certified.assign(certified.begin(), certified.end());
  report.pointwise_converges = decays_to_zero(sup_distance);

  const DirichletProblem problem(limit, omega);
  const std::vector<double> values = breakpoints(limit);
  std::vector<double> thresholds;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double gap = values[i + 1] - values[i];
    thresholds.push_back(values[i] + 0.5 * gap);
    for (std::size_t j = 1; j <= intermediate; ++j) {
      thresholds.push_back(values[i] + static_cast<double>(j) / static_cast<double>(intermediate + 1) * gap);
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  report.checks.resize(thresholds.size());
  detail::parallel_for(thresholds.size(), [&](std::size_t i) {
    const double t = thresholds[i];
    const double per = objective_perimeter(problem, superlevel_set(limit, t).members);
    const double cut = constrained_min_cut(problem, t).optimum;
    report.checks[i] = {t, per, cut, per <= cut + tol * (1.0 + cut)};
  });
  return report;
}

DeGiorgiReport de_giorgi_scan(const BvFunction& u, const VertexSet& omega, std::span<const DeGiorgiPair> pairs) {
  const MetricMeasureSpace& space = u.space();
  const VertexSet closure = closure_of(space, omega);
  DeGiorgiReport report;
  for (const DeGiorgiPair& pair : pairs) {
    if (!(pair.r > 0.0 && pair.r < pair.big_r)) {
      throw Error(Errc::invalid_pair, "need 0 < r < R, got r = " + std::to_string(pair.r) +
                                          ", R = " + std::to_string(pair.big_r));
    }
    if (pair.x >= space.num_vertices()) throw Error(Errc::invalid_pair, "centre outside the space");
    const Ball outer = ball(space, pair.x, pair.big_r);
    if (!outer.members.subset_of(closure)) {
      throw Error(Errc::invalid_pair, "B(" + std::to_string(pair.x) + ", " + std::to_string(pair.big_r) +
                                          ") leaves the closure of omega");
    }
    DeGiorgiEntry entry{pair, total_variation(u, ball(space, pair.x, pair.r).members), 0.0, 0.0, true};
    for (Vertex v : outer.members.members()) entry.denominator += space.mass(v) * std::abs(u[v]);
    if (entry.denominator > 0.0) {
      entry.ratio = entry.numerator * (pair.big_r - pair.r) / entry.denominator;
    } else if (entry.numerator > 0.0) {
      entry.applicable = false;
      entry.ratio = kInf;
      ++report.inapplicable;
    }
    if (entry.applicable) report.max_constant = std::max(report.max_constant, entry.ratio);
    report.entries.push_back(entry);
  }
  return report;
}

Vertex RefinementFamily::locate(std::size_t level, Point p) const {
  if (level >= levels.size()) throw Error(Errc::invalid_probe, "refinement level out of range");
  if (!(p.x >= lower.x && p.x <= upper.x && p.y >= lower.y && p.y <= upper.y)) {
    throw Error(Errc::invalid_probe,
                "probe (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") lies outside the domain");
  }
  return levels[level]->nearest_vertex(p);
}

RefinementFamily grid_family(std::span<const std::size_t> resolutions, const std::function<double(Point)>& weight) {
  RefinementFamily family;
  for (std::size_t n : resolutions) {
    family.levels.push_back(build_weighted_grid(n, n, weight));
    family.resolution.push_back(n);
    family.cell_size.push_back(1.0 / static_cast<double>(n));
  }
  return family;
}

std::vector<OscillationRow> ContinuityTable::level_rows(std::size_t level) const {
  std::vector<OscillationRow> out;
  for (const OscillationRow& r : rows) {
    if (r.level == level) out.push_back(r);
  }
  return out;
}

ContinuityTable continuity_table(const RefinementFamily& family, std::span<const BvFunction> solutions, Point probe,
                                 std::span<const double> radii, double jump_threshold, double delta) {
  if (solutions.size() != family.levels.size()) {
    throw Error(Errc::invalid_input, "need one solution per refinement level");
  }
  if (radii.empty()) throw Error(Errc::invalid_input, "continuity table needs radii");
  ContinuityTable table{probe, {}, {}, jump_threshold, false};
  std::vector<std::vector<OscillationRow>> per_level(family.levels.size());
  for (std::size_t l = 0; l < family.levels.size(); ++l) table.probe_vertex.push_back(family.locate(l, probe));
  detail::parallel_for(family.levels.size(), [&](std::size_t l) {
    std::vector<double> admissible;
    for (double r : radii) {
      if (r >= 1.5 * family.cell_size[l]) admissible.push_back(r);
    }
    std::sort(admissible.begin(), admissible.end());
    if (admissible.empty()) return;
    const OscillationProfile prof = oscillation_profile(solutions[l], table.probe_vertex[l], admissible, delta);
    for (std::size_t i = 0; i < admissible.size(); ++i) {
      per_level[l].push_back({l, family.resolution[l], admissible[i], prof.oscillation(i)});
    }
  });
  for (auto& rows : per_level) table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  const std::vector<OscillationRow> finest = table.level_rows(family.levels.size() - 1);
  if (!finest.empty()) table.flagged_jump = finest.front().oscillation > jump_threshold;
  return table;
}

ContinuityTable continuity_experiment(const RefinementFamily& family, std::span<const DirichletProblem> problems,
                                      Point probe, std::span<const double> radii) {
  if (problems.size() != family.levels.size()) throw Error(Errc::invalid_input, "need one problem per level");
  for (std::size_t l = 0; l < problems.size(); ++l) {
    if (&problems[l].space() != family.levels[l].get()) {
      throw Error(Errc::invalid_input, "problem " + std::to_string(l) + " is not posed on its refinement level");
    }
  }
  std::vector<std::optional<BvFunction>> slots(problems.size());
  detail::parallel_for(problems.size(), [&](std::size_t l) { slots[l] = solve_threshold_stack(problems[l]).u; });
  std::vector<BvFunction> solutions;
  for (auto& s : slots) solutions.push_back(std::move(*s));
  const DirichletProblem& finest = problems.back();
  return continuity_table(family, solutions, probe, radii, 0.5 * (finest.datum_max() - finest.datum_min()));
}

std::vector<PorosityEntry> porosity_probe(const MetricMeasureSpace& space, const VertexSet& e, Vertex x,
                                          std::span<const double> radii) {
  if (x >= space.num_vertices()) throw Error(Errc::invalid_probe, "probe vertex outside the space");
  bool touches_in = e.contains(x);
  bool touches_out = !e.contains(x);
  for (const Incidence& inc : space.neighbors(x)) {
    touches_in = touches_in || e.contains(inc.other);
    touches_out = touches_out || !e.contains(inc.other);
  }
  if (!touches_in || !touches_out) {
    throw Error(Errc::invalid_probe, "vertex " + std::to_string(x) + " is not on the boundary of the set");
  }
  const std::vector<double> to_e = distance_to_set(space, e);
  std::vector<PorosityEntry> out;
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(Errc::invalid_input, "porosity radii must be positive");
    PorosityEntry entry{r, 0.0, x, kInf};
    for (Vertex z : ball(space, x, 0.5 * r).members.members()) {
      if (to_e[z] > entry.rho_max) {
        entry.rho_max = to_e[z];
        entry.witness = z;
      }
    }
    if (entry.rho_max > 0.0) entry.ratio = r / (2.0 * entry.rho_max);
    out.push_back(entry);
  }
  return out;
}

}  // namespace bvgraph
