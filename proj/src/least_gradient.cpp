#include "bvgraph/least_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "bvgraph/error.hpp"
#include "bvgraph/first_order.hpp"
#include "bvgraph/maxflow.hpp"
#include "parallel.hpp"

namespace bvgraph {

namespace {

constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

// ||D(u)|| over the edges touching `k`, visiting only those edges.
double local_variation(const MetricMeasureSpace& space, std::span<const double> u, std::span<const Vertex> k,
                       const VertexSet& in_k) {
  double s = 0.0;
  for (Vertex x : k) {
    for (const Incidence& inc : space.neighbors(x)) {
      // an edge inside K is seen from both ends; count it from the smaller one
      if (in_k.contains(inc.other) && inc.other < x) continue;
      s += space.edge(inc.edge).tv_weight * std::abs(u[x] - u[inc.other]);
    }
  }
  return s;
}

}  // namespace

double MinimalityCertificate::max_gap() const {
  double g = 0.0;
  for (const CertificateEntry& e : entries) g = std::max(g, e.gap());
  return g;
}

bool MinimalityCertificate::passed(double tol) const {
  return std::all_of(entries.begin(), entries.end(), [tol](const CertificateEntry& e) {
    return e.gap() <= tol * (1.0 + std::abs(e.optimum));
  });
}

ConstrainedCut constrained_min_cut(const DirichletProblem& problem, double t) {
  const MetricMeasureSpace& space = problem.space();
  const BvFunction& f = problem.boundary();
  const std::vector<Vertex> nodes = problem.closure_omega().members();
  std::vector<std::size_t> id(space.num_vertices(), kUnmapped);
  for (std::size_t k = 0; k < nodes.size(); ++k) id[nodes[k]] = k;
  const std::size_t source = nodes.size();
  const std::size_t sink = nodes.size() + 1;

  FlowNetwork net(nodes.size() + 2);
  for (std::size_t e : problem.objective_edges()) {
    const Edge& ed = space.edge(e);
    net.add_edge(id[ed.a], id[ed.b], ed.tv_weight, ed.tv_weight);
  }
  for (Vertex v : problem.outer_boundary().members()) {
    if (f[v] > t) {
      net.add_infinite_edge(source, id[v]);
    } else {
      net.add_infinite_edge(id[v], sink);
    }
  }
  ConstrainedCut cut{net.max_flow(source, sink), VertexSet(space.num_vertices())};
  const std::vector<std::uint8_t> side = net.source_side();
  for (Vertex v = 0; v < space.num_vertices(); ++v) {
    if (problem.omega().contains(v) ? side[id[v]] != 0 : f[v] > t) cut.minimal_side.insert(v);
  }
  return cut;
}

double objective_perimeter(const DirichletProblem& problem, const VertexSet& e) {
  double s = 0.0;
  for (std::size_t k : problem.objective_edges()) {
    const Edge& ed = problem.space().edge(k);
    if (e.contains(ed.a) != e.contains(ed.b)) s += ed.tv_weight;
  }
  return s;
}

LeastGradientSolution solve_threshold_stack(const DirichletProblem& problem) {
  const std::vector<double> levels = problem.boundary_levels();
  const std::vector<Vertex> free = problem.omega().members();
  std::vector<double> u(problem.boundary().values().begin(), problem.boundary().values().end());

  std::vector<std::optional<StackLevel>> slots(levels.size() > 1 ? levels.size() - 1 : 0);
  detail::parallel_for(slots.size(), [&](std::size_t i) {
    const double t = 0.5 * (levels[i] + levels[i + 1]);
    ConstrainedCut cut = constrained_min_cut(problem, t);
    const double cut_value = objective_perimeter(problem, cut.minimal_side);
    slots[i] = StackLevel{t, levels[i + 1] - levels[i], std::move(cut.minimal_side), cut_value, cut.optimum};
  });

  std::vector<StackLevel> stack;
  stack.reserve(slots.size());
  for (auto& s : slots) stack.push_back(std::move(*s));
  for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
    if (!stack[i + 1].superlevel.subset_of(stack[i].superlevel)) {
      throw Error(Errc::invalid_data, "minimal cuts are not nested between thresholds " +
                                          std::to_string(stack[i].threshold) + " and " +
                                          std::to_string(stack[i + 1].threshold));
    }
  }

  // layer-cake sum, telescoped: x sits at the level counted by the nested
  // superlevels containing it
  if (!levels.empty()) {
    for (Vertex x : free) {
      std::size_t k = 0;
      while (k < stack.size() && stack[k].superlevel.contains(x)) ++k;
      u[x] = levels[k];
    }
  }

  BvFunction solution(problem.space_ptr(), std::move(u));
  const double objective = problem.objective(solution);
  MinimalityCertificate certificate;
  for (const StackLevel& s : stack) certificate.entries.push_back({s.threshold, s.cut_value, s.max_flow});
  return LeastGradientSolution{problem,   std::move(solution), objective, std::move(stack),
                               std::move(certificate), SolverMethod::threshold_stack};
}

LeastGradientSolution solve_first_order(const DirichletProblem& problem, double tol, std::size_t max_iters) {
  FirstOrderOptions options;
  options.tol = tol;
  options.max_iters = max_iters;
  FirstOrderResult r = minimize_edge_energy(problem, EdgePenalty::total_variation, {}, options);
  BvFunction u(problem.space_ptr(), std::move(r.u));
  const double objective = problem.objective(u);
  LeastGradientSolution s{problem, std::move(u), objective, {}, {}, SolverMethod::first_order};
  s.iterations = r.iterations;
  s.duality_gap = r.gap;
  s.converged = r.converged;
  return s;
}

MinimalityCertificate verify_least_gradient(const BvFunction& u, const VertexSet& omega,
                                            std::span<const VertexSet> supports) {
  if (omega.universe() != u.size()) throw Error(Errc::invalid_input, "omega does not match the function");
  MinimalityCertificate certificate;
  for (std::size_t k = 0; k < supports.size(); ++k) {
    const VertexSet& support = supports[k];
    if (support.universe() != u.size() || !support.subset_of(omega)) {
      throw Error(Errc::invalid_support, "support " + std::to_string(k) + " escapes omega");
    }
    if (support.empty()) {
      certificate.entries.push_back({static_cast<double>(k), 0.0, 0.0});
      continue;
    }
    const DirichletProblem local(u, support);
    const double optimum = solve_threshold_stack(local).objective;
    certificate.entries.push_back({static_cast<double>(k), local.objective(u), optimum});
  }
  return certificate;
}

std::vector<SuperlevelCheck> verify_superlevel_minimality(const LeastGradientSolution& solution,
                                                          std::size_t intermediate, double tol) {
  const DirichletProblem& problem = solution.problem;
  const std::vector<double> levels = problem.boundary_levels();
  std::vector<double> thresholds;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double gap = levels[i + 1] - levels[i];
    thresholds.push_back(levels[i] + 0.5 * gap);
    for (std::size_t j = 1; j <= intermediate; ++j) {
      const double frac = static_cast<double>(j) / static_cast<double>(intermediate + 1);
      if (frac != 0.5) thresholds.push_back(levels[i] + frac * gap);
    }
  }
  std::sort(thresholds.begin(), thresholds.end());

  std::vector<SuperlevelCheck> report(thresholds.size());
  detail::parallel_for(thresholds.size(), [&](std::size_t i) {
    const double t = thresholds[i];
    const double per = objective_perimeter(problem, superlevel_set(solution.u, t).members);
    const double cut = constrained_min_cut(problem, t).optimum;
    report[i] = {t, per, cut, per <= cut + tol * (1.0 + cut)};
  });
  return report;
}

QuasiMinimalityReport quasi_minimality_ratio(const BvFunction& u, const VertexSet& omega, std::size_t samples,
                                             std::uint64_t seed) {
  if (samples < 1) throw Error(Errc::invalid_input, "quasi-minimality probe needs at least one sample");
  if (omega.universe() != u.size()) throw Error(Errc::invalid_input, "omega does not match the function");
  const std::vector<Vertex> free = omega.members();
  if (free.empty()) throw Error(Errc::invalid_input, "quasi-minimality probe needs a nonempty omega");
  const MetricMeasureSpace& space = u.space();

  double max_length = 0.0;
  for (const Edge& e : space.edges()) max_length = std::max(max_length, e.length);
  double amplitude = u.max() - u.min();
  if (amplitude == 0.0) amplitude = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_centre(0, free.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  QuasiMinimalityReport report;
  report.samples = samples;
  std::vector<double> perturbed(u.values().begin(), u.values().end());
  for (std::size_t s = 0; s < samples; ++s) {
    const Vertex centre = free[pick_centre(rng)];
    const double radius = (0.05 + 2.5 * unit(rng)) * max_length;
    VertexSet in_k = ball(space, centre, radius).members;
    for (Vertex v : in_k.members()) {
      if (!omega.contains(v)) in_k.erase(v);
    }
    const std::vector<Vertex> k = in_k.members();

    std::vector<Vertex> rim;
    for (Vertex x : k) {
      for (const Incidence& inc : space.neighbors(x)) {
        if (!in_k.contains(inc.other)) rim.push_back(inc.other);
      }
    }
    double target = u[centre];
    if (!rim.empty()) target = u[rim[std::uniform_int_distribution<std::size_t>(0, rim.size() - 1)(rng)]];

    // three perturbation families: bounded noise, flattening to a rim value,
    // and partial flattening
    const std::size_t family = s % 3;
    const double lambda = unit(rng);
    for (Vertex x : k) {
      switch (family) {
        case 0: perturbed[x] = u[x] + amplitude * (2.0 * unit(rng) - 1.0); break;
        case 1: perturbed[x] = target; break;
        default: perturbed[x] = u[x] + lambda * (target - u[x]); break;
      }
    }
    const double before = local_variation(space, u.values(), k, in_k);
    const double after = local_variation(space, perturbed, k, in_k);
    for (Vertex x : k) perturbed[x] = u[x];

    double ratio = 1.0;
    if (after > 0.0) {
      ratio = before / after;
    } else if (before > 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    if (ratio > report.max_ratio || s == 0) {
      report.max_ratio = std::max(report.max_ratio, ratio);
      report.witness_sample = s;
      report.witness_support = k;
    }
  }
  return report;
}

}  // namespace bvgraph
