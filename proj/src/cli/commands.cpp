#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "bvgraph/area_functional.hpp"
#include "bvgraph/bundled.hpp"
#include "bvgraph/cli/expression.hpp"
#include "bvgraph/error.hpp"
#include "bvgraph/io.hpp"
#include "bvgraph/least_gradient.hpp"
#include "bvgraph/regularity_lab.hpp"

namespace bvgraph::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

std::string space_text(const MetricMeasureSpace& space) {
  std::ostringstream s;
  write_space(s, space);
  return s.str();
}

json values_json(const BvFunction& u) { return json(std::vector<double>(u.values().begin(), u.values().end())); }

json problem_json(const DirichletProblem& p) {
  return {{"space", space_text(p.space())}, {"omega", p.omega().members()}, {"boundary", values_json(p.boundary())}};
}

json source_json(const ProblemSource& s) {
  if (!s.instance.empty()) return {{"instance", s.instance}};
  return {{"space", s.space}, {"omega", s.omega}, {"boundary", s.boundary}};
}

DirichletProblem load_problem(const ProblemSource& s, const std::string& fallback) {
  const bool files = !s.space.empty() || !s.omega.empty() || !s.boundary.empty();
  if (!s.instance.empty() && files) throw Error(Errc::invalid_input, "give either --instance or input files, not both");
  if (!files) return bundled::instance(s.instance.empty() ? fallback : s.instance);
  if (s.space.empty() || s.omega.empty() || s.boundary.empty()) {
    throw Error(Errc::invalid_input, "--space, --omega and --boundary must be given together");
  }
  SpacePtr space = read_space(s.space);
  VertexSet omega = read_vertex_set(s.omega, space->num_vertices());
  BvFunction boundary = read_function(s.boundary, space);
  return DirichletProblem(std::move(boundary), std::move(omega));
}

BvFunction random_values(const SpacePtr& space, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0) {
  // half the trials draw from a few integers so ties between values occur
  const bool ties = std::bernoulli_distribution(0.5)(rng);
  std::uniform_real_distribution<double> cont(lo, hi);
  std::uniform_int_distribution<int> small(0, 3);
  std::vector<double> v(space->num_vertices());
  for (double& x : v) x = ties ? lo + (hi - lo) * small(rng) / 3.0 : cont(rng);
  return BvFunction(space, std::move(v));
}

VertexSet random_subset(std::size_t n, std::mt19937_64& rng, double p) {
  VertexSet a(n);
  std::bernoulli_distribution in(p);
  for (Vertex v = 0; v < n; ++v) {
    if (in(rng)) a.insert(v);
  }
  return a;
}

double max_gap(const MinimalityCertificate& c) { return c.entries.empty() ? 0.0 : c.max_gap(); }

// ---------------------------------------------------------------- solve

json certificate_json(const LeastGradientSolution& s) {
  json levels = json::array();
  for (const StackLevel& l : s.stack) {
    levels.push_back({{"threshold", l.threshold},
                      {"cut_value", l.cut_value},
                      {"max_flow", l.max_flow},
                      {"gap", l.cut_value - l.max_flow},
                      {"superlevel_size", l.superlevel.size()}});
  }
  return levels;
}

void record_solution_checks(Report& rep, const std::string& prefix, const DirichletProblem& p,
                            const LeastGradientSolution& s) {
  rep.check(prefix + "admissible", p.admissible(s.u), 0.0, 0.0, 0.0);
  const MaxPrincipleReport mp = max_principle_check(p, s.u);
  rep.check(prefix + "max-principle", mp.holds(), static_cast<double>(mp.violations.size()), 0.0, 0.0,
            json{{"violations", mp.violations}, {"lower", mp.lower}, {"upper", mp.upper}});
}

// ---------------------------------------------------------------- verify

struct TrialOutcome {
  bool passed;
  double lhs;
  double rhs;
  json witness;
};

SpacePtr trial_space(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng) {
  if (!o.random_graphs) return fixed;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, std::max<std::size_t>(2, o.max_vertices))(rng);
  return random_connected_graph(n, std::uniform_real_distribution<double>(0.05, 0.5)(rng), rng);
}

DirichletProblem trial_problem(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng) {
  if (!fixed) {
    const std::size_t hi = std::max<std::size_t>(3, o.max_vertices);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, hi)(rng);
    return bundled::random_problem(n, rng, std::bernoulli_distribution(0.5)(rng));
  }
  const std::size_t n = fixed->num_vertices();
  VertexSet omega = random_subset(n, rng, 0.6);
  if (omega.size() == n) omega.erase(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  return DirichletProblem(random_values(fixed, rng), std::move(omega));
}

json function_witness(const BvFunction& u, bool random_space) {
  json w{{"u", values_json(u)}};
  if (random_space) w["space"] = space_text(u.space());
  return w;
}

TrialOutcome coarea_trial(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng, double tol) {
  const SpacePtr space = trial_space(o, fixed, rng);
  const BvFunction u = random_values(space, rng);
  const VertexSet a =
      std::bernoulli_distribution(0.3)(rng) ? VertexSet::all(space->num_vertices()) : random_subset(space->num_vertices(), rng, 0.7);
  const IdentityCheck c = coarea_check(u, a);
  json w = function_witness(u, o.random_graphs);
  w["a"] = a.members();
  return {c.residual() <= tol, c.lhs, c.rhs, std::move(w)};
}

TrialOutcome truncation_trial(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng, double tol) {
  const SpacePtr space = trial_space(o, fixed, rng);
  const BvFunction u = random_values(space, rng);
  // thresholds on a value of u are the delicate case
  const double t = std::bernoulli_distribution(0.3)(rng)
                       ? u[std::uniform_int_distribution<std::size_t>(0, u.size() - 1)(rng)]
                       : std::uniform_real_distribution<double>(u.min() - 0.5, u.max() + 0.5)(rng);
  const TruncationReport r = truncation_decomposition(u, t);
  json w = function_witness(u, o.random_graphs);
  w["t"] = t;
  return {r.max_edge_residual <= tol, r.max_edge_residual, 0.0, std::move(w)};
}

TrialOutcome leibniz_trial(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng, double tol) {
  const SpacePtr space = trial_space(o, fixed, rng);
  const BvFunction u = random_values(space, rng);
  const BvFunction v = random_values(space, rng);
  const BvFunction eta = random_values(space, rng, 0.0, 1.0);
  const VertexSet a = VertexSet::all(space->num_vertices());
  const IdentityCheck c = leibniz_bound_check(u, v, eta, a);
  json w = function_witness(u, o.random_graphs);
  w["v"] = values_json(v);
  w["eta"] = values_json(eta);
  return {c.lhs <= c.rhs + tol * (1.0 + c.rhs), c.lhs, c.rhs, std::move(w)};
}

TrialOutcome leastgrad_trial(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng, double tol) {
  const DirichletProblem p = trial_problem(o, fixed, rng);
  const LeastGradientSolution s = solve_threshold_stack(p);
  std::vector<VertexSet> supports{p.omega()};
  VertexSet part = random_subset(p.space().num_vertices(), rng, 0.5);
  VertexSet k(p.space().num_vertices());
  for (Vertex v : part.members()) {
    if (p.omega().contains(v)) k.insert(v);
  }
  if (!k.empty()) supports.push_back(std::move(k));
  const MinimalityCertificate cert = verify_least_gradient(s.u, p.omega(), supports);
  const double gap = std::max(max_gap(cert), max_gap(s.certificate));
  const double scale = 1.0 + s.objective;
  const bool ok = gap <= tol * scale && p.admissible(s.u) && max_principle_check(s).holds();
  json w = problem_json(p);
  w["u"] = values_json(s.u);
  return {ok, gap, 0.0, std::move(w)};
}

TrialOutcome superlevel_trial(const VerifyOptions& o, const SpacePtr& fixed, std::mt19937_64& rng, double tol) {
  const DirichletProblem p = trial_problem(o, fixed, rng);
  const LeastGradientSolution s = solve_threshold_stack(p);
  const std::vector<SuperlevelCheck> checks = verify_superlevel_minimality(s, 3, tol);
  double worst = 0.0;
  bool ok = true;
  json failing = json::array();
  for (const SuperlevelCheck& c : checks) {
    worst = std::max(worst, c.perimeter - c.min_cut);
    if (!c.minimal) {
      ok = false;
      failing.push_back(c.threshold);
    }
  }
  json w = problem_json(p);
  w["thresholds"] = std::move(failing);
  return {ok, worst, 0.0, std::move(w)};
}

// ---------------------------------------------------------------- experiments

std::vector<std::size_t> or_default(const std::vector<std::size_t>& v, std::vector<std::size_t> fallback) {
  return v.empty() ? fallback : v;
}

void add_rows(Table& t, const ContinuityTable& c, const RefinementFamily& family) {
  for (const OscillationRow& r : c.rows) t.rows.push_back({family.resolution[r.level], r.radius, r.oscillation});
}

json continuity_json(const ContinuityTable& c) {
  json rows = json::array();
  for (const OscillationRow& r : c.rows) {
    rows.push_back({{"resolution", r.resolution}, {"radius", r.radius}, {"oscillation", r.oscillation}});
  }
  return {{"probe", {c.probe.x, c.probe.y}}, {"flagged_jump", c.flagged_jump}, {"rows", std::move(rows)}};
}

// Oscillation at the smallest radius tabulated for the finest level.
double finest_oscillation(const ContinuityTable& c, std::size_t finest) {
  const std::vector<OscillationRow> rows = c.level_rows(finest);
  return rows.empty() ? std::numeric_limits<double>::quiet_NaN() : rows.front().oscillation;
}

void experiment_maxprinciple(const ExperimentOptions& o, Report& rep) {
  Table slack{"bounds_slack", {}};
  std::size_t violations = 0;
  for (std::size_t i = 0; i < o.instances; ++i) {
    std::mt19937_64 rng = trial_rng(o.seed, i);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, std::max<std::size_t>(3, o.max_vertices))(rng);
    const DirichletProblem p = bundled::random_problem(n, rng, i % 2 == 0);
    const LeastGradientSolution s = solve_threshold_stack(p);
    const MaxPrincipleReport m = max_principle_check(s);
    violations += m.violations.size();
    json w = problem_json(p);
    w["u"] = values_json(s.u);
    w["violations"] = m.violations;
    rep.check("instance[" + std::to_string(i) + "]", m.holds(), static_cast<double>(m.violations.size()), 0.0, 0.0,
              std::move(w));
    slack.rows.push_back({i, std::nullopt, std::min(m.min_value - m.lower, m.upper - m.max_value)});
  }

  const LeastGradientSolution p4 = solve_threshold_stack(bundled::p4());
  const MaxPrincipleReport m = max_principle_check(p4);
  rep.check("p4-range", m.holds() && m.lower == 0.0 && m.upper == 1.0, m.max_value - m.min_value, 1.0, 0.0,
            {{"u", values_json(p4.u)}});

  bool rejected = false;
  std::string message;
  try {
    DirichletProblem(BvFunction::constant(build_path(4), 1.0), VertexSet::all(4));
  } catch (const Error& e) {
    rejected = e.code() == Errc::ill_posed;
    message = e.what();
  }
  rep.check("ill-posed-rejected", rejected, rejected ? 1.0 : 0.0, 1.0, 0.0, {{"message", message}});
  rep.results["instances"] = o.instances;
  rep.results["violations"] = violations;
  rep.results["ill_posed_message"] = message;
  rep.tables.push_back(std::move(slack));
}

std::vector<BvFunction> solve_all(std::span<const BvFunction> data, const VertexSet& omega) {
  std::vector<BvFunction> us;
  for (const BvFunction& f : data) us.push_back(solve_threshold_stack(DirichletProblem(f, omega)).u);
  return us;
}

void experiment_stability(const ExperimentOptions& o, Report& rep) {
  const bundled::StabilityInstance inst = bundled::stability_grid(o.n, o.k_max);
  const StabilityReport r = dirichlet_stability_experiment(inst.problem, inst.data);
  Table dist{"l1_distance", {}};
  Table drift{"objective_drift", {}};
  std::vector<double> ds;
  json entries = json::array();
  for (const StabilityEntry& e : r.entries) {
    const std::size_t k = e.index + 1;
    ds.push_back(e.l1_distance);
    dist.rows.push_back({k, std::nullopt, e.l1_distance});
    drift.rows.push_back({k, std::nullopt, e.objective_drift});
    entries.push_back({{"k", k},
                       {"l1_distance", e.l1_distance},
                       {"objective", e.objective},
                       {"certificate_gap", e.certificate_gap},
                       {"objective_drift", e.objective_drift},
                       {"drift_bound", e.drift_bound}});
    rep.check("drift-bound[" + std::to_string(k) + "]", e.objective_drift <= e.drift_bound + 1e-12 * (1.0 + e.drift_bound),
              e.objective_drift, e.drift_bound, 1e-12, {{"k", k}});
  }
  rep.check("distances-decay", decays_to_zero(ds), ds.empty() ? 0.0 : ds.front(), ds.empty() ? 0.0 : ds.back(), 0.0,
            {{"distances", ds}});
  const double last = ds.empty() ? 0.0 : ds.back();
  rep.check("last-distance", last < o.tol, last, 0.0, o.tol, {{"k_max", o.k_max}});
  rep.check("limit-certificate", r.limit_certificate && r.limit_gap() <= 1e-9, r.limit_gap(), 0.0, 1e-9);

  // the same sequence read as certified solutions converging to a limit
  const std::vector<BvFunction> us = solve_all(inst.data, inst.problem.omega());
  const BvFunction limit = solve_threshold_stack(inst.problem).u;
  const StabilityReport local = local_stability_experiment(us, limit, inst.problem.omega());
  rep.check("local-converges", local.sequence_converges, 0.0, 0.0, 0.0);
  rep.check("local-limit-certificate", local.limit_certificate && local.limit_gap() <= 1e-9, local.limit_gap(), 0.0,
            1e-9);
  rep.results["entries"] = std::move(entries);
  rep.results["sequence_converges"] = r.sequence_converges;
  rep.results["limit_gap"] = r.limit_gap();
  rep.results["local_limit_gap"] = local.limit_gap();
  rep.tables.push_back(std::move(dist));
  rep.tables.push_back(std::move(drift));
}

void experiment_pointwise(const ExperimentOptions& o, Report& rep) {
  const bundled::StabilityInstance inst = bundled::stability_grid(o.n, o.k_max);
  const std::vector<BvFunction> us = solve_all(inst.data, inst.problem.omega());
  const BvFunction limit = solve_threshold_stack(inst.problem).u;
  const PointwiseReport r = pointwise_stability_experiment(us, limit, inst.problem.omega(), o.intermediate);
  for (std::size_t k = 0; k < r.member_certified.size(); ++k) {
    rep.check("member-certified[" + std::to_string(k + 1) + "]", r.member_certified[k], 0.0, 0.0, 1e-9);
  }
  rep.check("pointwise-converges", r.pointwise_converges, 0.0, 0.0, 0.0);
  Table gaps{"threshold_gap", {}};
  json rows = json::array();
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const SuperlevelCheck& c = r.checks[i];
    rep.check("threshold[" + std::to_string(i) + "]", c.minimal, c.perimeter, c.min_cut, 1e-9,
              {{"threshold", c.threshold}});
    gaps.rows.push_back({i, std::nullopt, c.perimeter - c.min_cut});
    rows.push_back({{"threshold", c.threshold}, {"perimeter", c.perimeter}, {"min_cut", c.min_cut}});
  }
  rep.results["thresholds"] = std::move(rows);
  rep.tables.push_back(std::move(gaps));
}

void experiment_degiorgi(const ExperimentOptions& o, Report& rep) {
  const std::vector<std::size_t> levels = or_default(o.levels, {16, 32, 64, 128});
  Table constants{"constant", {}};
  std::vector<double> ratios;
  json rows = json::array();
  for (std::size_t n : levels) {
    const DirichletProblem p = bundled::half_plane(n);
    const LeastGradientSolution s = solve_threshold_stack(p);
    rep.check("certificate[" + std::to_string(n) + "]", s.certificate.passed(1e-9), max_gap(s.certificate), 0.0, 1e-9);
    const DeGiorgiPair pair{p.space().nearest_vertex({0.5, 0.5}), o.r, o.big_r};
    const DeGiorgiReport r = de_giorgi_scan(s.u, p.omega(), std::span<const DeGiorgiPair>(&pair, 1));
    const DeGiorgiEntry& e = r.entries.front();
    ratios.push_back(e.ratio);
    constants.rows.push_back({n, o.r, e.ratio});
    rows.push_back({{"resolution", n},
                    {"numerator", e.numerator},
                    {"denominator", e.denominator},
                    {"ratio", e.ratio},
                    {"applicable", e.applicable}});
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  rep.check("constant-spread", spread < 2.0, spread, 2.0, 0.0, {{"ratios", ratios}});
  rep.results["levels"] = std::move(rows);
  rep.results["max_constant"] = *hi;
  rep.tables.push_back(std::move(constants));
}

void experiment_continuity(const ExperimentOptions& o, Report& rep) {
  const bool area = o.functional == "area";
  if (!area && o.functional != "tv") throw Error(Errc::invalid_input, "--functional must be tv or area");
  const std::vector<std::size_t> levels =
      or_default(o.levels, area ? std::vector<std::size_t>{16, 32} : std::vector<std::size_t>{16, 32, 64, 128});
  const bundled::JumpInstance inst = bundled::channel_jump(levels);
  const std::vector<double> radii = o.radii.empty() ? inst.radii : o.radii;
  std::vector<BvFunction> solutions;
  for (std::size_t i = 0; i < inst.problems.size(); ++i) {
    const DirichletProblem& p = inst.problems[i];
    if (area) {
      const AreaMinimizer m = solve_area_minimizer(p, area_config(p.space()), o.solver_tol);
      rep.check("converged[" + std::to_string(levels[i]) + "]", m.converged, m.duality_gap, 0.0, o.solver_tol);
      solutions.push_back(m.u);
    } else {
      const LeastGradientSolution s = solve_threshold_stack(p);
      rep.check("certificate[" + std::to_string(levels[i]) + "]", s.certificate.passed(1e-9), max_gap(s.certificate),
                0.0, 1e-9);
      solutions.push_back(s.u);
    }
  }
  const double gap = inst.data_gap;
  const std::size_t finest = levels.size() - 1;

  const ContinuityTable jump = continuity_table(inst.family, solutions, inst.interface_probe, radii, 0.5 * gap);
  Table jump_rows{"oscillation_interface", {}};
  add_rows(jump_rows, jump, inst.family);
  if (!area) {
    rep.check("interface-flagged", jump.flagged_jump, 0.0, 0.0, 0.0);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      double lowest = std::numeric_limits<double>::infinity();
      for (const OscillationRow& r : jump.level_rows(l)) lowest = std::min(lowest, r.oscillation);
      rep.check("interface[" + std::to_string(levels[l]) + "]", lowest >= 0.5 * gap, lowest, 0.5 * gap, 0.0,
                {{"resolution", levels[l]}});
    }
  }
  json probes = json::array();
  probes.push_back(continuity_json(jump));
  rep.tables.push_back(std::move(jump_rows));

  for (std::size_t i = 0; i < inst.smooth_probes.size(); ++i) {
    const ContinuityTable c = continuity_table(inst.family, solutions, inst.smooth_probes[i], radii, 0.5 * gap);
    const std::string tag = "smooth_" + std::to_string(i);
    Table t{"oscillation_" + tag, {}};
    add_rows(t, c, inst.family);
    rep.tables.push_back(std::move(t));
    const double osc = finest_oscillation(c, finest);
    rep.check(tag + "-not-flagged", !c.flagged_jump, 0.0, 0.0, 0.0, {{"probe", {c.probe.x, c.probe.y}}});
    rep.check(tag + "-finest", osc <= 0.1 * gap, osc, 0.1 * gap, 0.0, {{"probe", {c.probe.x, c.probe.y}}});
    probes.push_back(continuity_json(c));
  }
  rep.results["functional"] = o.functional;
  rep.results["data_gap"] = gap;
  rep.results["probes"] = std::move(probes);
}

void experiment_porosity(const ExperimentOptions& o, Report& rep) {
  const std::size_t n = o.porosity_n;
  const DirichletProblem p = bundled::half_plane(n);
  const LeastGradientSolution s = solve_threshold_stack(p);
  rep.check("certificate", s.certificate.passed(1e-9), max_gap(s.certificate), 0.0, 1e-9);
  const VertexSet e = superlevel_set(s.u, 0.5).members;
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> radii;
  if (o.radii.empty()) {
    for (double c : {4.0, 8.0, 12.0}) radii.push_back(c * h);
  } else {
    radii = o.radii;
  }
  const Vertex x = p.space().nearest_vertex({0.5, 0.5});
  const std::vector<PorosityEntry> entries = porosity_probe(p.space(), e, x, radii);
  Table t{"ratio", {}};
  json rows = json::array();
  double worst = 0.0;
  for (const PorosityEntry& pe : entries) {
    t.rows.push_back({n, pe.radius, pe.ratio});
    rows.push_back({{"radius", pe.radius}, {"rho_max", pe.rho_max}, {"witness", pe.witness}, {"ratio", pe.ratio}});
    rep.check("porous[" + std::to_string(pe.radius) + "]", std::isfinite(pe.ratio), pe.ratio, 0.0, 0.0,
              {{"radius", pe.radius}, {"x", x}});
    worst = std::max(worst, pe.ratio);
  }
  rep.results["probe_vertex"] = x;
  rep.results["entries"] = std::move(rows);
  rep.results["max_ratio"] = worst;
  rep.tables.push_back(std::move(t));
}

void experiment_area(const ExperimentOptions& o, Report& rep) {
  const DirichletProblem p = load_problem(o.source, "ramp6");
  const AreaFunctionalConfig cfg = area_config(p.space());
  const AreaMinimizer m = solve_area_minimizer(p, cfg, o.solver_tol);
  rep.check("converged", m.converged, m.duality_gap, 0.0, o.solver_tol);
  const VertexSet all = VertexSet::all(p.space().num_vertices());
  const GrowthSandwich g = growth_sandwich(m.u, all, cfg);
  rep.check("growth-sandwich", g.holds(), g.value, g.upper, 0.0, {{"lower", g.lower}, {"u", values_json(m.u)}});

  double lo = p.datum_min();
  double hi = p.datum_max();
  if (!(hi > lo)) hi = lo + 1.0;
  const ProductSpace prod(p.space_ptr(), lo, hi, o.subgraph_levels);
  const SubgraphSet sub = build_subgraph(m.u, prod);
  const SubgraphPerimeterReport pr = subgraph_perimeter_report(m.u, sub, all, cfg);
  rep.check("perimeter-decomposition", pr.decomposition_holds, pr.perimeter, pr.vertical_term + pr.quantized_variation,
            pr.quantization_bound);
  rep.check("perimeter-variation-bound", pr.variation_bound_holds, pr.perimeter,
            pr.mass + pr.variation + pr.quantization_bound, pr.quantization_bound);
  rep.check("perimeter-area-bound", pr.area_bound_holds, pr.perimeter, 2.0 * pr.area + pr.quantization_bound,
            pr.quantization_bound);

  const SubgraphProbeReport good = subgraph_quasiminimality_probe(sub, p.omega(), o.samples, o.seed);
  rep.check("minimizer-ratio-finite", std::isfinite(good.max_ratio), good.max_ratio, 0.0, 0.0,
            {{"sample", good.witness_sample}});

  // raise the lowest omega vertex to the top of the range: not a minimizer
  const std::vector<Vertex> om = p.omega().members();
  std::vector<double> spiked(m.u.values().begin(), m.u.values().end());
  if (!om.empty()) {
    const Vertex low = *std::min_element(om.begin(), om.end(), [&](Vertex a, Vertex b) { return m.u[a] < m.u[b]; });
    spiked[low] = hi;
    const SubgraphSet bad = build_subgraph(BvFunction(p.space_ptr(), spiked), prod);
    const SubgraphProbeReport worse = subgraph_quasiminimality_probe(bad, p.omega(), o.samples, o.seed);
    rep.check("spike-exceeds-minimizer", worse.max_ratio > good.max_ratio, worse.max_ratio, good.max_ratio, 0.0,
              {{"spike_vertex", low}});
    rep.results["spiked_max_ratio"] = worse.max_ratio;
  }
  rep.results["area"] = area_value(m.u, p.closure_omega(), cfg);
  rep.results["energy"] = m.energy;
  rep.results["iterations"] = m.iterations;
  rep.results["perimeter"] = {{"perimeter", pr.perimeter},
                              {"vertical", pr.vertical_term},
                              {"quantized_variation", pr.quantized_variation},
                              {"mass", pr.mass},
                              {"variation", pr.variation},
                              {"area", pr.area},
                              {"quantization_bound", pr.quantization_bound}};
  rep.results["empirical_q"] = good.max_ratio;
  rep.results["min_ratio"] = good.min_ratio;
  rep.results["u"] = values_json(m.u);
}

}  // namespace

void run_gen(const GenOptions& o, std::ostream& out) {
  if (o.kind == "instance") {
    const DirichletProblem p = bundled::instance(o.name);
    const std::filesystem::path dir(o.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create output directory '" + dir.string() + "'");
    write_space(dir / "space.txt", p.space());
    write_vertex_set(dir / "omega.txt", p.omega());
    write_function(dir / "boundary.txt", p.boundary());
    return;
  }
  SpacePtr space;
  if (o.kind == "path") {
    space = build_path(o.n, o.length, o.mass);
  } else if (o.kind == "grid") {
    space = build_grid(o.nx, o.ny);
  } else if (o.kind == "wgrid") {
    const Expression w = Expression::parse(o.weight_expr);
    space = build_weighted_grid(o.nx, o.ny, [&](Point p) { return w(p.x, p.y); });
  } else {
    throw Error(Errc::invalid_input, "unknown generator '" + o.kind + "'");
  }
  if (o.out.empty()) {
    write_space(out, *space);
  } else {
    write_space(std::filesystem::path(o.out), *space);
  }
}

Report run_solve(const SolveOptions& o) {
  if (o.method != "stack" && o.method != "pd" && o.method != "both") {
    throw Error(Errc::invalid_input, "--method must be stack, pd or both");
  }
  Report rep;
  rep.command = "solve";
  rep.config = {{"source", source_json(o.source)}, {"method", o.method}, {"tol", o.tol}, {"max_iters", o.max_iters}};
  const DirichletProblem p = load_problem(o.source, "p4");
  rep.results["vertices"] = p.space().num_vertices();
  rep.results["omega"] = p.omega().members();

  std::optional<LeastGradientSolution> stack;
  if (o.method != "pd") {
    const auto start = Clock::now();
    stack = solve_threshold_stack(p);
    rep.timing["stack_seconds"] = seconds_since(start);
    record_solution_checks(rep, "", p, *stack);
    rep.check("certificate", stack->certificate.passed(1e-9), max_gap(stack->certificate), 0.0, 1e-9,
              problem_json(p));
    rep.results["objective"] = stack->objective;
    rep.results["u"] = values_json(stack->u);
    rep.results["certificate"] = certificate_json(*stack);
  }
  if (o.method != "stack") {
    const auto start = Clock::now();
    const LeastGradientSolution pd = solve_first_order(p, o.tol, o.max_iters);
    rep.timing["pd_seconds"] = seconds_since(start);
    record_solution_checks(rep, "pd-", p, pd);
    rep.check("pd-converged", pd.converged, pd.duality_gap, 0.0, o.tol);
    rep.results["pd"] = {{"objective", pd.objective},
                         {"u", values_json(pd.u)},
                         {"iterations", pd.iterations},
                         {"duality_gap", pd.duality_gap}};
    if (stack) {
      const double tol = o.tol * (1.0 + std::abs(stack->objective));
      rep.check("pd-vs-stack", std::abs(pd.objective - stack->objective) <= tol, pd.objective, stack->objective, tol,
                problem_json(p));
    } else {
      rep.results["objective"] = pd.objective;
      rep.results["u"] = values_json(pd.u);
    }
  }
  if (!o.solution.empty()) {
    const std::vector<double> values = rep.results["u"].get<std::vector<double>>();
    write_function(std::filesystem::path(o.solution), BvFunction(p.space_ptr(), values));
  }
  return rep;
}

Report run_verify(const VerifyOptions& o) {
  using TrialFn = TrialOutcome (*)(const VerifyOptions&, const SpacePtr&, std::mt19937_64&, double);
  TrialFn fn = nullptr;
  double default_tol = 1e-9;
  bool problem_kind = false;
  if (o.kind == "coarea") {
    fn = coarea_trial;
  } else if (o.kind == "truncation") {
    fn = truncation_trial;
    default_tol = 1e-12;
  } else if (o.kind == "leibniz") {
    fn = leibniz_trial;
    default_tol = 1e-12;
  } else if (o.kind == "leastgrad") {
    fn = leastgrad_trial;
    problem_kind = true;
  } else if (o.kind == "superlevel") {
    fn = superlevel_trial;
    problem_kind = true;
  } else {
    throw Error(Errc::invalid_input, "unknown verification '" + o.kind + "'");
  }
  const double tol = o.tol.value_or(default_tol);

  Report rep;
  rep.command = "verify " + o.kind;
  rep.config = {{"trials", o.trials},
                {"seed", o.seed},
                {"space", o.space.empty() ? json(nullptr) : json(o.space)},
                {"random_graphs", o.random_graphs},
                {"max_vertices", o.max_vertices},
                {"tol", tol}};

  SpacePtr fixed;
  if (!o.space.empty()) {
    fixed = read_space(o.space);
  } else if (!problem_kind) {
    fixed = build_path(8);
  }
  VerifyOptions eff = o;
  eff.random_graphs = o.random_graphs && o.space.empty();
  if (problem_kind && o.space.empty()) fixed = nullptr;

  const auto start = Clock::now();
  double worst = 0.0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    std::mt19937_64 rng = trial_rng(o.seed, t);
    TrialOutcome r = fn(eff, fixed, rng, tol);
    r.witness["trial"] = t;
    r.witness["seed"] = o.seed;
    worst = std::max(worst, std::abs(r.lhs - r.rhs));
    rep.check(o.kind + "[" + std::to_string(t) + "]", r.passed, r.lhs, r.rhs, tol, std::move(r.witness));
  }
  rep.timing["seconds"] = seconds_since(start);
  rep.results["trials"] = o.trials;
  rep.results["max_residual"] = worst;
  return rep;
}

Report run_experiment(const ExperimentOptions& o) {
  Report rep;
  rep.command = "experiment " + o.kind;
  rep.config = {{"seed", o.seed}};
  const auto start = Clock::now();
  if (o.kind == "maxprinciple") {
    rep.config.update({{"instances", o.instances}, {"max_vertices", o.max_vertices}});
    experiment_maxprinciple(o, rep);
  } else if (o.kind == "stability") {
    rep.config.update({{"n", o.n}, {"k_max", o.k_max}, {"tol", o.tol}});
    experiment_stability(o, rep);
  } else if (o.kind == "pointwise") {
    rep.config.update({{"n", o.n}, {"k_max", o.k_max}, {"intermediate", o.intermediate}});
    experiment_pointwise(o, rep);
  } else if (o.kind == "degiorgi") {
    rep.config.update({{"levels", o.levels}, {"r", o.r}, {"big_r", o.big_r}});
    experiment_degiorgi(o, rep);
  } else if (o.kind == "continuity") {
    rep.config.update({{"levels", o.levels}, {"radii", o.radii}, {"functional", o.functional}, {"tol", o.solver_tol}});
    experiment_continuity(o, rep);
  } else if (o.kind == "porosity") {
    rep.config.update({{"n", o.porosity_n}, {"radii", o.radii}});
    experiment_porosity(o, rep);
  } else if (o.kind == "area") {
    rep.config.update({{"source", source_json(o.source)},
                       {"levels", o.subgraph_levels},
                       {"samples", o.samples},
                       {"tol", o.solver_tol}});
    experiment_area(o, rep);
  } else {
    throw Error(Errc::invalid_input, "unknown experiment '" + o.kind + "'");
  }
  rep.timing["seconds"] = seconds_since(start);
  return rep;
}

}  // namespace bvgraph::cli
