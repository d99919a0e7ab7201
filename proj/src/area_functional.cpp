#include "bvgraph/area_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bvgraph/error.hpp"
#include "bvgraph/first_order.hpp"

namespace bvgraph {

namespace {

// sqrt(m^2 + t^2), pinned into [max(m, t), m + t] where rounding could
// otherwise step outside by an ulp.
double edge_area(double m, double t) { return std::clamp(std::hypot(m, t), std::max(m, t), m + t); }

void check_config(const MetricMeasureSpace& space, const AreaFunctionalConfig& cfg) {
  if (cfg.edge_mass.size() != space.num_edges()) {
    throw Error(Errc::invalid_input, "area config has " + std::to_string(cfg.edge_mass.size()) +
                                         " edge masses for " + std::to_string(space.num_edges()) + " edges");
  }
}

// Number of levels t_i with t_i <= v.
std::size_t levels_below(std::span<const double> levels, double v) {
  return static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), v) - levels.begin());
}

// Cut weight over the product edges touching `flipped` vertices, reading
// membership through `in`. Edges between two flipped vertices are counted
// once, from the smaller index.
template <typename In>
double touching_perimeter(const ProductSpace& prod, std::span<const std::size_t> flipped,
                          const std::vector<std::uint8_t>& is_flipped, In in) {
  const MetricMeasureSpace& base = prod.base();
  const std::size_t top = prod.num_levels() - 1;
  double s = 0.0;
  for (std::size_t p : flipped) {
    const ProductVertex pv = prod.vertex(p);
    const bool here = in(p);
    auto visit = [&](std::size_t q, double w) {
      if (is_flipped[q] && q < p) return;
      if (here != in(q)) s += w;
    };
    for (const Incidence& inc : base.neighbors(pv.base)) {
      visit(prod.index(inc.other, pv.level), prod.horizontal_weight(inc.edge));
    }
    const double mu = prod.vertical_weight(pv.base);
    if (pv.level < top) {
      visit(prod.index(pv.base, pv.level + 1), mu);
    } else if (here) {
      s += mu;
    }
    if (pv.level > 0) {
      visit(prod.index(pv.base, pv.level - 1), mu);
    } else if (!here) {
      s += mu;
    }
  }
  return s;
}

}  // namespace

AreaFunctionalConfig area_config(const MetricMeasureSpace& space) {
  AreaFunctionalConfig cfg;
  cfg.edge_mass.resize(space.num_edges());
  for (std::size_t e = 0; e < space.num_edges(); ++e) {
    const Edge& ed = space.edge(e);
    cfg.edge_mass[e] = space.mass(ed.a) / static_cast<double>(space.degree(ed.a)) +
                       space.mass(ed.b) / static_cast<double>(space.degree(ed.b));
  }
  return cfg;
}

GrowthSandwich growth_sandwich(const BvFunction& u, const VertexSet& a, const AreaFunctionalConfig& cfg) {
  const MetricMeasureSpace& space = u.space();
  check_config(space, cfg);
  GrowthSandwich g{0.0, 0.0, 0.0};
  for (std::size_t e = 0; e < space.num_edges(); ++e) {
    const Edge& ed = space.edge(e);
    const bool in_a = a.contains(ed.a);
    const bool in_b = a.contains(ed.b);
    if (in_a && in_b) {
      const double m = cfg.edge_mass[e];
      const double t = ed.tv_weight * std::abs(u[ed.a] - u[ed.b]);
      g.lower += cfg.growth_lower * (m + t);
      g.value += edge_area(m, t);
      g.upper += cfg.growth_upper * (m + t);
      continue;
    }
    for (Vertex v : {ed.a, ed.b}) {
      if (!a.contains(v)) continue;
      const double share = space.mass(v) / static_cast<double>(space.degree(v));
      g.lower += cfg.growth_lower * share;
      g.value += share;
      g.upper += cfg.growth_upper * share;
    }
  }
  return g;
}

double area_value(const BvFunction& u, const VertexSet& a, const AreaFunctionalConfig& cfg) {
  return growth_sandwich(u, a, cfg).value;
}

AreaMinimizer solve_area_minimizer(const DirichletProblem& p, const AreaFunctionalConfig& cfg, double tol,
                                   std::size_t max_iters) {
  if (!(tol > 0.0)) throw Error(Errc::invalid_input, "tolerance must be positive");
  check_config(p.space(), cfg);
  FirstOrderOptions options;
  options.tol = tol;
  options.max_iters = max_iters;
  FirstOrderResult r = minimize_edge_energy(p, EdgePenalty::area, cfg.edge_mass, options);
  BvFunction u(p.space_ptr(), std::move(r.u));
  double energy = 0.0;
  for (std::size_t e : p.objective_edges()) {
    const Edge& ed = p.space().edge(e);
    energy += edge_area(cfg.edge_mass[e], ed.tv_weight * std::abs(u[ed.a] - u[ed.b]));
  }
  return AreaMinimizer{std::move(u), energy, r.gap, r.iterations, r.converged};
}

SubgraphSet::SubgraphSet(ProductSpace product, std::vector<std::uint8_t> members)
    : product_(std::move(product)), members_(std::move(members)) {
  if (members_.size() != product_.num_vertices()) {
    throw Error(Errc::invalid_input, "subgraph membership does not match the product space");
  }
}

std::size_t SubgraphSet::column_height(Vertex x) const {
  std::size_t h = 0;
  for (std::size_t i = 0; i < product_.num_levels(); ++i) h += contains(x, i);
  return h;
}

bool SubgraphSet::column_monotone() const {
  for (Vertex x = 0; x < product_.base().num_vertices(); ++x) {
    for (std::size_t i = 1; i < product_.num_levels(); ++i) {
      if (contains(x, i) && !contains(x, i - 1)) return false;
    }
  }
  return true;
}

SubgraphSet build_subgraph(const BvFunction& u, const ProductSpace& prod) {
  if (&u.space() != &prod.base()) throw Error(Errc::invalid_input, "function and product use different spaces");
  const std::span<const double> t = prod.levels();
  if (u.min() < t.front() || u.max() > t.back()) {
    throw Error(Errc::invalid_range, "levels [" + std::to_string(t.front()) + ", " + std::to_string(t.back()) +
                                         "] do not cover the range of u");
  }
  std::vector<std::uint8_t> members(prod.num_vertices(), 0);
  for (Vertex x = 0; x < u.size(); ++x) {
    for (std::size_t i = 0; i < t.size(); ++i) members[prod.index(x, i)] = t[i] <= u[x];
  }
  return SubgraphSet(prod, std::move(members));
}

ProductSpace subgraph_product(const BvFunction& u, std::size_t n_levels) {
  const double lo = u.min();
  double hi = u.max();
  if (hi == lo) hi = lo + 1.0;
  return ProductSpace(u.space_ptr(), lo, hi, n_levels);
}

double subgraph_perimeter(const SubgraphSet& e, const VertexSet& u_cols) {
  const ProductSpace& prod = e.product();
  const MetricMeasureSpace& base = prod.base();
  const std::size_t levels = prod.num_levels();
  double s = 0.0;
  for (std::size_t k = 0; k < base.num_edges(); ++k) {
    const Edge& ed = base.edge(k);
    if (!u_cols.contains(ed.a) || !u_cols.contains(ed.b)) continue;
    for (std::size_t i = 0; i < levels; ++i) {
      if (e.contains(ed.a, i) != e.contains(ed.b, i)) s += prod.horizontal_weight(k);
    }
  }
  for (Vertex x : u_cols.members()) {
    const double mu = prod.vertical_weight(x);
    if (!e.contains(x, 0)) s += mu;
    if (e.contains(x, levels - 1)) s += mu;
    for (std::size_t i = 0; i + 1 < levels; ++i) {
      if (e.contains(x, i) != e.contains(x, i + 1)) s += mu;
    }
  }
  return s;
}

double SubgraphPerimeterReport::identity_residual() const {
  return std::abs(perimeter - (mass + quantized_variation));
}

SubgraphPerimeterReport subgraph_perimeter_report(const BvFunction& u, const SubgraphSet& e, const VertexSet& u_cols,
                                                  const AreaFunctionalConfig& cfg, double tol) {
  const ProductSpace& prod = e.product();
  const MetricMeasureSpace& space = u.space();
  const std::span<const double> t = prod.levels();
  SubgraphPerimeterReport r{};
  r.perimeter = subgraph_perimeter(e, u_cols);
  r.mass = space.mass_of(u_cols);
  r.variation = total_variation(u, u_cols);
  r.area = area_value(u, u_cols, cfg);

  std::size_t inside = 0;
  double w_max = 0.0;
  double horizontal = 0.0;
  for (std::size_t k = 0; k < space.num_edges(); ++k) {
    const Edge& ed = space.edge(k);
    if (!u_cols.contains(ed.a) || !u_cols.contains(ed.b)) continue;
    ++inside;
    w_max = std::max(w_max, ed.tv_weight);
    const std::size_t ca = levels_below(t, u[ed.a]);
    const std::size_t cb = levels_below(t, u[ed.b]);
    r.quantized_variation += ed.tv_weight * prod.step() * static_cast<double>(ca > cb ? ca - cb : cb - ca);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (e.contains(ed.a, i) != e.contains(ed.b, i)) horizontal += prod.horizontal_weight(k);
    }
  }
  r.vertical_term = r.perimeter - horizontal;
  r.quantization_bound = static_cast<double>(inside) * prod.step() * w_max;

  auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b))); };
  auto below = [tol](double lhs, double rhs) { return lhs <= rhs + tol * (1.0 + std::abs(rhs)); };
  r.decomposition_holds = close(r.perimeter, r.mass + r.quantized_variation) && close(r.vertical_term, r.mass) &&
                          below(std::abs(r.quantized_variation - r.variation), r.quantization_bound);
  r.variation_bound_holds = below(r.perimeter, r.mass + r.variation + r.quantization_bound);
  r.area_bound_holds = below(r.perimeter, 2.0 * r.area + r.quantization_bound);
  return r;
}

double flip_ratio(const SubgraphSet& e, std::span<const std::size_t> flips) {
  std::vector<std::uint8_t> marked(e.product().num_vertices(), 0);
  std::vector<std::size_t> k;
  for (std::size_t p : flips) {
    if (p >= marked.size()) throw Error(Errc::invalid_input, "flip outside the product space");
    if (!marked[p]) k.push_back(p);
    marked[p] = 1;
  }
  auto in_e = [&](std::size_t q) { return e.contains(q); };
  auto in_f = [&](std::size_t q) { return e.contains(q) != (marked[q] != 0); };
  const double before = touching_perimeter(e.product(), k, marked, in_e);
  const double after = touching_perimeter(e.product(), k, marked, in_f);
  if (after > 0.0) return before / after;
  return before > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

SubgraphProbeReport subgraph_quasiminimality_probe(const SubgraphSet& e, const VertexSet& omega, std::size_t samples,
                                                   std::uint64_t seed) {
  if (samples < 1) throw Error(Errc::invalid_input, "quasiminimality probe needs at least one sample");
  const ProductSpace& prod = e.product();
  const MetricMeasureSpace& base = prod.base();
  if (omega.universe() != base.num_vertices()) throw Error(Errc::invalid_input, "omega does not match the space");
  const std::vector<Vertex> free = omega.members();
  if (free.empty()) throw Error(Errc::invalid_input, "quasiminimality probe needs a nonempty omega");
  const std::size_t n = prod.num_levels();
  double max_length = 0.0;
  for (const Edge& ed : base.edges()) max_length = std::max(max_length, ed.length);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_level(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto upto = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, hi))(rng); };

  SubgraphProbeReport report;
  report.samples = samples;
  report.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> flips;
  for (std::size_t s = 0; s < samples; ++s) {
    flips.clear();
    const auto family = static_cast<ProbeFamily>(s % 3);
    const Vertex x = free[pick(rng)];
    switch (family) {
      case ProbeFamily::column_height: {
        const std::size_t h = e.column_height(x);
        std::size_t h2 = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        if (h2 >= h) ++h2;  // uniform over {0..n} minus h
        for (std::size_t i = std::min(h, h2); i < std::max(h, h2); ++i) flips.push_back(prod.index(x, i));
        break;
      }
      case ProbeFamily::segment_flip: {
        const std::size_t start = pick_level(rng);
        const std::size_t len = upto(n / 8);
        for (std::size_t i = start; i < std::min(n, start + len); ++i) flips.push_back(prod.index(x, i));
        break;
      }
      case ProbeFamily::box_bubble: {
        const double radius = (0.5 + 2.0 * unit(rng)) * max_length;
        const std::size_t start = pick_level(rng);
        const std::size_t len = upto(n / 16);
        for (Vertex y : ball(base, x, radius).members.members()) {
          if (!omega.contains(y)) continue;
          for (std::size_t i = start; i < std::min(n, start + len); ++i) flips.push_back(prod.index(y, i));
        }
        break;
      }
    }
    const double ratio = flip_ratio(e, flips);
    report.min_ratio = std::min(report.min_ratio, ratio);
    if (s == 0 || ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.witness_sample = s;
      report.witness_family = family;
      report.witness_flips = flips;
    }
  }
  return report;
}

}  // namespace bvgraph
