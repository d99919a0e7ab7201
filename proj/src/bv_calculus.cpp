#include "bvgraph/bv_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "bvgraph/error.hpp"

namespace bvgraph {

namespace {

void require_same_space(const BvFunction& u, const VertexSet& a) {
  if (a.universe() != u.size()) throw Error(Errc::invalid_input, "vertex set does not match the function's space");
}

// Weighted trimmed envelope of the values in `entries` (value, mass).
std::pair<double, double> trimmed_envelope(std::vector<std::pair<double, double>>& entries, double delta) {
  std::sort(entries.begin(), entries.end());
  double total = 0.0;
  for (const auto& [value, mass] : entries) total += mass;
  const double need = (1.0 - delta) * total * (1.0 - 1e-12);

  double upper = entries.back().first;
  double acc = 0.0;
  for (const auto& [value, mass] : entries) {
    acc += mass;
    if (acc >= need) {
      upper = value;
      break;
    }
  }
  double lower = entries.front().first;
  acc = 0.0;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    acc += it->second;
    if (acc >= need) {
      lower = it->first;
      break;
    }
  }
  return {upper, lower};
}

}  // namespace

BvFunction::BvFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(Errc::invalid_input, "function needs a space");
  if (values_.size() != space_->num_vertices()) {
    throw Error(Errc::invalid_input, "function has " + std::to_string(values_.size()) + " values for " +
                                         std::to_string(space_->num_vertices()) + " vertices");
  }
  for (std::size_t v = 0; v < values_.size(); ++v) {
    if (!std::isfinite(values_[v])) {
      throw Error(Errc::invalid_data, "function value at vertex " + std::to_string(v) + " is not finite");
    }
  }
}

BvFunction BvFunction::constant(SpacePtr space, double c) {
  const std::size_t n = space->num_vertices();
  return BvFunction(std::move(space), std::vector<double>(n, c));
}

BvFunction BvFunction::indicator(SpacePtr space, const VertexSet& set) {
  std::vector<double> values(space->num_vertices(), 0.0);
  for (Vertex v : set.members()) values.at(v) = 1.0;
  return BvFunction(std::move(space), std::move(values));
}

double BvFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double BvFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

VariationMeasure::VariationMeasure(const BvFunction& u) : space_(u.space_ptr()) {
  masses_.reserve(space_->num_edges());
  for (const Edge& e : space_->edges()) masses_.push_back(e.tv_weight * std::abs(u[e.a] - u[e.b]));
}

double VariationMeasure::total() const {
  double s = 0.0;
  for (double m : masses_) s += m;
  return s;
}

double VariationMeasure::restricted(const VertexSet& a) const {
  double s = 0.0;
  for (std::size_t e = 0; e < masses_.size(); ++e) {
    const Edge& ed = space_->edge(e);
    if (a.contains(ed.a) && a.contains(ed.b)) s += masses_[e];
  }
  return s;
}

double VariationMeasure::touching(const VertexSet& k) const {
  double s = 0.0;
  for (std::size_t e = 0; e < masses_.size(); ++e) {
    const Edge& ed = space_->edge(e);
    if (k.contains(ed.a) || k.contains(ed.b)) s += masses_[e];
  }
  return s;
}

double total_variation(const BvFunction& u) {
  double s = 0.0;
  for (const Edge& e : u.space().edges()) s += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  return s;
}

double total_variation(const BvFunction& u, const VertexSet& a) {
  require_same_space(u, a);
  double s = 0.0;
  for (const Edge& e : u.space().edges()) {
    if (a.contains(e.a) && a.contains(e.b)) s += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  }
  return s;
}

double closure_variation(const BvFunction& u, const VertexSet& k) {
  require_same_space(u, k);
  double s = 0.0;
  for (const Edge& e : u.space().edges()) {
    if (k.contains(e.a) || k.contains(e.b)) s += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  }
  return s;
}

double perimeter(const MetricMeasureSpace& space, const VertexSet& e, const VertexSet& a) {
  if (e.universe() != space.num_vertices() || a.universe() != space.num_vertices()) {
    throw Error(Errc::invalid_input, "vertex set does not match the space");
  }
  double s = 0.0;
  for (const Edge& ed : space.edges()) {
    if (a.contains(ed.a) && a.contains(ed.b) && e.contains(ed.a) != e.contains(ed.b)) s += ed.tv_weight;
  }
  return s;
}

double perimeter(const MetricMeasureSpace& space, const VertexSet& e) {
  return perimeter(space, e, VertexSet::all(space.num_vertices()));
}

SuperlevelSet superlevel_set(const BvFunction& u, double t) {
  SuperlevelSet s{t, VertexSet(u.size())};
  for (Vertex v = 0; v < u.size(); ++v) {
    if (u[v] > t) s.members.insert(v);
  }
  return s;
}

std::vector<double> breakpoints(const BvFunction& u) {
  std::vector<double> values(u.values().begin(), u.values().end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

double IdentityCheck::residual() const { return std::abs(lhs - rhs); }

IdentityCheck coarea_check(const BvFunction& u, const VertexSet& a) {
  require_same_space(u, a);
  const std::vector<double> levels = breakpoints(u);
  double rhs = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    rhs += (levels[i + 1] - levels[i]) * perimeter(u.space(), superlevel_set(u, levels[i]).members, a);
  }
  return {total_variation(u, a), rhs};
}

TruncationReport truncation_decomposition(const BvFunction& u, double t) {
  if (!std::isfinite(t)) throw Error(Errc::invalid_input, "truncation level must be finite");
  std::vector<double> lower(u.size());
  std::vector<double> upper(u.size());
  for (Vertex v = 0; v < u.size(); ++v) {
    lower[v] = std::min(u[v], t);
    upper[v] = std::max(u[v] - t, 0.0);
  }
  TruncationReport report{BvFunction(u.space_ptr(), std::move(lower)), BvFunction(u.space_ptr(), std::move(upper)),
                          0.0};
  const VariationMeasure whole(u);
  const VariationMeasure lo(report.lower);
  const VariationMeasure hi(report.upper);
  for (std::size_t e = 0; e < u.space().num_edges(); ++e) {
    report.max_edge_residual =
        std::max(report.max_edge_residual, std::abs(lo.edge_mass(e) + hi.edge_mass(e) - whole.edge_mass(e)));
  }
  return report;
}

IdentityCheck leibniz_bound_check(const BvFunction& u, const BvFunction& v, const BvFunction& eta,
                                  const VertexSet& a) {
  require_same_space(u, a);
  if (v.size() != u.size() || eta.size() != u.size()) {
    throw Error(Errc::invalid_input, "leibniz check needs functions on one space");
  }
  for (double e : eta.values()) {
    if (e < 0.0 || e > 1.0) throw Error(Errc::invalid_input, "mixing function must take values in [0, 1]");
  }
  std::vector<double> mixed(u.size());
  for (Vertex x = 0; x < u.size(); ++x) mixed[x] = eta[x] * u[x] + (1.0 - eta[x]) * v[x];
  const BvFunction h(u.space_ptr(), std::move(mixed));

  double rhs = 0.0;
  for (const Edge& e : u.space().edges()) {
    if (!a.contains(e.a) || !a.contains(e.b)) continue;
    const double eta_bar = 0.5 * (eta[e.a] + eta[e.b]);
    const double gap = 0.5 * (std::abs(u[e.a] - v[e.a]) + std::abs(u[e.b] - v[e.b]));
    rhs += e.tv_weight * (eta_bar * std::abs(u[e.a] - u[e.b]) + (1.0 - eta_bar) * std::abs(v[e.a] - v[e.b]) +
                          std::abs(eta[e.a] - eta[e.b]) * gap);
  }
  return {total_variation(h, a), rhs};
}

double local_lipschitz(const BvFunction& u, Vertex x) {
  const MetricMeasureSpace& space = u.space();
  double best = 0.0;
  for (const Incidence& inc : space.neighbors(x)) {
    best = std::max(best, std::abs(u[inc.other] - u[x]) / space.distance(x, inc.other));
  }
  return best;
}

OscillationProfile oscillation_profile(const BvFunction& u, Vertex x, std::span<const double> radii, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::invalid_input, "trim fraction must lie in (0, 1/2)");
  if (x >= u.size()) throw Error(Errc::invalid_input, "profile centre not in space");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw Error(Errc::invalid_input, "radii must be positive and increasing");
    }
  }
  OscillationProfile p{x, std::vector<double>(radii.begin(), radii.end()), {}, {}, delta};
  if (radii.empty()) return p;
  const MetricMeasureSpace& space = u.space();
  const std::vector<double> dist = space.distances_from(x, radii.back());
  std::vector<std::pair<double, double>> entries;
  for (double r : radii) {
    entries.clear();
    for (Vertex y = 0; y < dist.size(); ++y) {
      if (dist[y] < r) entries.emplace_back(u[y], space.mass(y));
    }
    const auto [upper, lower] = trimmed_envelope(entries, delta);
    p.trimmed_upper.push_back(upper);
    p.trimmed_lower.push_back(lower);
  }
  return p;
}

VertexSet jump_flags(const BvFunction& u, double radius, double threshold, double delta) {
  VertexSet flagged(u.size());
  const double radii[] = {radius};
  for (Vertex x = 0; x < u.size(); ++x) {
    if (oscillation_profile(u, x, radii, delta).oscillation(0) > threshold) flagged.insert(x);
  }
  return flagged;
}

double l1_distance(const BvFunction& u, const BvFunction& w, const VertexSet& a) {
  require_same_space(u, a);
  if (w.size() != u.size()) throw Error(Errc::invalid_input, "l1 distance needs functions on one space");
  double s = 0.0;
  for (Vertex v : a.members()) s += u.space().mass(v) * std::abs(u[v] - w[v]);
  return s;
}

}  // namespace bvgraph
