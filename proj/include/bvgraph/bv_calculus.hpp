#pragma once

#include <span>
#include <vector>

#include "bvgraph/mm_space.hpp"

namespace bvgraph {

/// Finite real values on every vertex of a space.
class BvFunction {
 public:
  BvFunction(SpacePtr space, std::vector<double> values);

  static BvFunction constant(SpacePtr space, double c);
  static BvFunction indicator(SpacePtr space, const VertexSet& set);

  const MetricMeasureSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](Vertex v) const { return values_[v]; }
  std::size_t size() const noexcept { return values_.size(); }

  double min() const;
  double max() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// ||Du|| as an edge-supported measure: mass(e) = w_e |u(a) - u(b)|.
class VariationMeasure {
 public:
  explicit VariationMeasure(const BvFunction& u);

  double edge_mass(std::size_t e) const { return masses_.at(e); }
  std::span<const double> edge_masses() const noexcept { return masses_; }
  double total() const;
  /// Sum over edges with both endpoints in A.
  double restricted(const VertexSet& a) const;
  /// Sum over edges with at least one endpoint in K.
  double touching(const VertexSet& k) const;

 private:
  SpacePtr space_;
  std::vector<double> masses_;
};

double total_variation(const BvFunction& u);
/// ||Du||(A): edges count when both endpoints lie in A.
double total_variation(const BvFunction& u, const VertexSet& a);
/// TV over every edge touching K; the discrete stand-in for ||Du||(closure K),
/// i.e. exactly the edges a perturbation supported in K can change.
double closure_variation(const BvFunction& u, const VertexSet& k);

double perimeter(const MetricMeasureSpace& space, const VertexSet& e, const VertexSet& a);
double perimeter(const MetricMeasureSpace& space, const VertexSet& e);

struct SuperlevelSet {
  double threshold;
  VertexSet members;
};

/// {x : u(x) > t}
SuperlevelSet superlevel_set(const BvFunction& u, double t);
/// Sorted distinct values of u.
std::vector<double> breakpoints(const BvFunction& u);

struct IdentityCheck {
  double lhs;
  double rhs;
  double residual() const;
};

/// lhs = ||Du||(A); rhs = sum over consecutive breakpoints t_i < t_{i+1} of
/// (t_{i+1} - t_i) P({u > t_i}, A). The layer integral is piecewise constant,
/// so both sides agree up to rounding.
IdentityCheck coarea_check(const BvFunction& u, const VertexSet& a);

struct TruncationReport {
  BvFunction lower;  ///< min{u, t}
  BvFunction upper;  ///< (u - t)_+
  double max_edge_residual;
};

TruncationReport truncation_decomposition(const BvFunction& u, double t);

/// lhs = ||D(eta u + (1 - eta) v)||(A). rhs sums, per edge inside A,
/// w_e [avg(eta) |du| + (1 - avg(eta)) |dv| + |d eta| avg(|u - v|)], which
/// bounds each edge term of the left side. Requires 0 <= eta <= 1.
IdentityCheck leibniz_bound_check(const BvFunction& u, const BvFunction& v, const BvFunction& eta,
                                  const VertexSet& a);

/// max over neighbours y of |u(y) - u(x)| / d(x, y); 0 for an isolated vertex.
double local_lipschitz(const BvFunction& u, Vertex x);

/// Scale-indexed approximate upper/lower limits: per radius, the
/// mu-weighted (1 - delta)-quantile envelope of u over B(x, r).
struct OscillationProfile {
  Vertex center;
  std::vector<double> radii;
  std::vector<double> trimmed_upper;
  std::vector<double> trimmed_lower;
  double delta;

  double oscillation(std::size_t i) const { return trimmed_upper.at(i) - trimmed_lower.at(i); }
};

inline constexpr double kDefaultTrim = 0.05;

OscillationProfile oscillation_profile(const BvFunction& u, Vertex x, std::span<const double> radii,
                                       double delta = kDefaultTrim);

/// Vertices whose trimmed oscillation at `radius` exceeds `threshold`.
VertexSet jump_flags(const BvFunction& u, double radius, double threshold, double delta = kDefaultTrim);

/// sum over A of mu_v |u(v) - w(v)|
double l1_distance(const BvFunction& u, const BvFunction& w, const VertexSet& a);

}  // namespace bvgraph
