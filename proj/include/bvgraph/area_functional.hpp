#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/dirichlet_problem.hpp"
#include "bvgraph/mm_space.hpp"

namespace bvgraph {

/// Edge-localized data for F(u) = sum_e sqrt(m_e^2 + (w_e du_e)^2).
///
/// Each vertex splits its mass equally among its incident edges, so
/// sum_e m_e equals the total mass. Growth constants describe the per-edge
/// sandwich growth_lower (m + t) <= sqrt(m^2 + t^2) <= growth_upper (m + t).
struct AreaFunctionalConfig {
  std::vector<double> edge_mass;
  double growth_lower = 0.5;
  double growth_upper = 1.0;
};

AreaFunctionalConfig area_config(const MetricMeasureSpace& space);

/// F(u, A): the edge terms for edges inside A, plus the mass shares that
/// vertices of A hand to edges leaving A (counted flat, as if du = 0 there).
/// Always F(u, A) >= mass(A).
double area_value(const BvFunction& u, const VertexSet& a, const AreaFunctionalConfig& cfg);

/// F(u, A) with both sandwich bounds accumulated term by term in the same
/// order, so lower <= value <= upper holds in floating point as it does per
/// edge. lower = growth_lower (mass(A) + TV(u, A)), upper likewise.
struct GrowthSandwich {
  double lower;
  double value;
  double upper;
  bool holds() const { return lower <= value && value <= upper; }
};
GrowthSandwich growth_sandwich(const BvFunction& u, const VertexSet& a, const AreaFunctionalConfig& cfg);

struct AreaMinimizer {
  BvFunction u;
  double energy;  ///< F summed over the objective edges
  double duality_gap;
  std::size_t iterations;
  bool converged;
};

/// Minimizes F over the objective edges of `p` with the datum fixed off
/// omega. On hitting max_iters the best iterate is returned with
/// converged = false.
AreaMinimizer solve_area_minimizer(const DirichletProblem& p, const AreaFunctionalConfig& cfg, double tol,
                                   std::size_t max_iters = 200000);

/// A set of product vertices. `build_subgraph` produces column-monotone sets;
/// perturbations of them need not be.
///
/// Perimeter convention: below level 0 every column counts as inside, above
/// the top level as outside. A full column therefore pays its vertical mass
/// at the top cap, and every monotone column pays exactly mu_x vertically.
class SubgraphSet {
 public:
  SubgraphSet(ProductSpace product, std::vector<std::uint8_t> members);

  const ProductSpace& product() const noexcept { return product_; }
  bool contains(std::size_t index) const { return members_.at(index) != 0; }
  bool contains(Vertex x, std::size_t level) const { return contains(product_.index(x, level)); }
  std::span<const std::uint8_t> members() const noexcept { return members_; }
  void flip(std::size_t index) { members_.at(index) ^= 1U; }
  /// Number of member levels in the column over x.
  std::size_t column_height(Vertex x) const;
  bool column_monotone() const;

 private:
  ProductSpace product_;
  std::vector<std::uint8_t> members_;
};

/// E_u = {(x, i) : t_i <= u(x)}. Throws invalid_range unless
/// t_0 <= min u and max u <= t_top.
SubgraphSet build_subgraph(const BvFunction& u, const ProductSpace& prod);

/// Levels t_min .. t_max with step (t_max - t_min) / (n_levels - 1) covering u.
ProductSpace subgraph_product(const BvFunction& u, std::size_t n_levels = 256);

/// Perimeter of E over the product edges inside U x levels, cap edges of
/// U's columns included.
double subgraph_perimeter(const SubgraphSet& e, const VertexSet& u_cols);

struct SubgraphPerimeterReport {
  double perimeter;             ///< direct scan of cut product edges
  double vertical_term;         ///< cut vertical and cap edges
  double quantized_variation;   ///< sum_e w_e * step * (levels crossed by edge e)
  double mass;                  ///< mu(U)
  double variation;             ///< TV(u, U)
  double area;                  ///< F(u, U)
  double quantization_bound;    ///< (edges inside U) * step * max w
  /// (i) perimeter = vertical + quantized, vertical = mu(U), and
  ///     |quantized - TV| <= bound
  bool decomposition_holds;
  /// (ii) perimeter <= mu(U) + TV(u, U) + bound
  bool variation_bound_holds;
  /// (iii) perimeter <= 2 F(u, U) + bound
  bool area_bound_holds;
  double identity_residual() const;
};

/// `tol` absorbs rounding only (relative); the quantization allowance is
/// explicit in the bound.
SubgraphPerimeterReport subgraph_perimeter_report(const BvFunction& u, const SubgraphSet& e, const VertexSet& u_cols,
                                                  const AreaFunctionalConfig& cfg, double tol = 1e-12);

/// P(E, K) / P(F, K) for F = E with `flips` toggled and K the product edges
/// touching a flipped vertex (0/0 = 1, x/0 = inf).
double flip_ratio(const SubgraphSet& e, std::span<const std::size_t> flips);

enum class ProbeFamily { column_height, segment_flip, box_bubble };

struct SubgraphProbeReport {
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t witness_sample = 0;
  ProbeFamily witness_family = ProbeFamily::column_height;
  std::vector<std::size_t> witness_flips;
};

/// Empirical lower bound for the quasiminimality constant of E: the largest
/// flip_ratio over random perturbations inside omega's columns, cycling
/// through column height changes, level segment flips and box bubbles.
SubgraphProbeReport subgraph_quasiminimality_probe(const SubgraphSet& e, const VertexSet& omega, std::size_t samples,
                                                   std::uint64_t seed);

}  // namespace bvgraph
