#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/dirichlet_problem.hpp"
#include "bvgraph/least_gradient.hpp"
#include "bvgraph/mm_space.hpp"

namespace bvgraph {

struct MaxPrincipleReport {
  double lower;  ///< min of the datum off omega
  double upper;  ///< max of the datum off omega
  double min_value;
  double max_value;
  std::vector<Vertex> violations;
  bool holds() const { return violations.empty(); }
};

/// Exact comparison of u on omega against the datum's range off omega.
MaxPrincipleReport max_principle_check(const DirichletProblem& p, const BvFunction& u);
MaxPrincipleReport max_principle_check(const LeastGradientSolution& sol);

struct StabilityEntry {
  std::size_t index;
  double l1_distance;       ///< ||u_k - limit||_{L1(omega)}
  double objective;         ///< objective of u_k (for its own datum)
  double certificate_gap;   ///< max gap of u_k's minimality certificate
  double objective_drift;   ///< |objective_k - objective(limit)|
  double drift_bound;       ///< TV of f_k - f over the objective edges
};

struct StabilityReport {
  std::vector<StabilityEntry> entries;
  bool sequence_converges = false;
  /// Certificate of the limit over omega; empty when no claim is made.
  std::optional<MinimalityCertificate> limit_certificate;
  double limit_gap() const { return limit_certificate ? limit_certificate->max_gap() : 0.0; }
};

/// Distances d_0, d_1, ... decay to zero when they never increase and the
/// last is at most half the first (or all vanish).
bool decays_to_zero(std::span<const double> distances, double slack = 1e-12);

/// Solves the problem for each datum f_k and compares against the solution
/// for p's datum. Throws invalid_sequence unless ||f_k - f||_{L1} +
/// ||D(f_k - f)|| decays to zero.
StabilityReport dirichlet_stability_experiment(const DirichletProblem& p, std::span<const BvFunction> data);

/// Throws invalid_input if a member fails certification over omega at
/// `tol`. A sequence without an L1 limit is reported with
/// sequence_converges = false and no certificate for the limit.
StabilityReport local_stability_experiment(std::span<const BvFunction> sequence, const BvFunction& limit,
                                           const VertexSet& omega, double tol = 1e-9);

struct PointwiseReport {
  std::vector<bool> member_certified;
  bool pointwise_converges = false;
  std::vector<SuperlevelCheck> checks;
  bool all_minimal() const;
};

/// Certifies {limit > t} as a minimum constrained cut for thresholds placed
/// between consecutive values of the limit (midpoints plus `intermediate`
/// interior fractions). Members are certified too but failures are only
/// recorded.
PointwiseReport pointwise_stability_experiment(std::span<const BvFunction> sequence, const BvFunction& limit,
                                               const VertexSet& omega, std::size_t intermediate = 3,
                                               double tol = 1e-9);

struct DeGiorgiPair {
  Vertex x;
  double r;
  double big_r;
};

struct DeGiorgiEntry {
  DeGiorgiPair pair;
  double numerator;    ///< ||Du||(B(x, r))
  double denominator;  ///< integral of |u| over B(x, R)
  double ratio;        ///< numerator (R - r) / denominator
  bool applicable;     ///< false when the denominator vanishes under a positive numerator
};

struct DeGiorgiReport {
  std::vector<DeGiorgiEntry> entries;
  double max_constant = 0.0;
  std::size_t inapplicable = 0;
};

/// Throws invalid_pair unless 0 < r < R and B(x, R) lies in the closure of
/// omega.
DeGiorgiReport de_giorgi_scan(const BvFunction& u, const VertexSet& omega, std::span<const DeGiorgiPair> pairs);

/// Spaces discretizing one rectangle, coarse to fine, with the cell size of
/// each level.
struct RefinementFamily {
  std::vector<SpacePtr> levels;
  std::vector<std::size_t> resolution;
  std::vector<double> cell_size;
  Point lower{0.0, 0.0};
  Point upper{1.0, 1.0};

  /// Nearest vertex to p at `level`; invalid_probe outside the rectangle.
  Vertex locate(std::size_t level, Point p) const;
};

/// n x n weighted grids on the unit square for each n.
RefinementFamily grid_family(std::span<const std::size_t> resolutions, const std::function<double(Point)>& weight);

struct OscillationRow {
  std::size_t level;
  std::size_t resolution;
  double radius;
  double oscillation;
};

struct ContinuityTable {
  Point probe;
  std::vector<Vertex> probe_vertex;  ///< per level
  std::vector<OscillationRow> rows;
  double jump_threshold;
  bool flagged_jump;  ///< detector verdict at the finest level
  /// Rows of one level, in radius order.
  std::vector<OscillationRow> level_rows(std::size_t level) const;
};

/// Trimmed oscillation of u_n around the probe, per level and radius.
/// Radii below 1.5 cells of a level are skipped for that level. The probe
/// is classified with the trimmed detector at the finest level, smallest
/// admissible radius and threshold `jump_threshold`.
ContinuityTable continuity_table(const RefinementFamily& family, std::span<const BvFunction> solutions, Point probe,
                                 std::span<const double> radii, double jump_threshold,
                                 double delta = kDefaultTrim);

/// Solves each level's problem with the threshold stack, then tabulates.
/// The jump threshold is half of the finest level's datum range.
ContinuityTable continuity_experiment(const RefinementFamily& family, std::span<const DirichletProblem> problems,
                                      Point probe, std::span<const double> radii);

struct PorosityEntry {
  double radius;
  double rho_max;  ///< largest distance from E over z in B(x, r/2)
  Vertex witness;
  double ratio;    ///< r / (2 rho_max); infinite when rho_max = 0
};

/// Throws invalid_probe unless x or a neighbour of x lies in E and x or a
/// neighbour lies outside E.
std::vector<PorosityEntry> porosity_probe(const MetricMeasureSpace& space, const VertexSet& e, Vertex x,
                                          std::span<const double> radii);

}  // namespace bvgraph
