#pragma once

#include <vector>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/mm_space.hpp"

namespace bvgraph {

/// Minimize TV over functions that agree with `boundary` off `omega`.
///
/// closure_omega is omega plus every vertex adjacent to it; the objective
/// region is the set of edges with at least one endpoint in omega, i.e. the
/// edges a perturbation supported in omega can change.
class DirichletProblem {
 public:
  /// Throws ill_posed when omega carries the whole mass (nothing is fixed)
  /// and invalid_input on mismatched sizes.
  DirichletProblem(BvFunction boundary, VertexSet omega);

  const MetricMeasureSpace& space() const noexcept { return boundary_.space(); }
  const SpacePtr& space_ptr() const noexcept { return boundary_.space_ptr(); }
  const BvFunction& boundary() const noexcept { return boundary_; }
  const VertexSet& omega() const noexcept { return omega_; }
  const VertexSet& closure_omega() const noexcept { return closure_; }
  /// closure_omega minus omega: the fixed vertices the solution can feel.
  const VertexSet& outer_boundary() const noexcept { return outer_; }
  const std::vector<std::size_t>& objective_edges() const noexcept { return objective_edges_; }

  /// Sorted distinct values of the datum on the outer boundary.
  std::vector<double> boundary_levels() const;
  /// Essential range of the datum on X \ omega.
  double datum_min() const;
  double datum_max() const;

  /// TV over the objective edges.
  double objective(const BvFunction& u) const;
  /// u agrees with the datum off omega, bit for bit.
  bool admissible(const BvFunction& u) const;

 private:
  BvFunction boundary_;
  VertexSet omega_;
  VertexSet closure_;
  VertexSet outer_;
  std::vector<std::size_t> objective_edges_;
};

}  // namespace bvgraph
