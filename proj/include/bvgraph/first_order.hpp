#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bvgraph/dirichlet_problem.hpp"

namespace bvgraph {

/// Edge penalty phi_e applied to the difference z = u(a) - u(b):
///   total_variation: w_e |z|
///   area:            sqrt(m_e^2 + (w_e z)^2)
enum class EdgePenalty { total_variation, area };

struct FirstOrderOptions {
  double tol = 1e-6;
  std::size_t max_iters = 200000;
  std::size_t check_every = 20;
};

struct FirstOrderResult {
  std::vector<double> u;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Primal-dual (Chambolle-Pock) minimization of sum_e phi_e(u(a) - u(b))
/// over the problem's objective edges, with u fixed to the datum off omega
/// and boxed to the outer-boundary range on omega (the box never cuts off a
/// minimizer: truncating to it does not increase any edge term).
///
/// Steps come from a power-iteration estimate of the difference operator
/// norm. Stops once (best primal) - (best dual) <= tol (1 + |primal|).
/// `edge_mass` holds m_e per space edge and is only read for the area penalty.
FirstOrderResult minimize_edge_energy(const DirichletProblem& problem, EdgePenalty penalty,
                                      std::span<const double> edge_mass, const FirstOrderOptions& options);

/// Largest singular value of the objective-edge difference operator
/// restricted to omega's coordinates.
double difference_operator_norm(const DirichletProblem& problem, std::size_t iterations = 100);

}  // namespace bvgraph
