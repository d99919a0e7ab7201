#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/dirichlet_problem.hpp"

namespace bvgraph {

struct StackLevel {
  double threshold;
  double gap;          ///< distance to the next boundary level
  VertexSet superlevel;
  double cut_value;    ///< perimeter of `superlevel` over the objective edges
  double max_flow;     ///< optimum of the constrained cut problem
};

struct CertificateEntry {
  double key;      ///< threshold, or support index
  double value;    ///< attained value (cut or ||Du||(K))
  double optimum;  ///< independently computed optimum
  double gap() const { return value - optimum; }
};

/// Zero gaps certify optimality; gaps are reported raw so rounding noise
/// around zero stays visible.
struct MinimalityCertificate {
  std::vector<CertificateEntry> entries;
  double max_gap() const;
  bool passed(double tol) const;
};

enum class SolverMethod { threshold_stack, first_order };

struct LeastGradientSolution {
  DirichletProblem problem;
  BvFunction u;
  double objective;
  std::vector<StackLevel> stack;
  MinimalityCertificate certificate;
  SolverMethod method;
  std::size_t iterations = 0;
  double duality_gap = 0.0;
  bool converged = true;
};

/// Minimum-weight cut over the objective edges separating the fixed vertices
/// with datum > t from those with datum <= t. Returns the cut optimum and
/// the minimal minimizing superlevel set: the omega vertices reachable from
/// the source in the final residual network, plus every fixed vertex whose
/// datum exceeds t.
struct ConstrainedCut {
  double optimum;
  VertexSet minimal_side;
};
ConstrainedCut constrained_min_cut(const DirichletProblem& problem, double t);

/// Perimeter of E over the problem's objective edges.
double objective_perimeter(const DirichletProblem& problem, const VertexSet& e);

/// Solves the least-gradient Dirichlet problem exactly, one minimal min-cut
/// per midpoint between consecutive outer-boundary levels, and rebuilds u
/// by the layer-cake sum. The result is the pointwise smallest minimizer.
LeastGradientSolution solve_threshold_stack(const DirichletProblem& problem);

/// Cross-check solver: primal-dual iteration on the same objective. A run
/// that hits max_iters returns its best iterate with converged = false.
LeastGradientSolution solve_first_order(const DirichletProblem& problem, double tol, std::size_t max_iters);

/// For each support K (a subset of omega) compares ||Du|| over the edges
/// touching K against the best value reachable by changing u on K alone.
MinimalityCertificate verify_least_gradient(const BvFunction& u, const VertexSet& omega,
                                            std::span<const VertexSet> supports);

struct SuperlevelCheck {
  double threshold;
  double perimeter;
  double min_cut;
  bool minimal;
};

/// Checks that every superlevel set {u > t} of the solution is a minimum
/// constrained cut, at the stack thresholds and `intermediate` evenly spaced
/// thresholds inside each gap.
std::vector<SuperlevelCheck> verify_superlevel_minimality(const LeastGradientSolution& solution,
                                                          std::size_t intermediate = 3, double tol = 1e-9);

struct QuasiMinimalityReport {
  double max_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t witness_sample = 0;
  std::vector<Vertex> witness_support;
};

/// Empirical lower bound for the quasi-minimality constant Q: the largest
/// observed ||Du||(K) / ||D(u + g)||(K) over random perturbations g
/// supported on random K inside omega (0/0 counts as 1, x/0 as +inf).
QuasiMinimalityReport quasi_minimality_ratio(const BvFunction& u, const VertexSet& omega, std::size_t samples,
                                             std::uint64_t seed);

}  // namespace bvgraph
