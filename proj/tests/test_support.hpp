#pragma once

#include <random>
#include <vector>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/dirichlet_problem.hpp"
#include "bvgraph/mm_space.hpp"

namespace testing_support {

inline std::vector<bool> mask_of(const bvgraph::VertexSet& s) {
  std::vector<bool> m(s.universe());
  for (bvgraph::Vertex v : s.members()) m[v] = true;
  return m;
}

inline bvgraph::BvFunction random_function(const bvgraph::SpacePtr& space, std::mt19937_64& rng, double lo = -2.0,
                                           double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(space->num_vertices());
  for (double& x : v) x = d(rng);
  return bvgraph::BvFunction(space, std::move(v));
}

/// Random Dirichlet instance on a random connected graph. Boundary data are
/// either small integers (many ties) or continuous values.
inline bvgraph::DirichletProblem random_problem(std::size_t n, std::mt19937_64& rng, bool integer_data) {
  std::uniform_real_distribution<double> extra(0.1, 0.5);
  auto space = bvgraph::random_connected_graph(n, extra(rng), rng);
  bvgraph::VertexSet omega(n);
  std::bernoulli_distribution in_omega(0.6);
  for (bvgraph::Vertex v = 0; v < n; ++v) {
    if (in_omega(rng)) omega.insert(v);
  }
  if (omega.size() == n) omega.erase(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> f(n);
  std::uniform_int_distribution<int> small(0, 3);
  std::uniform_real_distribution<double> cont(-1.0, 1.0);
  for (double& x : f) x = integer_data ? small(rng) : cont(rng);
  return bvgraph::DirichletProblem(bvgraph::BvFunction(space, std::move(f)), std::move(omega));
}

}  // namespace testing_support
