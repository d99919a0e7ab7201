#pragma once

// Exhaustive constrained-cut enumeration over subsets of omega. Test-only.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bvgraph/mm_space.hpp"

namespace oracle {

struct EnumeratedCut {
  double optimum;
  /// intersection of every optimal source side (the minimal min-cut)
  std::vector<bool> minimal_side;
  std::size_t optimal_count;
};

/// Enumerates every S within omega; the source side is S plus the fixed
/// vertices with f > t. Cost is counted over edges touching omega.
inline EnumeratedCut enumerate_cut(const bvgraph::MetricMeasureSpace& space, const std::vector<bool>& omega,
                                   const std::vector<double>& f, double t, double tie_tol = 1e-12) {
  const std::size_t n = space.num_vertices();
  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < n; ++v) {
    if (omega[v]) free.push_back(v);
  }
  std::vector<bool> side(n);
  std::vector<double> costs;
  const std::uint64_t count = std::uint64_t{1} << free.size();
  costs.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t v = 0; v < n; ++v) side[v] = !omega[v] && f[v] > t;
    for (std::size_t k = 0; k < free.size(); ++k) side[free[k]] = (mask >> k) & 1U;
    double cost = 0.0;
    for (const auto& e : space.edges()) {
      if ((omega[e.a] || omega[e.b]) && side[e.a] != side[e.b]) cost += e.tv_weight;
    }
    costs.push_back(cost);
  }
  const double best = *std::min_element(costs.begin(), costs.end());
  EnumeratedCut out{best, std::vector<bool>(n), 0};
  for (std::size_t v = 0; v < n; ++v) out.minimal_side[v] = !omega[v] && f[v] > t;
  std::vector<bool> meet(free.size(), true);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (costs[mask] > best + tie_tol * (1.0 + best)) continue;
    ++out.optimal_count;
    for (std::size_t k = 0; k < free.size(); ++k) meet[k] = meet[k] && ((mask >> k) & 1U);
  }
  for (std::size_t k = 0; k < free.size(); ++k) out.minimal_side[free[k]] = meet[k];
  return out;
}

/// Optimal Dirichlet objective by layering enumerated cuts over the sorted
/// distinct datum values on the vertices adjacent to omega.
inline double least_gradient_by_enumeration(const bvgraph::MetricMeasureSpace& space,
                                            const std::vector<bool>& omega, const std::vector<double>& f) {
  std::vector<double> levels;
  for (const auto& e : space.edges()) {
    if (omega[e.a] && !omega[e.b]) levels.push_back(f[e.b]);
    if (omega[e.b] && !omega[e.a]) levels.push_back(f[e.a]);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    total += (levels[i + 1] - levels[i]) * enumerate_cut(space, omega, f, 0.5 * (levels[i] + levels[i + 1])).optimum;
  }
  return total;
}

}  // namespace oracle
