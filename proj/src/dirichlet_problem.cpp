#include "bvgraph/dirichlet_problem.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bvgraph/error.hpp"

namespace bvgraph {

DirichletProblem::DirichletProblem(BvFunction boundary, VertexSet omega)
    : boundary_(std::move(boundary)), omega_(std::move(omega)) {
  const MetricMeasureSpace& sp = space();
  const std::size_t n = sp.num_vertices();
  if (omega_.universe() != n) throw Error(Errc::invalid_input, "omega does not match the space");
  if (omega_.size() == n) {
    throw Error(Errc::ill_posed, "no boundary mass: omega covers every vertex, so nothing fixes the solution");
  }
  closure_ = omega_;
  outer_ = VertexSet(n);
  for (std::size_t e = 0; e < sp.num_edges(); ++e) {
    const Edge& ed = sp.edge(e);
    const bool ia = omega_.contains(ed.a);
    const bool ib = omega_.contains(ed.b);
    if (!ia && !ib) continue;
    objective_edges_.push_back(e);
    if (!ia) outer_.insert(ed.a);
    if (!ib) outer_.insert(ed.b);
  }
  for (Vertex v : outer_.members()) closure_.insert(v);
}

std::vector<double> DirichletProblem::boundary_levels() const {
  std::vector<double> levels;
  for (Vertex v : outer_.members()) levels.push_back(boundary_[v]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

double DirichletProblem::datum_min() const {
  double m = INFINITY;
  for (Vertex v = 0; v < boundary_.size(); ++v) {
    if (!omega_.contains(v)) m = std::min(m, boundary_[v]);
  }
  return m;
}

double DirichletProblem::datum_max() const {
  double m = -INFINITY;
  for (Vertex v = 0; v < boundary_.size(); ++v) {
    if (!omega_.contains(v)) m = std::max(m, boundary_[v]);
  }
  return m;
}

double DirichletProblem::objective(const BvFunction& u) const {
  if (u.size() != boundary_.size()) throw Error(Errc::invalid_input, "function does not match the problem");
  const MetricMeasureSpace& sp = space();
  double s = 0.0;
  for (std::size_t e : objective_edges_) {
    const Edge& ed = sp.edge(e);
    s += ed.tv_weight * std::abs(u[ed.a] - u[ed.b]);
  }
  return s;
}

bool DirichletProblem::admissible(const BvFunction& u) const {
  if (u.size() != boundary_.size()) return false;
  for (Vertex v = 0; v < u.size(); ++v) {
    if (!omega_.contains(v) && u[v] != boundary_[v]) return false;
  }
  return true;
}

}  // namespace bvgraph
