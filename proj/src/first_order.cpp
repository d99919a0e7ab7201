#include "bvgraph/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvgraph/error.hpp"

namespace bvgraph {

namespace {

struct EdgeTerm {
  Vertex a;
  Vertex b;
  double w;
  double m;
};

std::vector<EdgeTerm> collect_terms(const DirichletProblem& problem, EdgePenalty penalty,
                                    std::span<const double> edge_mass) {
  const MetricMeasureSpace& space = problem.space();
  if (penalty == EdgePenalty::area && edge_mass.size() != space.num_edges()) {
    throw Error(Errc::invalid_input, "area penalty needs one edge mass per edge");
  }
  std::vector<EdgeTerm> terms;
  terms.reserve(problem.objective_edges().size());
  for (std::size_t e : problem.objective_edges()) {
    const Edge& ed = space.edge(e);
    const double m = penalty == EdgePenalty::area ? edge_mass[e] : 0.0;
    if (penalty == EdgePenalty::area && !(m > 0.0)) throw Error(Errc::invalid_weight, "edge masses must be positive");
    terms.push_back({ed.a, ed.b, ed.tv_weight, m});
  }
  return terms;
}

double penalty_value(EdgePenalty penalty, const EdgeTerm& t, double z) {
  if (penalty == EdgePenalty::total_variation) return t.w * std::abs(z);
  return std::hypot(t.m, t.w * z);
}

// Conjugate phi*(y) on its domain |y| <= w.
double conjugate_value(EdgePenalty penalty, const EdgeTerm& t, double y) {
  if (penalty == EdgePenalty::total_variation) return 0.0;
  const double s = std::min(1.0, std::abs(y) / t.w);
  return -t.m * std::sqrt(std::max(0.0, 1.0 - s * s));
}

// argmin_y phi*(y) + (y - p)^2 / (2 sigma)
double conjugate_prox(EdgePenalty penalty, const EdgeTerm& t, double p, double sigma) {
  if (penalty == EdgePenalty::total_variation) return std::clamp(p, -t.w, t.w);
  // g(y) = m y / (w^2 sqrt(1 - y^2/w^2)) + (y - p)/sigma is increasing on (-w, w)
  auto g = [&](double y, double& dg) {
    const double s2 = std::max(1e-300, 1.0 - (y * y) / (t.w * t.w));
    const double root = std::sqrt(s2);
    dg = t.m / (t.w * t.w * root * s2) + 1.0 / sigma;
    return t.m * y / (t.w * t.w * root) + (y - p) / sigma;
  };
  double lo = -t.w;
  double hi = t.w;
  double y = std::clamp(p, -t.w * (1.0 - 1e-9), t.w * (1.0 - 1e-9));
  for (int it = 0; it < 100; ++it) {
    double dg = 0.0;
    const double val = g(y, dg);
    if (val > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    double next = y - val / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-15 * t.w) {
      y = next;
      break;
    }
    y = next;
  }
  return y;
}

}  // namespace

double difference_operator_norm(const DirichletProblem& problem, std::size_t iterations) {
  const MetricMeasureSpace& space = problem.space();
  const std::size_t n = space.num_vertices();
  const VertexSet& omega = problem.omega();
  std::vector<double> v(n, 0.0);
  std::vector<double> next(n, 0.0);
  for (Vertex x : omega.members()) v[x] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(x) + 0.3);
  double estimate = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& c : v) c /= norm;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t e : problem.objective_edges()) {
      const Edge& ed = space.edge(e);
      const double z = v[ed.a] - v[ed.b];
      next[ed.a] += z;
      next[ed.b] -= z;
    }
    estimate = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      if (!omega.contains(x)) next[x] = 0.0;
      estimate += v[x] * next[x];
    }
    std::swap(v, next);
  }
  return std::sqrt(std::max(estimate, 0.0));
}

FirstOrderResult minimize_edge_energy(const DirichletProblem& problem, EdgePenalty penalty,
                                      std::span<const double> edge_mass, const FirstOrderOptions& options) {
  if (!(options.tol > 0.0)) throw Error(Errc::invalid_input, "first-order tolerance must be positive");
  const MetricMeasureSpace& space = problem.space();
  const VertexSet& omega = problem.omega();
  const std::vector<EdgeTerm> terms = collect_terms(problem, penalty, edge_mass);
  const std::size_t n = space.num_vertices();

  FirstOrderResult result;
  result.u.assign(problem.boundary().values().begin(), problem.boundary().values().end());
  auto primal_value = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (const EdgeTerm& t : terms) s += penalty_value(penalty, t, x[t.a] - x[t.b]);
    return s;
  };

  const std::vector<double> levels = problem.boundary_levels();
  const std::vector<Vertex> free = omega.members();
  if (free.empty() || levels.empty()) {
    result.primal = primal_value(result.u);
    result.dual = result.primal;
    result.converged = true;
    return result;
  }
  const double lo = levels.front();
  const double hi = levels.back();
  if (levels.size() == 1) {
    for (Vertex x : free) result.u[x] = lo;
    result.primal = primal_value(result.u);
    result.dual = result.primal;
    result.converged = true;
    return result;
  }

  const double op_norm = 1.05 * difference_operator_norm(problem);
  double dual_scale = 0.0;
  for (const EdgeTerm& t : terms) dual_scale += t.w * t.w;
  dual_scale = std::sqrt(dual_scale);
  const double primal_scale = (hi - lo) * std::sqrt(static_cast<double>(free.size()));
  const double balance = primal_scale / dual_scale;
  const double tau = balance / op_norm;
  const double sigma = 1.0 / (balance * op_norm);

  std::vector<double> x = result.u;
  for (Vertex v : free) x[v] = std::clamp(x[v], lo, hi);
  std::vector<double> x_bar = x;
  std::vector<double> y(terms.size(), 0.0);
  std::vector<double> kty(n, 0.0);

  auto dual_value = [&]() {
    // -sum phi*(y) - G*(-K^T y), G the indicator of the feasible box
    double d = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) d -= conjugate_value(penalty, terms[k], y[k]);
    for (Vertex v = 0; v < n; ++v) {
      const double z = -kty[v];
      if (z == 0.0) continue;
      if (omega.contains(v)) {
        d -= z > 0.0 ? z * hi : z * lo;
      } else {
        d -= z * x[v];
      }
    }
    return d;
  };

  double best_primal = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  std::vector<double> best_x = x;
  const std::size_t check = std::max<std::size_t>(1, options.check_every);

  std::size_t it = 0;
  while (it < options.max_iters) {
    ++it;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const EdgeTerm& t = terms[k];
      y[k] = conjugate_prox(penalty, t, y[k] + sigma * (x_bar[t.a] - x_bar[t.b]), sigma);
    }
    std::fill(kty.begin(), kty.end(), 0.0);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      kty[terms[k].a] += y[k];
      kty[terms[k].b] -= y[k];
    }
    for (Vertex v : free) {
      const double updated = std::clamp(x[v] - tau * kty[v], lo, hi);
      x_bar[v] = 2.0 * updated - x[v];
      x[v] = updated;
    }

    if (it % check == 0 || it == options.max_iters) {
      const double p = primal_value(x);
      if (p < best_primal) {
        best_primal = p;
        best_x = x;
      }
      best_dual = std::max(best_dual, dual_value());
      if (best_primal - best_dual <= options.tol * (1.0 + std::abs(best_primal))) {
        result.converged = true;
        break;
      }
    }
  }
  result.u = std::move(best_x);
  result.primal = best_primal;
  result.dual = best_dual;
  result.gap = best_primal - best_dual;
  result.iterations = it;
  return result;
}

}  // namespace bvgraph
