#include "bvgraph/mm_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "bvgraph/error.hpp"

namespace bvgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Dijkstra from `source`, stopping once the frontier reaches `cutoff`.
void shortest_paths(std::span<const std::size_t> offsets, std::span<const Incidence> adjacency,
                    std::span<const Edge> edges, Vertex source, double cutoff,
                    std::vector<double>& dist) {
  std::fill(dist.begin(), dist.end(), kInf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (d >= cutoff) break;
    for (std::size_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      const Incidence& inc = adjacency[k];
      const double nd = d + edges[inc.edge].length;
      if (nd < dist[inc.other]) {
        dist[inc.other] = nd;
        heap.emplace(nd, inc.other);
      }
    }
  }
}

}  // namespace

VertexSet VertexSet::all(std::size_t universe) {
  VertexSet s(universe);
  std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
  s.count_ = universe;
  return s;
}

VertexSet VertexSet::of(std::size_t universe, std::initializer_list<Vertex> members) {
  return of(universe, std::span<const Vertex>(members.begin(), members.size()));
}

VertexSet VertexSet::of(std::size_t universe, std::span<const Vertex> members) {
  VertexSet s(universe);
  for (Vertex v : members) s.insert(v);
  return s;
}

void VertexSet::insert(Vertex v) {
  if (v >= bits_.size()) {
    throw Error(Errc::invalid_input, "vertex " + std::to_string(v) + " outside set universe");
  }
  if (!bits_[v]) {
    bits_[v] = 1;
    ++count_;
  }
}

void VertexSet::erase(Vertex v) {
  if (v < bits_.size() && bits_[v]) {
    bits_[v] = 0;
    --count_;
  }
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(count_);
  for (Vertex v = 0; v < bits_.size(); ++v) {
    if (bits_[v]) out.push_back(v);
  }
  return out;
}

VertexSet VertexSet::complement() const {
  VertexSet s(bits_.size());
  for (Vertex v = 0; v < bits_.size(); ++v) {
    if (!bits_[v]) s.insert(v);
  }
  return s;
}

bool VertexSet::subset_of(const VertexSet& other) const {
  for (Vertex v = 0; v < bits_.size(); ++v) {
    if (bits_[v] && !other.contains(v)) return false;
  }
  return true;
}

MetricMeasureSpace::MetricMeasureSpace(std::vector<double> masses, std::vector<Edge> edges,
                                       std::vector<Point> positions)
    : masses_(std::move(masses)), edges_(std::move(edges)), positions_(std::move(positions)) {
  const std::size_t n = masses_.size();
  if (n == 0) throw Error(Errc::invalid_size, "space needs at least one vertex");
  if (!positions_.empty() && positions_.size() != n) {
    throw Error(Errc::invalid_input, "positions must be given for every vertex or none");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!positive_finite(masses_[v])) {
      throw Error(Errc::invalid_weight, "vertex " + std::to_string(v) + " has non-positive mass");
    }
    total_mass_ += masses_[v];
  }

  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    const std::string tag = "edge " + std::to_string(e);
    if (ed.a >= n || ed.b >= n) throw Error(Errc::invalid_input, tag + " references a missing vertex");
    if (ed.a == ed.b) throw Error(Errc::invalid_input, tag + " is a self loop");
    if (!positive_finite(ed.length)) throw Error(Errc::invalid_weight, tag + " has non-positive length");
    if (!positive_finite(ed.tv_weight)) throw Error(Errc::invalid_weight, tag + " has non-positive tv_weight");
    if (!seen.emplace(std::min(ed.a, ed.b), std::max(ed.a, ed.b)).second) {
      throw Error(Errc::invalid_input, tag + " duplicates an earlier edge");
    }
    ++degree[ed.a];
    ++degree[ed.b];
    max_tv_weight_ = std::max(max_tv_weight_, ed.tv_weight);
  }

  adjacency_offsets_.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) adjacency_offsets_[v + 1] = adjacency_offsets_[v] + degree[v];
  adjacency_.resize(adjacency_offsets_[n]);
  std::vector<std::size_t> fill(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[fill[edges_[e].a]++] = {edges_[e].b, e};
    adjacency_[fill[edges_[e].b]++] = {edges_[e].a, e};
  }

  // connectivity
  std::vector<std::uint8_t> reached(n, 0);
  std::vector<Vertex> stack{0};
  reached[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : neighbors(v)) {
      if (!reached[inc.other]) {
        reached[inc.other] = 1;
        ++count;
        stack.push_back(inc.other);
      }
    }
  }
  if (count != n) throw Error(Errc::invalid_input, "graph is not connected");

  if (n <= kMetricTableLimit) {
    metric_.resize(n * n);
    std::vector<double> row(n);
    for (Vertex s = 0; s < n; ++s) {
      shortest_paths(adjacency_offsets_, adjacency_, edges_, s, kInf, row);
      std::copy(row.begin(), row.end(), metric_.begin() + static_cast<std::ptrdiff_t>(s * n));
    }
    // path sums accumulated in opposite orders can differ in the last bit
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y = x + 1; y < n; ++y) {
        const double d = std::min(metric_[x * n + y], metric_[y * n + x]);
        metric_[x * n + y] = d;
        metric_[y * n + x] = d;
      }
    }
  }
}

double MetricMeasureSpace::mass_of(const VertexSet& set) const {
  double m = 0.0;
  for (Vertex v : set.members()) m += masses_.at(v);
  return m;
}

std::span<const Incidence> MetricMeasureSpace::neighbors(Vertex v) const {
  if (v >= num_vertices()) throw Error(Errc::invalid_input, "vertex " + std::to_string(v) + " not in space");
  return std::span<const Incidence>(adjacency_).subspan(adjacency_offsets_[v],
                                                         adjacency_offsets_[v + 1] - adjacency_offsets_[v]);
}

Vertex MetricMeasureSpace::nearest_vertex(Point p) const {
  if (positions_.empty()) throw Error(Errc::invalid_input, "space has no vertex positions");
  Vertex best = 0;
  double best_d = kInf;
  for (Vertex v = 0; v < positions_.size(); ++v) {
    const double dx = positions_[v].x - p.x;
    const double dy = positions_[v].y - p.y;
    const double d = dx * dx + dy * dy;
    // strict comparison keeps the lowest index on ties
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

double MetricMeasureSpace::distance(Vertex x, Vertex y) const {
  const std::size_t n = num_vertices();
  if (x >= n || y >= n) throw Error(Errc::invalid_input, "distance query outside space");
  if (!metric_.empty()) return metric_[x * n + y];
  std::vector<double> dist(n);
  shortest_paths(adjacency_offsets_, adjacency_, edges_, x, kInf, dist);
  return dist[y];
}

std::vector<double> MetricMeasureSpace::distances_from(Vertex x, double cutoff) const {
  const std::size_t n = num_vertices();
  if (x >= n) throw Error(Errc::invalid_input, "distance query outside space");
  std::vector<double> dist(n);
  if (!metric_.empty()) {
    std::copy_n(metric_.begin() + static_cast<std::ptrdiff_t>(x * n), n, dist.begin());
    return dist;
  }
  shortest_paths(adjacency_offsets_, adjacency_, edges_, x, cutoff, dist);
  return dist;
}

SpacePtr build_path(std::size_t n, double edge_length, double vertex_mass) {
  if (n < 2) throw Error(Errc::invalid_size, "path needs at least 2 vertices");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<Point> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = {static_cast<double>(i) * edge_length, 0.0};
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, edge_length, 1.0});
  return std::make_shared<const MetricMeasureSpace>(std::vector<double>(n, vertex_mass), std::move(edges),
                                                    std::move(positions));
}

SpacePtr build_weighted_grid(std::size_t nx, std::size_t ny, const std::function<double(Point)>& weight) {
  if (nx < 2 || ny < 2) throw Error(Errc::invalid_size, "grid needs nx, ny >= 2");
  const double hx = 1.0 / static_cast<double>(nx);
  const double hy = 1.0 / static_cast<double>(ny);
  const std::size_t n = nx * ny;
  std::vector<Point> positions(n);
  std::vector<double> w(n);
  std::vector<double> masses(n);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Vertex v = grid_vertex(nx, i, j);
      positions[v] = {(static_cast<double>(i) + 0.5) * hx, (static_cast<double>(j) + 0.5) * hy};
      w[v] = weight(positions[v]);
      if (!positive_finite(w[v])) {
        throw Error(Errc::invalid_weight, "grid weight is not positive at cell (" + std::to_string(i) + ", " +
                                              std::to_string(j) + ")");
      }
      masses[v] = w[v] * hx * hy;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Vertex v = grid_vertex(nx, i, j);
      if (i + 1 < nx) {
        const Vertex r = grid_vertex(nx, i + 1, j);
        edges.push_back({v, r, hx, 0.5 * (w[v] + w[r]) * hy});
      }
      if (j + 1 < ny) {
        const Vertex t = grid_vertex(nx, i, j + 1);
        edges.push_back({v, t, hy, 0.5 * (w[v] + w[t]) * hx});
      }
    }
  }
  return std::make_shared<const MetricMeasureSpace>(std::move(masses), std::move(edges), std::move(positions));
}

SpacePtr build_grid(std::size_t nx, std::size_t ny) {
  return build_weighted_grid(nx, ny, [](Point) { return 1.0; });
}

SpacePtr random_connected_graph(std::size_t n, double extra_edge_probability, std::mt19937_64& rng) {
  if (n < 2) throw Error(Errc::invalid_size, "random graph needs at least 2 vertices");
  std::uniform_real_distribution<double> value(0.5, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> masses(n);
  for (double& m : masses) m = value(rng);

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Edge> edges;
  std::set<std::pair<Vertex, Vertex>> present;
  auto add = [&](Vertex a, Vertex b) {
    if (present.emplace(std::min(a, b), std::max(a, b)).second) {
      const double len = value(rng);
      const double w = value(rng);
      edges.push_back({a, b, len, w});
    }
  };
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    add(order[k], order[pick(rng)]);
  }
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      if (!present.contains({a, b}) && coin(rng) < extra_edge_probability) add(a, b);
    }
  }
  return std::make_shared<const MetricMeasureSpace>(std::move(masses), std::move(edges));
}

Ball ball(const MetricMeasureSpace& space, Vertex x, double r) {
  if (x >= space.num_vertices()) throw Error(Errc::invalid_input, "ball centre not in space");
  if (!(r >= 0.0)) throw Error(Errc::invalid_input, "ball radius must be nonnegative");
  Ball b{x, r, VertexSet(space.num_vertices())};
  const std::vector<double> dist = space.distances_from(x, r);
  for (Vertex y = 0; y < dist.size(); ++y) {
    if (dist[y] < r) b.members.insert(y);
  }
  return b;
}

double doubling_constant(const MetricMeasureSpace& space, std::span<const double> radii) {
  if (radii.empty()) throw Error(Errc::invalid_input, "doubling constant needs at least one radius");
  for (double r : radii) {
    if (!positive_finite(r)) throw Error(Errc::invalid_input, "doubling radii must be positive");
  }
  double worst = 0.0;
  for (Vertex x = 0; x < space.num_vertices(); ++x) {
    for (double r : radii) {
      const double small = space.mass_of(ball(space, x, r).members);
      const double big = space.mass_of(ball(space, x, 2.0 * r).members);
      worst = std::max(worst, big / small);
    }
  }
  return worst;
}

double poincare_ratio(const MetricMeasureSpace& space, std::span<const double> u, Vertex x, double r,
                      double lambda) {
  if (u.size() != space.num_vertices()) throw Error(Errc::invalid_input, "function size does not match space");
  if (!positive_finite(r) || !(lambda >= 1.0)) throw Error(Errc::invalid_input, "need r > 0 and lambda >= 1");
  const VertexSet inner = ball(space, x, r).members;
  const VertexSet outer = ball(space, x, lambda * r).members;
  double mass = 0.0;
  double mean = 0.0;
  for (Vertex v : inner.members()) {
    mass += space.mass(v);
    mean += space.mass(v) * u[v];
  }
  mean /= mass;
  double oscillation = 0.0;
  for (Vertex v : inner.members()) oscillation += space.mass(v) * std::abs(u[v] - mean);
  oscillation /= mass;

  double variation = 0.0;
  for (const Edge& e : space.edges()) {
    if (outer.contains(e.a) && outer.contains(e.b)) variation += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  }
  const double rhs = r * variation / space.mass_of(outer);
  if (rhs == 0.0) return oscillation == 0.0 ? 0.0 : kInf;
  return oscillation / rhs;
}

ProductSpace::ProductSpace(SpacePtr base, double t_min, double t_max, std::size_t n_levels)
    : base_(std::move(base)) {
  if (!base_) throw Error(Errc::invalid_input, "product space needs a base space");
  if (!(std::isfinite(t_min) && std::isfinite(t_max) && t_min < t_max)) {
    throw Error(Errc::invalid_range, "product levels need finite t_min < t_max");
  }
  if (n_levels < 2) throw Error(Errc::invalid_size, "product space needs at least 2 levels");
  step_ = (t_max - t_min) / static_cast<double>(n_levels - 1);
  levels_.resize(n_levels);
  for (std::size_t i = 0; i < n_levels; ++i) levels_[i] = t_min + static_cast<double>(i) * step_;
  levels_.back() = t_max;
}

ProductVertex ProductSpace::vertex(std::size_t index) const {
  const std::size_t n = base_->num_vertices();
  if (index >= num_vertices()) throw Error(Errc::invalid_input, "product vertex out of range");
  return {index % n, index / n};
}

double ProductSpace::mass(std::size_t index) const { return base_->mass(vertex(index).base) * step_; }

double ProductSpace::total_mass() const {
  return base_->total_mass() * step_ * static_cast<double>(levels_.size());
}

double ProductSpace::cylinder_mass(const VertexSet& a, std::size_t i, std::size_t j) const {
  if (i > j || j > levels_.size()) throw Error(Errc::invalid_range, "cylinder levels out of range");
  return base_->mass_of(a) * step_ * static_cast<double>(j - i);
}

double ProductSpace::distance(ProductVertex p, ProductVertex q) const {
  return std::max(base_->distance(p.base, q.base), std::abs(level(p.level) - level(q.level)));
}

std::vector<ProductEdge> ProductSpace::edges() const {
  const std::size_t n = base_->num_vertices();
  const std::size_t levels = levels_.size();
  std::vector<ProductEdge> out;
  out.reserve(base_->num_edges() * levels + n * (levels - 1));
  for (std::size_t i = 0; i < levels; ++i) {
    for (std::size_t e = 0; e < base_->num_edges(); ++e) {
      const Edge& ed = base_->edge(e);
      out.push_back({index(ed.a, i), index(ed.b, i), horizontal_weight(e)});
    }
  }
  for (std::size_t i = 0; i + 1 < levels; ++i) {
    for (Vertex x = 0; x < n; ++x) out.push_back({index(x, i), index(x, i + 1), vertical_weight(x)});
  }
  return out;
}

ProductSpace build_product(SpacePtr base, double t_min, double t_max, std::size_t n_levels) {
  return ProductSpace(std::move(base), t_min, t_max, n_levels);
}

}  // namespace bvgraph
