#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace bvgraph {

using Vertex = std::size_t;

/// Subset of the vertices {0, ..., universe-1} stored as a membership mask.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe, 0) {}

  static VertexSet all(std::size_t universe);
  static VertexSet of(std::size_t universe, std::initializer_list<Vertex> members);
  static VertexSet of(std::size_t universe, std::span<const Vertex> members);

  std::size_t universe() const noexcept { return bits_.size(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(Vertex v) const { return v < bits_.size() && bits_[v] != 0; }
  void insert(Vertex v);
  void erase(Vertex v);

  std::vector<Vertex> members() const;
  VertexSet complement() const;
  bool subset_of(const VertexSet& other) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

struct Edge {
  Vertex a;
  Vertex b;
  double length;
  double tv_weight;
};

struct Incidence {
  Vertex other;
  std::size_t edge;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Finite connected weighted graph standing in for a metric measure space:
/// vertex masses carry the measure, edge lengths generate the shortest-path
/// metric, and edge tv_weights are the coefficients of |u(a) - u(b)| in the
/// discrete total variation. Immutable after construction.
class MetricMeasureSpace {
 public:
  /// Validates positivity, finiteness, connectivity, and rejects self loops
  /// and duplicate edges. Positions are optional (empty or one per vertex).
  MetricMeasureSpace(std::vector<double> masses, std::vector<Edge> edges,
                     std::vector<Point> positions = {});

  std::size_t num_vertices() const noexcept { return masses_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  double mass(Vertex v) const { return masses_.at(v); }
  std::span<const double> masses() const noexcept { return masses_; }
  double total_mass() const noexcept { return total_mass_; }
  double mass_of(const VertexSet& set) const;

  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Incidence> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  double max_tv_weight() const noexcept { return max_tv_weight_; }

  bool has_positions() const noexcept { return !positions_.empty(); }
  std::span<const Point> positions() const noexcept { return positions_; }
  Vertex nearest_vertex(Point p) const;

  /// Shortest-path distance. Served from the all-pairs table on small
  /// spaces, otherwise by a single-source search.
  double distance(Vertex x, Vertex y) const;
  /// Single-source distances; entries at or beyond `cutoff` may be +inf.
  std::vector<double> distances_from(Vertex x, double cutoff = std::numeric_limits<double>::infinity()) const;
  bool has_metric_table() const noexcept { return !metric_.empty(); }

  /// Vertex count up to which the all-pairs table is built eagerly.
  static constexpr std::size_t kMetricTableLimit = 1024;

 private:
  std::vector<double> masses_;
  std::vector<Edge> edges_;
  std::vector<Point> positions_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<double> metric_;
  double total_mass_ = 0.0;
  double max_tv_weight_ = 0.0;
};

using SpacePtr = std::shared_ptr<const MetricMeasureSpace>;

struct Ball {
  Vertex center;
  double radius;
  VertexSet members;
};

/// Path v0 - v1 - ... - v(n-1) with uniform masses and lengths, tv_weight 1.
SpacePtr build_path(std::size_t n, double edge_length = 1.0, double vertex_mass = 1.0);

/// 4-neighbour grid of cell centres on the unit square. Cell (i, j) sits at
/// ((i + 1/2)/nx, (j + 1/2)/ny) with vertex index j*nx + i. Vertex mass is
/// weight * cell area; an edge has the cell side along it as length and the
/// mean endpoint weight times the transverse cell side as tv_weight.
SpacePtr build_weighted_grid(std::size_t nx, std::size_t ny,
                             const std::function<double(Point)>& weight);
SpacePtr build_grid(std::size_t nx, std::size_t ny);

inline Vertex grid_vertex(std::size_t nx, std::size_t i, std::size_t j) { return j * nx + i; }

/// Random connected graph: random spanning tree plus each remaining pair
/// with probability `extra_edge_probability`; masses, lengths and weights
/// drawn from [0.5, 2).
SpacePtr random_connected_graph(std::size_t n, double extra_edge_probability, std::mt19937_64& rng);

/// Open ball {y : d(x, y) < r}.
Ball ball(const MetricMeasureSpace& space, Vertex x, double r);

/// max over all centres and the given radii of mu(B(x, 2r)) / mu(B(x, r)).
double doubling_constant(const MetricMeasureSpace& space, std::span<const double> radii);

/// Ratio of the ball mean oscillation to r * ||Du||(lambda B) / mu(lambda B)
/// for one ball; the (1,1)-Poincare constant must dominate it. Returns 0
/// when both sides vanish and +inf when only the right-hand side does.
double poincare_ratio(const MetricMeasureSpace& space, std::span<const double> u, Vertex x,
                      double r, double lambda);

struct ProductVertex {
  Vertex base;
  std::size_t level;
};

struct ProductEdge {
  std::size_t a;
  std::size_t b;
  double tv_weight;
};

/// Base space times a uniform level grid t_0 < ... < t_{L-1} with the max
/// metric. Level i stands for the slab [t_i, t_i + dt), so each product
/// vertex carries mass mu_x * dt. Horizontal edges copy each base edge at
/// every level with weight w_e * dt; vertical edges join adjacent levels of
/// one column with weight mu_x.
class ProductSpace {
 public:
  ProductSpace(SpacePtr base, double t_min, double t_max, std::size_t n_levels);

  const MetricMeasureSpace& base() const noexcept { return *base_; }
  const SpacePtr& base_ptr() const noexcept { return base_; }

  std::size_t num_levels() const noexcept { return levels_.size(); }
  double level(std::size_t i) const { return levels_.at(i); }
  std::span<const double> levels() const noexcept { return levels_; }
  double step() const noexcept { return step_; }

  std::size_t num_vertices() const noexcept { return base_->num_vertices() * levels_.size(); }
  std::size_t index(Vertex x, std::size_t level) const { return level * base_->num_vertices() + x; }
  ProductVertex vertex(std::size_t index) const;

  double mass(std::size_t index) const;
  double total_mass() const;
  /// Measure of A x [t_i, t_j) for level indices i <= j.
  double cylinder_mass(const VertexSet& a, std::size_t i, std::size_t j) const;

  double distance(ProductVertex p, ProductVertex q) const;

  double horizontal_weight(std::size_t base_edge) const { return base_->edge(base_edge).tv_weight * step_; }
  double vertical_weight(Vertex x) const { return base_->mass(x); }
  std::vector<ProductEdge> edges() const;

 private:
  SpacePtr base_;
  std::vector<double> levels_;
  double step_;
};

ProductSpace build_product(SpacePtr base, double t_min, double t_max, std::size_t n_levels);

}  // namespace bvgraph
