#include "bvgraph/bundled.hpp"

#include <algorithm>
#include <cmath>

#include "bvgraph/error.hpp"

namespace bvgraph::bundled {

namespace {

bool on_ring(std::size_t n, std::size_t i, std::size_t j) { return i == 0 || j == 0 || i + 1 == n || j + 1 == n; }

}  // namespace

VertexSet grid_interior(std::size_t nx, std::size_t ny) {
  VertexSet omega(nx * ny);
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) omega.insert(grid_vertex(nx, i, j));
  }
  return omega;
}

DirichletProblem p4() {
  auto space = build_path(4);
  return DirichletProblem(BvFunction(space, {0.0, 0.0, 0.0, 1.0}), VertexSet::of(4, {1, 2}));
}

DirichletProblem half_plane(std::size_t n, const std::function<double(Point)>& weight) {
  auto space = build_weighted_grid(n, n, weight);
  std::vector<double> f(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (on_ring(n, i, j) && space->positions()[grid_vertex(n, i, j)].x > 0.5) f[grid_vertex(n, i, j)] = 1.0;
    }
  }
  return DirichletProblem(BvFunction(space, std::move(f)), grid_interior(n, n));
}

DirichletProblem half_plane(std::size_t n) {
  return half_plane(n, [](Point) { return 1.0; });
}

StabilityInstance stability_grid(std::size_t n, std::size_t k_max) {
  auto space = build_grid(n, n);
  std::vector<double> f(n * n, 0.0);
  std::vector<double> h(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vertex v = grid_vertex(n, i, j);
      if (on_ring(n, i, j) && space->positions()[v].y >= 0.5) f[v] = 1.0;
      h[v] = static_cast<double>((i + 2 * j) % 5) / 5.0;
    }
  }
  StabilityInstance inst{DirichletProblem(BvFunction(space, f), grid_interior(n, n)), BvFunction(space, h), {}};
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<double> fk = f;
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    for (std::size_t v = 0; v < fk.size(); ++v) fk[v] += scale * h[v];
    inst.data.emplace_back(space, std::move(fk));
  }
  return inst;
}

double channel_weight(Point p) { return 0.1 + 0.9 * std::min(1.0, std::abs(p.x - 0.5) / 0.1); }

JumpInstance channel_jump(std::span<const std::size_t> resolutions) {
  if (resolutions.empty()) throw Error(Errc::invalid_input, "jump instance needs at least one resolution");
  JumpInstance inst{grid_family(resolutions, channel_weight), {}, {0.5, 0.5}, {{0.25, 0.5}, {0.75, 0.5}}, {}, 1.0};
  for (const SpacePtr& space : inst.family.levels) {
    const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(space->num_vertices()))));
    std::vector<double> f(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (on_ring(n, i, j) && space->positions()[grid_vertex(n, i, j)].x > 0.5) f[grid_vertex(n, i, j)] = 1.0;
      }
    }
    inst.problems.emplace_back(BvFunction(space, std::move(f)), grid_interior(n, n));
  }
  const double finest = inst.family.cell_size.back();
  for (int j = 0; j < 5; ++j) inst.radii.push_back(1.5 * finest * std::ldexp(1.0, j));
  return inst;
}

JumpInstance channel_jump() {
  const std::size_t levels[] = {16, 32, 64, 128};
  return channel_jump(levels);
}

DirichletProblem ramp_grid(std::size_t n) {
  auto space = build_grid(n, n);
  std::vector<double> f(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (on_ring(n, i, j)) f[grid_vertex(n, i, j)] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
  }
  return DirichletProblem(BvFunction(space, std::move(f)), grid_interior(n, n));
}

DirichletProblem random_problem(std::size_t n, std::mt19937_64& rng, bool integer_data) {
  std::uniform_real_distribution<double> extra(0.1, 0.5);
  auto space = random_connected_graph(n, extra(rng), rng);
  VertexSet omega(n);
  std::bernoulli_distribution in_omega(0.6);
  for (Vertex v = 0; v < n; ++v) {
    if (in_omega(rng)) omega.insert(v);
  }
  if (omega.size() == n) omega.erase(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> f(n);
  std::uniform_int_distribution<int> small(0, 3);
  std::uniform_real_distribution<double> cont(-1.0, 1.0);
  for (double& x : f) x = integer_data ? small(rng) : cont(rng);
  return DirichletProblem(BvFunction(space, std::move(f)), std::move(omega));
}

std::vector<std::string> instance_names() { return {"p4", "path8", "half16", "half32", "stability16", "ramp6"}; }

DirichletProblem instance(const std::string& name) {
  if (name == "p4") return p4();
  if (name == "path8") {
    auto space = build_path(8);
    return DirichletProblem(BvFunction(space, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0}),
                            VertexSet::of(8, {1, 2, 3, 4, 5, 6}));
  }
  if (name == "half16") return half_plane(16);
  if (name == "half32") return half_plane(32);
  if (name == "stability16") return stability_grid(16, 0).problem;
  if (name == "ramp6") return ramp_grid(6);
  throw Error(Errc::invalid_input, "unknown bundled instance '" + name + "'");
}

}  // namespace bvgraph::bundled
