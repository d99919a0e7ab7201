#include <doctest.h>

#include <cmath>
#include <random>

#include "bvgraph/bv_calculus.hpp"
#include "bvgraph/error.hpp"
#include "test_support.hpp"

using namespace bvgraph;
using testing_support::random_function;

namespace {

// TV straight from the edge list, no library helpers.
double edge_sum(const MetricMeasureSpace& g, std::span<const double> u, const std::vector<bool>& in_a) {
  double s = 0.0;
  for (const Edge& e : g.edges()) {
    if (in_a[e.a] && in_a[e.b]) s += e.tv_weight * std::abs(u[e.a] - u[e.b]);
  }
  return s;
}

}  // namespace

TEST_CASE("total variation examples") {
  auto p2 = build_path(2);
  CHECK(total_variation(BvFunction(p2, {0.0, 1.0})) == 1.0);
  CHECK(total_variation(BvFunction::constant(p2, 3.0)) == 0.0);

  auto p4 = build_path(4);
  CHECK(total_variation(BvFunction(p4, {0.0, 1.0, 0.0, 1.0})) == 3.0);
  CHECK(total_variation(BvFunction(p4, {0.0, 1.0, 0.0, 1.0}), VertexSet::of(4, {0, 1})) == 1.0);
  CHECK(total_variation(BvFunction(p4, {0.0, 1.0, 0.0, 1.0}), VertexSet::of(4, {0, 2})) == 0.0);

  CHECK_THROWS_AS(BvFunction(p2, {0.0}), Error);
  CHECK_THROWS_AS(BvFunction(p2, {0.0, NAN}), Error);
}

TEST_CASE("closure variation counts edges touching the set") {
  auto p4 = build_path(4);
  BvFunction u(p4, {0.0, 1.0, 0.0, 1.0});
  CHECK(closure_variation(u, VertexSet::of(4, {1})) == 2.0);
  CHECK(closure_variation(u, VertexSet::of(4, {1, 2})) == 3.0);
  VariationMeasure m(u);
  CHECK(m.total() == 3.0);
  CHECK(m.touching(VertexSet::of(4, {0})) == 1.0);
}

TEST_CASE("perimeter of a half grid") {
  auto g = build_grid(4, 4);
  VertexSet left(16);
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 2; ++i) left.insert(grid_vertex(4, i, j));
  }
  // four horizontal crossing edges of tv weight hy = 1/4
  CHECK(perimeter(*g, left) == doctest::Approx(1.0));
  CHECK(perimeter(*g, VertexSet::all(16)) == 0.0);
  CHECK(perimeter(*g, VertexSet(16)) == 0.0);
}

TEST_CASE("superlevel sets and breakpoints") {
  auto p4 = build_path(4);
  BvFunction u(p4, {0.0, 2.0, 2.0, -1.0});
  CHECK(superlevel_set(u, 0.0).members == VertexSet::of(4, {1, 2}));
  CHECK(superlevel_set(u, 2.0).members.empty());
  CHECK(breakpoints(u) == std::vector<double>{-1.0, 0.0, 2.0});
}

TEST_CASE("coarea identity on random functions") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected_graph(2 + rng() % 40, 0.2, rng);
    BvFunction u = trial % 2 ? random_function(g, rng) : [&] {
      // many ties
      std::vector<double> v(g->num_vertices());
      for (double& x : v) x = static_cast<double>(rng() % 4);
      return BvFunction(g, std::move(v));
    }();
    std::vector<bool> in_a(g->num_vertices());
    VertexSet a(g->num_vertices());
    for (Vertex x = 0; x < g->num_vertices(); ++x) {
      if (rng() % 3 != 0) {
        a.insert(x);
        in_a[x] = true;
      }
    }
    const IdentityCheck c = coarea_check(u, a);
    CHECK(c.lhs == doctest::Approx(edge_sum(*g, u.values(), in_a)).epsilon(1e-12));
    CHECK(c.residual() <= 1e-10 * (1.0 + c.lhs));
  }
}

TEST_CASE("coarea step example") {
  auto p2 = build_path(2);
  const IdentityCheck c = coarea_check(BvFunction(p2, {0.0, 1.0}), VertexSet::all(2));
  CHECK(c.lhs == 1.0);
  CHECK(c.rhs == 1.0);
}

TEST_CASE("truncation splits total variation") {
  auto p3 = build_path(3);
  const TruncationReport r = truncation_decomposition(BvFunction(p3, {0.0, 2.0, 1.0}), 1.0);
  CHECK(std::vector<double>(r.lower.values().begin(), r.lower.values().end()) == std::vector<double>{0.0, 1.0, 1.0});
  CHECK(std::vector<double>(r.upper.values().begin(), r.upper.values().end()) == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(total_variation(r.lower) + total_variation(r.upper) == 3.0);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected_graph(2 + rng() % 30, 0.3, rng);
    BvFunction u = random_function(g, rng);
    const double t = std::uniform_real_distribution<double>(-2.5, 2.5)(rng);
    const TruncationReport tr = truncation_decomposition(u, t);
    const double lhs = total_variation(u);
    CHECK(std::abs(lhs - total_variation(tr.lower) - total_variation(tr.upper)) <= 1e-12 * (1.0 + lhs));
    CHECK(tr.max_edge_residual <= 1e-12 * (1.0 + lhs));
  }
}

TEST_CASE("leibniz bound") {
  auto p2 = build_path(2);
  const IdentityCheck same =
      leibniz_bound_check(BvFunction(p2, {0.0, 1.0}), BvFunction(p2, {0.0, 1.0}), BvFunction::constant(p2, 0.5),
                          VertexSet::all(2));
  CHECK(same.lhs == doctest::Approx(1.0));
  CHECK(same.lhs <= same.rhs);

  const IdentityCheck eta_one = leibniz_bound_check(BvFunction(p2, {0.0, 3.0}), BvFunction(p2, {1.0, -1.0}),
                                                    BvFunction::constant(p2, 1.0), VertexSet::all(2));
  CHECK(eta_one.lhs == doctest::Approx(3.0));

  CHECK_THROWS_AS(leibniz_bound_check(BvFunction(p2, {0.0, 1.0}), BvFunction(p2, {0.0, 1.0}),
                                      BvFunction(p2, {0.0, 1.5}), VertexSet::all(2)),
                  Error);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = random_connected_graph(2 + rng() % 30, 0.3, rng);
    const BvFunction u = random_function(g, rng);
    const BvFunction v = random_function(g, rng);
    const BvFunction eta = random_function(g, rng, 0.0, 1.0);
    const IdentityCheck c = leibniz_bound_check(u, v, eta, VertexSet::all(g->num_vertices()));
    CHECK(c.lhs <= c.rhs + 1e-12 * (1.0 + c.rhs));
  }
}

TEST_CASE("local lipschitz of a distance function") {
  std::mt19937_64 rng(4);
  auto g = random_connected_graph(30, 0.2, rng);
  std::vector<double> d(30);
  for (Vertex x = 0; x < 30; ++x) d[x] = g->distance(0, x);
  const BvFunction u(g, d);
  for (Vertex x = 1; x < 30; ++x) {
    CHECK(local_lipschitz(u, x) <= 1.0 + 1e-12);
    CHECK(local_lipschitz(u, x) == doctest::Approx(1.0));  // the predecessor on a shortest path
  }
}

TEST_CASE("oscillation profile of a step") {
  const std::size_t n = 32;
  auto g = build_grid(n, n);
  VertexSet right(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = n / 2; i < n; ++i) right.insert(grid_vertex(n, i, j));
  }
  const BvFunction u = BvFunction::indicator(g, right);
  const double h = 1.0 / static_cast<double>(n);

  SUBCASE("interface vertex sees both values at every radius") {
    const double radii[] = {1.5 * h, 3.0 * h, 6.0 * h};
    const OscillationProfile p = oscillation_profile(u, grid_vertex(n, n / 2, n / 2), radii);
    for (std::size_t i = 0; i < 3; ++i) CHECK(p.oscillation(i) == 1.0);
  }
  SUBCASE("far vertex sees none") {
    const double radii[] = {1.5 * h, 3.0 * h};
    const OscillationProfile p = oscillation_profile(u, grid_vertex(n, 2, 5), radii);
    for (std::size_t i = 0; i < 2; ++i) CHECK(p.oscillation(i) == 0.0);
  }
  SUBCASE("flags are exactly the vertices with a neighbour across the interface") {
    const VertexSet flags = jump_flags(u, 1.5 * h, 0.5);
    VertexSet expected(n * n);
    for (std::size_t j = 0; j < n; ++j) {
      expected.insert(grid_vertex(n, n / 2 - 1, j));
      expected.insert(grid_vertex(n, n / 2, j));
    }
    CHECK(flags == expected);
  }
  SUBCASE("trimming ignores a single outlier") {
    std::vector<double> vals(n * n, 0.0);
    vals[grid_vertex(n, 10, 10)] = 5.0;
    const double radii[] = {4.5 * h};
    const OscillationProfile p = oscillation_profile(BvFunction(g, vals), grid_vertex(n, 11, 10), radii);
    CHECK(p.oscillation(0) == 0.0);
  }
  const double bad[] = {2.0 * h, 1.0 * h};
  CHECK_THROWS_AS(oscillation_profile(u, 0, bad), Error);
}

TEST_CASE("l1 distance") {
  auto p3 = build_path(3, 1.0, 2.0);
  CHECK(l1_distance(BvFunction(p3, {0.0, 1.0, 2.0}), BvFunction(p3, {1.0, 1.0, 0.0}), VertexSet::all(3)) == 6.0);
  CHECK(l1_distance(BvFunction(p3, {0.0, 1.0, 2.0}), BvFunction(p3, {1.0, 1.0, 0.0}), VertexSet::of(3, {1})) == 0.0);
}
